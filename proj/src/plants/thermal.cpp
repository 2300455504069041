#include "loopcheck/plants/thermal.hpp"

#include <array>
#include <cmath>

#include "loopcheck/errors.hpp"

namespace loopcheck::plants {

namespace {

dynamics::VectorField thermal_field(const ThermalPlant& params) {
    dynamics::VectorField field;
    field.dimension = 1;
    field.eval = [params](std::span<const double> x, std::span<const double> u, double,
                          std::span<double> dxdt) {
        dxdt[0] = (u[0] * params.P_max - params.k_loss * (x[0] - params.T_amb)) / params.C_th;
    };
    return field;
}

}  // namespace

ThermalPlant thermal_step(const ThermalPlant& plant, double u, double dt,
                          dynamics::StepMethod method) {
    if (u < 0.0 || u > 1.0) throw Error("heater fraction must lie in [0,1]");
    const std::array<double, 1> x{plant.T};
    const std::array<double, 1> input{u};
    ThermalPlant next = plant;
    next.T = dynamics::step(thermal_field(plant), method, x, input, 0.0, dt)[0];
    return next;
}

double thermal_abstract_step(double T0, double u, double dt, const ThermalPlant& params) {
    if (params.k_loss == 0.0) return T0 + u * params.P_max * dt / params.C_th;
    const double T_eq = params.T_amb + u * params.P_max / params.k_loss;
    return T_eq + (T0 - T_eq) * std::exp(-params.k_loss * dt / params.C_th);
}

}  // namespace loopcheck::plants
