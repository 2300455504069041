#include "loopcheck/plants/engine.hpp"

#include <algorithm>
#include <array>

namespace loopcheck::plants {

EnginePlant engine_step(const EnginePlant& plant, double valve_cmd, double dt,
                        dynamics::StepMethod method) {
    EnginePlant next = plant;
    next.valve = std::clamp(valve_cmd, 0.0, 1.0);

    dynamics::VectorField field;
    field.dimension = 1;
    field.eval = [&next](std::span<const double> x, std::span<const double> u, double,
                         std::span<double> dxdt) {
        (void)x;
        dxdt[0] = (next.tau_max * u[0] - next.tau_load) / next.J;
    };
    const std::array<double, 1> x{plant.omega};
    const std::array<double, 1> input{next.valve};
    next.omega = std::max(0.0, dynamics::step(field, method, x, input, 0.0, dt)[0]);
    return next;
}

double engine_abstract_step(double omega0, double valve, double dt, const EnginePlant& params) {
    return std::max(0.0, omega0 + (params.tau_max * valve - params.tau_load) * dt / params.J);
}

}  // namespace loopcheck::plants
