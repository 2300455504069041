#pragma once

#include "loopcheck/dynamics/integrator.hpp"

namespace loopcheck::plants {

/// Lumped thermal plant (room or cabin) heated against Newton-cooling losses:
/// C_th * dT/dt = u * P_max - k_loss * (T - T_amb).
struct ThermalPlant {
    double T = 0.0;       // kelvin
    double T_amb = 0.0;   // kelvin
    double C_th = 1.0;    // joule/kelvin, > 0
    double k_loss = 0.0;  // watt/kelvin, >= 0
    double P_max = 0.0;   // watt, >= 0
};

/// One numerical step with the heater fraction u in [0,1] held over dt.
ThermalPlant thermal_step(const ThermalPlant& plant, double u, double dt,
                          dynamics::StepMethod method);

/// Exact solution of the same linear law over [0, dt] with u held:
/// T_eq + (T0 - T_eq) * exp(-k_loss * dt / C_th), T_eq = T_amb + u*P_max/k_loss.
/// Degenerates to T0 + u*P_max*dt/C_th when k_loss == 0.
double thermal_abstract_step(double T0, double u, double dt, const ThermalPlant& params);

}  // namespace loopcheck::plants
