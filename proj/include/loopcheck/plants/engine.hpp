#pragma once

#include "loopcheck/dynamics/integrator.hpp"

namespace loopcheck::plants {

/// Steam-engine shaft with a throttled torque source against a load:
/// J * domega/dt = tau_max * valve - tau_load, with omega floored at 0.
struct EnginePlant {
    double omega = 0.0;     // radian/second, >= 0
    double J = 1.0;         // kg m^2, > 0
    double tau_max = 0.0;   // newton metre
    double tau_load = 0.0;  // newton metre
    double valve = 0.0;     // fraction in [0,1]
};

/// One step: the commanded valve position is clamped to [0,1], stored, and
/// held while omega integrates over dt.
EnginePlant engine_step(const EnginePlant& plant, double valve_cmd, double dt,
                        dynamics::StepMethod method);

/// Exact linear solution: omega0 + (tau_max*valve - tau_load) * dt / J,
/// floored at 0.
double engine_abstract_step(double omega0, double valve, double dt, const EnginePlant& params);

}  // namespace loopcheck::plants
