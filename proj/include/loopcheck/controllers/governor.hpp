#pragma once

#include "loopcheck/dynamics/integrator.hpp"

namespace loopcheck::controllers {

/// Flyball governor: a damped conical pendulum spun at the shaft speed. The
/// arm angle theta maps through the linkage to the collar height
/// x = c0 + c1*cos(theta) (c1 < 0, so rising speed raises the collar), and
/// the lever turns the collar offset from the set point into a valve command.
struct GovernorController {
    double theta = 0.0;      // arm angle, radian, in [0, pi/2)
    double theta_dot = 0.0;  // radian/second
    double l1 = 1.0;         // arm length, metre, > 0
    double beta = 0.0;       // damping, 1/second, >= 0
    double g = 9.81;         // m/s^2
    double c0 = 0.0;         // collar linkage offset, metre
    double c1 = -1.0;        // collar linkage gain, metre, < 0
    double x_re = 0.0;       // collar set point, metre
    double valve_gain = 1.0; // fraction/metre
    double v0 = 0.0;         // valve bias, fraction
};

struct GovernorOutput {
    double valve_cmd = 0.0;  // fraction in [0,1]
    double x = 0.0;          // collar height, metre
    GovernorController ctl;  // arm state after the step
};

/// Advance the arm one step at shaft speed omega and read off the valve
/// command: theta'' = omega^2 sin(theta)cos(theta) - (g/l1) sin(theta)
///                    - beta * theta',
/// x = c0 + c1*cos(theta), valve = clamp(v0 + valve_gain*(x_re - x), 0, 1).
GovernorOutput governor_step(GovernorController ctl, double omega, double dt,
                             dynamics::StepMethod method);

/// Collar height at a given arm angle.
double governor_collar_height(const GovernorController& ctl, double theta);

/// Valve command for a given collar height.
double governor_valve_command(const GovernorController& ctl, double x);

}  // namespace loopcheck::controllers
