#include "loopcheck/controllers/governor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace loopcheck::controllers {

namespace {

constexpr double kThetaMax = std::numbers::pi / 2.0 - 1e-6;

}  // namespace

double governor_collar_height(const GovernorController& ctl, double theta) {
    return ctl.c0 + ctl.c1 * std::cos(theta);
}

double governor_valve_command(const GovernorController& ctl, double x) {
    return std::clamp(ctl.v0 + ctl.valve_gain * (ctl.x_re - x), 0.0, 1.0);
}

GovernorOutput governor_step(GovernorController ctl, double omega, double dt,
                             dynamics::StepMethod method) {
    dynamics::VectorField field;
    field.dimension = 2;
    field.eval = [&ctl](std::span<const double> x, std::span<const double> u, double,
                        std::span<double> dxdt) {
        const double theta = x[0];
        const double w = u[0];
        dxdt[0] = x[1];
        dxdt[1] = w * w * std::sin(theta) * std::cos(theta) -
                  (ctl.g / ctl.l1) * std::sin(theta) - ctl.beta * x[1];
    };

    const std::array<double, 2> state{ctl.theta, ctl.theta_dot};
    const std::array<double, 1> input{omega};
    const std::vector<double> next = dynamics::step(field, method, state, input, 0.0, dt);

    ctl.theta = next[0];
    ctl.theta_dot = next[1];
    if (ctl.theta < 0.0 || ctl.theta > kThetaMax) {
        // hard mechanical stop: arrest the arm at the travel limit
        ctl.theta = std::clamp(ctl.theta, 0.0, kThetaMax);
        ctl.theta_dot = 0.0;
    }

    GovernorOutput out;
    out.x = governor_collar_height(ctl, ctl.theta);
    out.valve_cmd = governor_valve_command(ctl, out.x);
    out.ctl = ctl;
    return out;
}

}  // namespace loopcheck::controllers
