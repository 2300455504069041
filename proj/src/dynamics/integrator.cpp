#include "loopcheck/dynamics/integrator.hpp"

#include <cmath>

#include "loopcheck/errors.hpp"

namespace loopcheck::dynamics {

namespace {

void check_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw NonFiniteState(what);
    }
}

std::vector<double> eval_field(const VectorField& field, std::span<const double> x,
                               std::span<const double> u, double t) {
    std::vector<double> dxdt(static_cast<std::size_t>(field.dimension), 0.0);
    field.eval(x, u, t, dxdt);
    check_finite(dxdt, "vector field derivative");
    return dxdt;
}

}  // namespace

std::string step_method_name(StepMethod method) {
    return method == StepMethod::explicit_euler ? "euler" : "rk4";
}

std::vector<double> step(const VectorField& field, StepMethod method,
                         std::span<const double> x, std::span<const double> u, double t,
                         double dt) {
    if (dt <= 0.0) throw Error("step needs dt > 0");
    check_finite(x, "integrator input state");
    const std::size_t n = x.size();
    std::vector<double> next(x.begin(), x.end());

    switch (method) {
        case StepMethod::explicit_euler: {
            const std::vector<double> k1 = eval_field(field, x, u, t);
            for (std::size_t i = 0; i < n; ++i) next[i] += dt * k1[i];
            break;
        }
        case StepMethod::classical_rk4: {
            const std::vector<double> k1 = eval_field(field, x, u, t);
            std::vector<double> stage(n);
            for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * dt * k1[i];
            const std::vector<double> k2 = eval_field(field, stage, u, t + 0.5 * dt);
            for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * dt * k2[i];
            const std::vector<double> k3 = eval_field(field, stage, u, t + 0.5 * dt);
            for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + dt * k3[i];
            const std::vector<double> k4 = eval_field(field, stage, u, t + dt);
            for (std::size_t i = 0; i < n; ++i)
                next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            break;
        }
    }
    check_finite(next, "integrator output state");
    return next;
}

std::vector<std::vector<double>> integrate(const VectorField& field, StepMethod method,
                                           std::vector<double> x0,
                                           const std::vector<std::vector<double>>& inputs,
                                           double dt, int n) {
    if (static_cast<int>(inputs.size()) != n)
        throw Error("integrate needs one input vector per step");
    std::vector<std::vector<double>> trajectory;
    trajectory.reserve(static_cast<std::size_t>(n) + 1);
    trajectory.push_back(std::move(x0));
    for (int i = 0; i < n; ++i) {
        trajectory.push_back(
            step(field, method, trajectory.back(), inputs[static_cast<std::size_t>(i)],
                 static_cast<double>(i) * dt, dt));
    }
    return trajectory;
}

}  // namespace loopcheck::dynamics
