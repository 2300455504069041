#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace loopcheck::dynamics {

/// Right-hand side of an ODE system: dx/dt = eval(x, u, t). `eval` writes the
/// derivative into `dxdt`, which has exactly `dimension` entries.
struct VectorField {
    int dimension = 0;
    std::function<void(std::span<const double> x, std::span<const double> u, double t,
                       std::span<double> dxdt)>
        eval;
};

enum class StepMethod {
    explicit_euler,
    classical_rk4,
};

std::string step_method_name(StepMethod method);

/// One fixed step of the chosen method with the input held constant over
/// [t, t+dt]. Deterministic; throws NonFiniteState if the field or the
/// result goes non-finite.
std::vector<double> step(const VectorField& field, StepMethod method,
                         std::span<const double> x, std::span<const double> u, double t,
                         double dt);

/// n fixed steps from x0; inputs[i] is held over step i. Returns the n+1
/// visited states, trajectory[0] == x0.
std::vector<std::vector<double>> integrate(const VectorField& field, StepMethod method,
                                           std::vector<double> x0,
                                           const std::vector<std::vector<double>>& inputs,
                                           double dt, int n);

}  // namespace loopcheck::dynamics
