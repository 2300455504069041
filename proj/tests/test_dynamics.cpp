#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "loopcheck/dynamics/integrator.hpp"
#include "loopcheck/errors.hpp"

using namespace loopcheck;
using namespace loopcheck::dynamics;

namespace {

VectorField zero_field() {
    VectorField f;
    f.dimension = 1;
    f.eval = [](std::span<const double>, std::span<const double>, double,
                std::span<double> dxdt) { dxdt[0] = 0.0; };
    return f;
}

/// dx/dt = -k * (x - target); exact solution target + (x0-target)*exp(-k t).
VectorField decay_field(double k, double target) {
    VectorField f;
    f.dimension = 1;
    f.eval = [k, target](std::span<const double> x, std::span<const double>, double,
                         std::span<double> dxdt) { dxdt[0] = -k * (x[0] - target); };
    return f;
}

VectorField constant_field(double rate) {
    VectorField f;
    f.dimension = 1;
    f.eval = [rate](std::span<const double>, std::span<const double>, double,
                    std::span<double> dxdt) { dxdt[0] = rate; };
    return f;
}

const std::array<double, 1> kNoInput{0.0};

double endpoint_error(StepMethod method, double dt) {
    // integrate dx/dt = -(x-10) from x0=20 over [0,1]
    const int n = static_cast<int>(std::lround(1.0 / dt));
    const std::vector<std::vector<double>> inputs(static_cast<std::size_t>(n),
                                                  std::vector<double>{0.0});
    const auto trajectory = integrate(decay_field(1.0, 10.0), method, {20.0}, inputs, dt, n);
    const double exact = 10.0 + 10.0 * std::exp(-1.0);
    return std::abs(trajectory.back()[0] - exact);
}

}  // namespace

TEST_CASE("step: zero field leaves the state unchanged") {
    for (StepMethod method : {StepMethod::explicit_euler, StepMethod::classical_rk4}) {
        const auto next = step(zero_field(), method, std::array{3.25}, kNoInput, 0.0, 1.0);
        CHECK(next[0] == 3.25);
    }
}

TEST_CASE("step: one Euler step of the decay field by hand") {
    // dx/dt = -0.1 (x - 10), x = 20, dt = 1  ->  20 - 0.1*10 = 19
    const auto next = step(decay_field(0.1, 10.0), StepMethod::explicit_euler, std::array{20.0},
                           kNoInput, 0.0, 1.0);
    CHECK(next[0] == 19.0);
}

TEST_CASE("step: rk4 lands within 1e-3 of the exponential") {
    const auto next = step(decay_field(0.1, 10.0), StepMethod::classical_rk4, std::array{20.0},
                           kNoInput, 0.0, 1.0);
    const double exact = 10.0 + 10.0 * std::exp(-0.1);  // 19.0484...
    CHECK(std::abs(next[0] - exact) < 1e-3);
}

TEST_CASE("step: non-finite field raises") {
    VectorField bad;
    bad.dimension = 1;
    bad.eval = [](std::span<const double>, std::span<const double>, double,
                  std::span<double> dxdt) { dxdt[0] = std::nan(""); };
    CHECK_THROWS_AS(step(bad, StepMethod::explicit_euler, std::array{1.0}, kNoInput, 0.0, 0.1),
                    NonFiniteState);
}

TEST_CASE("integrate: n=0 returns just the initial state") {
    const auto trajectory =
        integrate(decay_field(0.1, 10.0), StepMethod::classical_rk4, {20.0}, {}, 0.5, 0);
    REQUIRE(trajectory.size() == 1);
    CHECK(trajectory[0][0] == 20.0);
}

TEST_CASE("integrate: constant field grows linearly") {
    const std::vector<std::vector<double>> inputs(4, std::vector<double>{0.0});
    const auto trajectory =
        integrate(constant_field(1.0), StepMethod::explicit_euler, {0.0}, inputs, 0.5, 4);
    REQUIRE(trajectory.size() == 5);
    const double expected[] = {0.0, 0.5, 1.0, 1.5, 2.0};
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(trajectory[i][0] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("integrate: euler endpoint error obeys a first-order bound") {
    // fit C from two step sizes, then check a third sits under C*dt
    const double e1 = endpoint_error(StepMethod::explicit_euler, 0.1);
    const double e2 = endpoint_error(StepMethod::explicit_euler, 0.05);
    const double c_fit = std::max(e1 / 0.1, e2 / 0.05);
    const double e3 = endpoint_error(StepMethod::explicit_euler, 0.025);
    CHECK(e3 <= c_fit * 0.025 * 1.05);
}

TEST_CASE("convergence order: euler halves, rk4 divides by ~16") {
    const double dts[] = {0.1, 0.05, 0.025};
    double euler_err[3], rk4_err[3];
    for (int i = 0; i < 3; ++i) {
        euler_err[i] = endpoint_error(StepMethod::explicit_euler, dts[i]);
        rk4_err[i] = endpoint_error(StepMethod::classical_rk4, dts[i]);
    }
    for (int i = 0; i + 1 < 3; ++i) {
        const double euler_ratio = euler_err[i] / euler_err[i + 1];
        CHECK(euler_ratio > 2.0 * 0.8);
        CHECK(euler_ratio < 2.0 * 1.2);
        const double rk4_ratio = rk4_err[i] / rk4_err[i + 1];
        CHECK(rk4_ratio > 16.0 / 2.0);
        CHECK(rk4_ratio < 16.0 * 2.0);
    }
}

TEST_CASE("determinism: identical inputs give bit-identical trajectories") {
    const std::vector<std::vector<double>> inputs(50, std::vector<double>{0.7});
    VectorField f;
    f.dimension = 2;
    f.eval = [](std::span<const double> x, std::span<const double> u, double t,
                std::span<double> dxdt) {
        dxdt[0] = x[1] * u[0];
        dxdt[1] = -std::sin(x[0]) - 0.2 * x[1] + 0.1 * std::cos(t);
    };
    const auto a = integrate(f, StepMethod::classical_rk4, {0.3, 0.0}, inputs, 0.05, 50);
    const auto b = integrate(f, StepMethod::classical_rk4, {0.3, 0.0}, inputs, 0.05, 50);
    CHECK(a == b);
}

TEST_CASE("linearity: step commutes with state scaling for linear fields") {
    VectorField linear;
    linear.dimension = 1;
    linear.eval = [](std::span<const double> x, std::span<const double>, double,
                     std::span<double> dxdt) { dxdt[0] = -0.3 * x[0]; };
    for (StepMethod method : {StepMethod::explicit_euler, StepMethod::classical_rk4}) {
        const double base = step(linear, method, std::array{2.0}, kNoInput, 0.0, 0.1)[0];
        const double scaled = step(linear, method, std::array{2.0 * 37.5}, kNoInput, 0.0, 0.1)[0];
        CHECK(scaled == doctest::Approx(base * 37.5).epsilon(1e-12));
    }
}

TEST_CASE("integrate: input length must match the step count") {
    CHECK_THROWS_AS(
        integrate(constant_field(1.0), StepMethod::explicit_euler, {0.0},
                  {std::vector<double>{0.0}}, 0.5, 3),
        Error);
}
