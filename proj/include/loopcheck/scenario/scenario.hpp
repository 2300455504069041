#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopcheck/controllers/junction.hpp"
#include "loopcheck/core/square.hpp"
#include "loopcheck/dynamics/integrator.hpp"

namespace loopcheck::scenario {

/// A mid-run step change of one plant parameter (a load step, an ambient
/// step). Disturbances touch parameters only, never states.
struct Disturbance {
    long cycle = 0;
    std::string param;
    double value = 0.0;

    friend bool operator==(const Disturbance&, const Disturbance&) = default;
};

/// A parsed, validated experiment description.
struct ControlScenario {
    std::string name;
    controllers::Topology topology = controllers::Topology::serial;

    std::string plant_kind;  // thermal | engine | processor
    std::map<std::string, double> plant_params;

    std::string controller_kind;  // bangbang | proportional | bimetal | governor | human | parity
    std::map<std::string, double> controller_params;

    std::optional<double> reference;  // junction reference (proportional only)

    double dt = 0.0;
    long cycles = 0;
    dynamics::StepMethod integrator = dynamics::StepMethod::classical_rk4;
    std::uint64_t seed = 0;
    std::optional<double> initial_signal;  // overrides the neutral default s(t0)

    std::map<std::string, double> epsilon;  // encode / controller / decode / plant

    std::vector<Disturbance> disturbances;

    friend bool operator==(const ControlScenario&, const ControlScenario&) = default;
};

/// Fixed report order within every cycle.
inline constexpr std::array<const char*, 4> kSquareNames = {"encode", "controller", "decode",
                                                            "plant"};

/// Everything one cycle produced: the loop values, both final states, and
/// the four commutation reports in kSquareNames order.
struct CycleRecord {
    long cycle = 0;
    double t = 0.0;       // cycle * dt
    double y = 0.0;       // plant output, represented
    double e_or_c = 0.0;  // junction input: error e (serial) or signal c (parallel)
    double s = 0.0;       // signal issued this cycle
    core::PhysicalState plant_state;
    core::PhysicalState controller_state;
    std::array<core::CommutationReport, 4> reports;
};

struct FirstFailure {
    long cycle = 0;
    std::string square;

    friend bool operator==(const FirstFailure&, const FirstFailure&) = default;
};

/// A completed run: one record per cycle plus the pass/fail verdict.
struct Trace {
    std::string scenario_name;
    std::string scenario_hash;  // over the canonical serialization
    double dt = 0.0;
    long cycles = 0;
    std::map<std::string, double> epsilon;
    std::vector<CycleRecord> records;
    bool pass = false;
    std::optional<FirstFailure> first_failure;
};

/// Aggregated commutation results across a whole trace.
struct VerificationReport {
    std::array<long, 4> pass_counts{};     // per square kind, kSquareNames order
    std::array<double, 4> max_residuals{};
    long cycles = 0;
    bool pass = false;
    std::optional<FirstFailure> first_failure;
};

}  // namespace loopcheck::scenario
