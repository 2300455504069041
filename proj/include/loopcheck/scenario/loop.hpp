#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopcheck/scenario/scenario.hpp"

namespace loopcheck::scenario {

/// Where a cycle's plant input signal comes from: the scenario default for
/// cycle 0, the previous cycle's controller output after that.
struct SignalSource {
    enum class Kind { scenario_default, prior_cycle };
    Kind kind = Kind::scenario_default;
    long cycle = -1;

    friend bool operator==(const SignalSource&, const SignalSource&) = default;
};

/// One entry of the unwound schedule: the plant evolves over
/// [t_start, t_end] under `plant_input`, the controller consumes y(t_start)
/// and emits the next signal, and the cycle's four squares get checked.
struct CyclePlan {
    long index = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    SignalSource plant_input;
    std::vector<Disturbance> disturbances;  // applied before stepping
};

/// Unwind the feedback loop into an explicit cycle schedule.
std::vector<CyclePlan> unwind(const ControlScenario& sc);

/// Execute the schedule: per cycle, build the compute cube (encode,
/// controller, decode, plant squares), check it, and record everything.
/// Deterministic given (scenario, seed).
Trace run(const ControlScenario& sc);

/// Aggregate a trace's reports into per-square pass counts, max residuals,
/// and an overall verdict. The overload with `epsilon` re-scores the stored
/// residuals against different tolerances.
VerificationReport verify(const Trace& trace);
VerificationReport verify(const Trace& trace, const std::map<std::string, double>& epsilon);

/// The representation pairs a scenario's squares are built from, exposed so
/// their round-trip contract can be exercised directly.
struct ScenarioRepresentations {
    core::RepresentationPair encode;
    core::RepresentationPair controller;
    core::RepresentationPair decode;
    core::RepresentationPair plant;
};
ScenarioRepresentations scenario_representations(const ControlScenario& sc);

/// Neutral default for s(t0) per controller kind (heater off, valve at v0,
/// knob at phi0, proceed), unless the scenario overrides it.
double default_initial_signal(const ControlScenario& sc);

}  // namespace loopcheck::scenario
