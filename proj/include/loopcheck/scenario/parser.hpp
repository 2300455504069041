#pragma once

#include <string>
#include <vector>

#include "loopcheck/scenario/scenario.hpp"

namespace loopcheck::scenario {

/// Parse a scenario source. The grammar is line-oriented: bare statements
/// (`scenario "name"`, `topology serial`, `reference 0.7`) plus named blocks
/// of `key = value` pairs; `#` starts a comment. Unknown statements, blocks,
/// and keys are rejected with a ParseError naming line and column; semantic
/// violations (dt <= 0, missing blocks, bad parameter ranges) raise
/// ValidationError.
ControlScenario parse_scenario(const std::string& text);

/// Same, with `block.key=value` overrides (e.g. "epsilon.plant=1e-9",
/// "controller.valve_gain=2", "topology=parallel") applied to the raw
/// key/value structure before validation, so a bad override fails with the
/// same diagnostics as the equivalent source edit.
ControlScenario parse_scenario(const std::string& text,
                               const std::vector<std::string>& overrides);

/// Canonical source text for a scenario. parse(serialize(parse(text)))
/// equals parse(text); real values print with full round-trip precision.
std::string serialize_scenario(const ControlScenario& sc);

/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string scenario_hash(const ControlScenario& sc);

}  // namespace loopcheck::scenario
