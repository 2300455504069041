#pragma once

#include <string>

#include "loopcheck/scenario/scenario.hpp"

namespace loopcheck::io {

/// CSV view of a trace: the pinned header
/// `cycle,t,y,e_or_c,s,res_encode,res_controller,res_decode,res_plant`
/// plus one row per cycle. Real values print with full round-trip precision.
std::string trace_to_csv(const scenario::Trace& trace);

/// JSON view: mirrors the trace field for field, corner states included,
/// with the scenario hash embedded.
std::string trace_to_json(const scenario::Trace& trace);

/// Inverse of trace_to_json. A re-imported trace verifies to the same
/// verdict as the original.
scenario::Trace trace_from_json(const std::string& text);

}  // namespace loopcheck::io
