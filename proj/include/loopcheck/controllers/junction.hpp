#pragma once

#include <cmath>
#include <utility>

#include "loopcheck/errors.hpp"

namespace loopcheck::controllers {

enum class Topology {
    serial,    // junction ahead of the controller: e = r - y
    parallel,  // junction ahead of the plant: s = r - c
};

/// The subtraction node of a feedback loop. Returns the error e (serial) or
/// the signal s (parallel); both are r - feedback.
inline double summing_junction(Topology topology, double r, double feedback) {
    (void)topology;  // same arithmetic either way; the name of the result differs
    if (!std::isfinite(r) || !std::isfinite(feedback))
        throw Error("summing junction needs finite inputs");
    return r - feedback;
}

/// Rewrite a parallel loop with a pure static-gain controller G as a serial
/// loop plus pre-filter: returns (G, r / G) so that G*(r/G - y) == r - G*y
/// for every y. Only the static-gain case has this closed form; anything
/// else is rejected.
inline std::pair<double, double> parallel_to_serial(double gain, double r) {
    if (gain == 0.0) throw ZeroGain();
    return {gain, r / gain};
}

}  // namespace loopcheck::controllers
