#pragma once

#include <map>
#include <string>

#include "loopcheck/core/abstract_state.hpp"

namespace loopcheck::core {

enum class MetricKind {
    absolute_difference,  // reals only: sum of |a - b| over components
    discrete,             // 0 if the states are equal, else 1
    weighted_sum,         // sum of w_i * d_i, d_i per component kind
};

/// Distance function over abstract states. Weighted-sum components use the
/// absolute difference for reals and the 0/1 discrete distance for booleans
/// and bit words; names missing from `weights` weigh 1.
struct Metric {
    MetricKind kind = MetricKind::absolute_difference;
    std::map<std::string, double> weights;  // weighted_sum only; must be >= 0
};

inline Metric absolute_metric() { return Metric{MetricKind::absolute_difference, {}}; }
inline Metric discrete_metric() { return Metric{MetricKind::discrete, {}}; }
inline Metric weighted_metric(std::map<std::string, double> weights = {}) {
    return Metric{MetricKind::weighted_sum, std::move(weights)};
}

/// d(a, b) >= 0 per the metric kind. Throws ShapeMismatch when the name sets
/// differ and KindMismatch when matching names hold different value kinds
/// (or reals are fed to the absolute-difference metric alongside non-reals).
double distance(const Metric& metric, const AbstractState& a, const AbstractState& b);

}  // namespace loopcheck::core
