#include "loopcheck/core/metric.hpp"

#include <cmath>

#include "loopcheck/errors.hpp"

namespace loopcheck::core {

namespace {

void require_same_shape(const AbstractState& a, const AbstractState& b) {
    if (a.values().size() != b.values().size())
        throw ShapeMismatch("component counts differ");
    auto ia = a.values().begin();
    auto ib = b.values().begin();
    for (; ia != a.values().end(); ++ia, ++ib) {
        if (ia->first != ib->first)
            throw ShapeMismatch("'" + ia->first + "' vs '" + ib->first + "'");
        if (ia->second.index() != ib->second.index())
            throw KindMismatch("'" + ia->first + "'");
    }
}

double component_distance(const std::string& name, const Value& a, const Value& b) {
    if (std::holds_alternative<double>(a))
        return std::abs(std::get<double>(a) - std::get<double>(b));
    (void)name;
    return a == b ? 0.0 : 1.0;
}

}  // namespace

double distance(const Metric& metric, const AbstractState& a, const AbstractState& b) {
    require_same_shape(a, b);
    switch (metric.kind) {
        case MetricKind::absolute_difference: {
            double total = 0.0;
            for (const auto& [name, va] : a.values()) {
                if (!std::holds_alternative<double>(va))
                    throw KindMismatch("absolute-difference metric needs reals; '" + name +
                                       "' is not real");
                total += std::abs(std::get<double>(va) - std::get<double>(b.value(name)));
            }
            return total;
        }
        case MetricKind::discrete:
            return a == b ? 0.0 : 1.0;
        case MetricKind::weighted_sum: {
            double total = 0.0;
            for (const auto& [name, va] : a.values()) {
                auto it = metric.weights.find(name);
                const double w = it == metric.weights.end() ? 1.0 : it->second;
                if (w < 0.0) throw Error("negative metric weight for '" + name + "'");
                total += w * component_distance(name, va, b.value(name));
            }
            return total;
        }
    }
    throw Error("unknown metric kind");
}

}  // namespace loopcheck::core
