#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "loopcheck/core/units.hpp"
#include "loopcheck/errors.hpp"

namespace loopcheck::core {

/// One named quantity of a physical state. For Unit::bits the value holds a
/// non-negative integer word and bit_width declares its width.
struct Quantity {
    double value = 0.0;
    Unit unit = Unit::dimensionless;
    int bit_width = 0;  // > 0 only for Unit::bits

    friend bool operator==(const Quantity& a, const Quantity& b) {
        return a.value == b.value && a.unit == b.unit && a.bit_width == b.bit_width;
    }
};

/// A snapshot of a physical system: a timestamp plus named, unit-tagged
/// quantities. Value type; stepping functions return new states. Quantities
/// sit in a flat name-sorted vector, so copies stay cheap even for states
/// that get duplicated every cycle.
class PhysicalState {
public:
    using Entry = std::pair<std::string, Quantity>;

    PhysicalState() = default;
    explicit PhysicalState(double time) : time_(time) {}

    double time() const { return time_; }
    void set_time(double t) {
        if (!std::isfinite(t)) throw NonFiniteState("physical time");
        time_ = t;
    }

    bool has(const std::string& name) const { return find(name) != nullptr; }

    void set(const std::string& name, double value, Unit unit = Unit::dimensionless) {
        put(name, Quantity{value, unit, 0});
    }

    void set_bits(const std::string& name, std::uint32_t word, int width) {
        if (width <= 0 || width > 32)
            throw Error("bit width out of range for quantity '" + name + "'");
        if (width < 32 && word >= (std::uint32_t{1} << width))
            throw Error("bit word '" + name + "' exceeds declared width");
        put(name, Quantity{static_cast<double>(word), Unit::bits, width});
    }

    const Quantity& quantity(const std::string& name) const {
        const Quantity* q = find(name);
        if (!q) throw MissingQuantity(name);
        return *q;
    }

    double real(const std::string& name) const { return quantity(name).value; }

    std::uint32_t word(const std::string& name) const {
        const Quantity& q = quantity(name);
        if (q.unit != Unit::bits) throw KindMismatch("quantity '" + name + "' is not a bit word");
        return static_cast<std::uint32_t>(q.value);
    }

    /// Entries in name order.
    const std::vector<Entry>& quantities() const { return entries_; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const Entry& entry : entries_) out.push_back(entry.first);
        return out;
    }

    friend bool operator==(const PhysicalState& a, const PhysicalState& b) {
        return a.time_ == b.time_ && a.entries_ == b.entries_;
    }

private:
    std::vector<Entry>::iterator lower_bound(const std::string& name) {
        return std::lower_bound(
            entries_.begin(), entries_.end(), name,
            [](const Entry& entry, const std::string& key) { return entry.first < key; });
    }

    const Quantity* find(const std::string& name) const {
        auto it = std::lower_bound(
            entries_.begin(), entries_.end(), name,
            [](const Entry& entry, const std::string& key) { return entry.first < key; });
        if (it == entries_.end() || it->first != name) return nullptr;
        return &it->second;
    }

    void put(const std::string& name, Quantity q) {
        auto it = lower_bound(name);
        if (it != entries_.end() && it->first == name) {
            it->second = q;
        } else {
            entries_.insert(it, Entry{name, q});
        }
    }

    double time_ = 0.0;
    std::vector<Entry> entries_;
};

}  // namespace loopcheck::core
