#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "loopcheck/errors.hpp"

namespace loopcheck::core {

/// Fixed-width bit word in the abstract layer.
struct BitWord {
    int width = 1;
    std::uint32_t value = 0;

    BitWord() = default;
    BitWord(int w, std::uint32_t v) : width(w), value(v) {
        if (width <= 0 || width > 32) throw Error("bit width out of range");
        if (width < 32 && value >= (std::uint32_t{1} << width))
            throw Error("bit word exceeds declared width");
    }

    friend bool operator==(const BitWord& a, const BitWord& b) {
        return a.width == b.width && a.value == b.value;
    }
};

/// An abstract value: real, boolean, or bit word.
using Value = std::variant<double, bool, BitWord>;

/// A state in the abstract layer: named values with unique names, stored in
/// a flat name-sorted vector (see PhysicalState for the rationale).
class AbstractState {
public:
    using Entry = std::pair<std::string, Value>;

    AbstractState() = default;

    bool has(const std::string& name) const { return find(name) != nullptr; }

    void set_real(const std::string& name, double v) { put(name, Value{v}); }
    void set_bool(const std::string& name, bool v) { put(name, Value{v}); }
    void set_bits(const std::string& name, BitWord w) { put(name, Value{w}); }

    const Value& value(const std::string& name) const {
        const Value* v = find(name);
        if (!v) throw MissingValue(name);
        return *v;
    }

    double real(const std::string& name) const {
        const Value& v = value(name);
        if (!std::holds_alternative<double>(v))
            throw KindMismatch("value '" + name + "' is not real");
        return std::get<double>(v);
    }

    bool boolean(const std::string& name) const {
        const Value& v = value(name);
        if (!std::holds_alternative<bool>(v))
            throw KindMismatch("value '" + name + "' is not boolean");
        return std::get<bool>(v);
    }

    BitWord bits(const std::string& name) const {
        const Value& v = value(name);
        if (!std::holds_alternative<BitWord>(v))
            throw KindMismatch("value '" + name + "' is not a bit word");
        return std::get<BitWord>(v);
    }

    /// Entries in name order.
    const std::vector<Entry>& values() const { return entries_; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const Entry& entry : entries_) out.push_back(entry.first);
        return out;
    }

    friend bool operator==(const AbstractState& a, const AbstractState& b) {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<Entry>::iterator lower_bound(const std::string& name) {
        return std::lower_bound(
            entries_.begin(), entries_.end(), name,
            [](const Entry& entry, const std::string& key) { return entry.first < key; });
    }

    const Value* find(const std::string& name) const {
        auto it = std::lower_bound(
            entries_.begin(), entries_.end(), name,
            [](const Entry& entry, const std::string& key) { return entry.first < key; });
        if (it == entries_.end() || it->first != name) return nullptr;
        return &it->second;
    }

    void put(const std::string& name, Value v) {
        auto it = lower_bound(name);
        if (it != entries_.end() && it->first == name) {
            it->second = std::move(v);
        } else {
            entries_.insert(it, Entry{name, std::move(v)});
        }
    }

    std::vector<Entry> entries_;
};

}  // namespace loopcheck::core
