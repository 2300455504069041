#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "loopcheck/core/abstract_state.hpp"
#include "loopcheck/core/physical_state.hpp"

namespace loopcheck::core {

/// A representation map (physical -> abstract) paired with its engineered
/// inverse, the instantiation map (abstract -> physical). Both are total over
/// declared name subsets only; the maps never read undeclared quantities.
/// An empty instantiate function declares the pair one-way.
struct RepresentationPair {
    std::string theory_tag;
    std::vector<std::string> declared_quantities;  // physical names represent() reads
    std::vector<std::string> declared_values;      // abstract names instantiate() reads
    std::function<AbstractState(const PhysicalState&)> represent_fn;
    std::function<PhysicalState(const AbstractState&)> instantiate_fn;
};

/// Map a physical state into the abstract layer.
/// Throws MissingQuantity if a declared quantity is absent from `p`.
AbstractState represent(const RepresentationPair& rep, const PhysicalState& p);

/// Map an abstract state back to a physical one.
/// Throws MissingValue for absent declared values, NonInvertible for
/// one-way pairs.
PhysicalState instantiate(const RepresentationPair& rep, const AbstractState& m);

/// Identity pair over a set of real quantities: each physical quantity maps
/// to a same-named real abstract value and back.
RepresentationPair identity_representation(std::string theory_tag,
                                           std::vector<std::pair<std::string, Unit>> quantities);

}  // namespace loopcheck::core
