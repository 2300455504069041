#include "loopcheck/core/representation.hpp"

namespace loopcheck::core {

AbstractState represent(const RepresentationPair& rep, const PhysicalState& p) {
    for (const std::string& name : rep.declared_quantities) {
        if (!p.has(name)) throw MissingQuantity(name);
    }
    return rep.represent_fn(p);
}

PhysicalState instantiate(const RepresentationPair& rep, const AbstractState& m) {
    if (!rep.instantiate_fn) throw NonInvertible(rep.theory_tag);
    for (const std::string& name : rep.declared_values) {
        if (!m.has(name)) throw MissingValue(name);
    }
    return rep.instantiate_fn(m);
}

RepresentationPair identity_representation(std::string theory_tag,
                                           std::vector<std::pair<std::string, Unit>> quantities) {
    RepresentationPair rep;
    rep.theory_tag = std::move(theory_tag);
    for (const auto& [name, _] : quantities) {
        rep.declared_quantities.push_back(name);
        rep.declared_values.push_back(name);
    }
    rep.represent_fn = [quantities](const PhysicalState& p) {
        AbstractState m;
        for (const auto& [name, _] : quantities) m.set_real(name, p.real(name));
        return m;
    };
    rep.instantiate_fn = [quantities](const AbstractState& m) {
        PhysicalState p;
        for (const auto& [name, unit] : quantities) p.set(name, m.real(name), unit);
        return p;
    };
    return rep;
}

}  // namespace loopcheck::core
