#pragma once

#include <functional>
#include <vector>

#include "loopcheck/core/metric.hpp"
#include "loopcheck/core/representation.hpp"

namespace loopcheck::core {

/// One commutation square: a physical state, its representation, and the two
/// competing evolutions. The square commutes when the abstract path
/// C(represent(p)) and the physical path represent(H(p)) land within epsilon
/// of each other under the metric.
struct CommutationSquare {
    PhysicalState initial_physical;
    RepresentationPair rep;
    std::function<AbstractState(const AbstractState&)> abstract_evolution;   // C
    std::function<PhysicalState(const PhysicalState&)> physical_evolution;   // H
    Metric metric;
    double epsilon = 0.0;
};

/// The corner states of a checked square, kept for diagnosis. The top-right
/// corner carries both competing values: the abstract-evolution outcome and
/// the represented physical outcome.
struct SquareCorners {
    PhysicalState initial_physical;
    PhysicalState final_physical;
    AbstractState initial_abstract;
    AbstractState abstract_outcome;     // C(represent(p))
    AbstractState represented_outcome;  // represent(H(p))
};

struct CommutationReport {
    double residual = 0.0;
    double epsilon = 0.0;
    bool commutes = false;  // residual <= epsilon
    SquareCorners corners;
};

/// Evaluate both paths of a square and compare them.
CommutationReport check_square(const CommutationSquare& square);

/// The four squares of one cycle, sharing corners: the encode square's
/// physical outcome is the controller face's initial state, and the
/// controller face's physical outcome is the decode square's initial state.
/// `problem` and `solution` are the cycle's abstract input and output.
struct ComputeCube {
    CommutationSquare encode_square;
    CommutationSquare controller_face;
    CommutationSquare decode_square;
    CommutationSquare plant_face;
    AbstractState problem;
    AbstractState solution;
};

/// Check all four squares; reports come back in the fixed order
/// [encode, controller, decode, plant]. Throws CornerMismatch if the shared
/// corners disagree before any checking happens.
std::vector<CommutationReport> check_cube(const ComputeCube& cube);

}  // namespace loopcheck::core
