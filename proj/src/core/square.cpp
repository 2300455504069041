#include "loopcheck/core/square.hpp"

#include "loopcheck/errors.hpp"

namespace loopcheck::core {

CommutationReport check_square(const CommutationSquare& square) {
    CommutationReport report;
    report.epsilon = square.epsilon;

    report.corners.initial_physical = square.initial_physical;
    report.corners.initial_abstract = represent(square.rep, square.initial_physical);
    report.corners.abstract_outcome = square.abstract_evolution(report.corners.initial_abstract);
    report.corners.final_physical = square.physical_evolution(square.initial_physical);
    report.corners.represented_outcome = represent(square.rep, report.corners.final_physical);

    report.residual =
        distance(square.metric, report.corners.abstract_outcome, report.corners.represented_outcome);
    report.commutes = report.residual <= report.epsilon;
    return report;
}

std::vector<CommutationReport> check_cube(const ComputeCube& cube) {
    // Shared-corner invariants hold before any square is scored.
    const PhysicalState encoded = cube.encode_square.physical_evolution(cube.encode_square.initial_physical);
    if (!(encoded == cube.controller_face.initial_physical))
        throw CornerMismatch("encode output vs controller input");
    const PhysicalState computed = cube.controller_face.physical_evolution(cube.controller_face.initial_physical);
    if (!(computed == cube.decode_square.initial_physical))
        throw CornerMismatch("controller output vs decode input");

    std::vector<CommutationReport> reports;
    reports.reserve(4);
    reports.push_back(check_square(cube.encode_square));
    reports.push_back(check_square(cube.controller_face));
    reports.push_back(check_square(cube.decode_square));
    reports.push_back(check_square(cube.plant_face));
    return reports;
}

}  // namespace loopcheck::core
