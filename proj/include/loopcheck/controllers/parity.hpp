#pragma once

#include <bit>
#include <cstdint>

#include "loopcheck/plants/processor.hpp"

namespace loopcheck::controllers {

/// Memory-parity controller. Its reference is fixed: stored words carry
/// negative (odd) parity, so a word arriving with positive parity has been
/// corrupted in transit and the processor must roll back.
struct ParityController {};  // the reference is a constant of the device

inline plants::ProcessorSignal parity_decide(const ParityController&, std::uint16_t word) {
    return std::popcount(word) % 2 == 1 ? plants::ProcessorSignal::proceed
                                        : plants::ProcessorSignal::reset;
}

}  // namespace loopcheck::controllers
