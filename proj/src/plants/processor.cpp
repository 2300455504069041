#include "loopcheck/plants/processor.hpp"

#include <bit>

#include "loopcheck/errors.hpp"

namespace loopcheck::plants {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_draw(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t bits = splitmix64(seed ^ splitmix64(counter));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;  // uniform in [0,1)
}

/// Fetch storage[pc] through the channel: at most one uniformly chosen bit
/// flips, with probability p_flip (or always, while force_flip is set).
std::uint16_t fetch_through_channel(ProcessorPlant& plant, std::uint64_t seed) {
    const std::uint64_t attempt = plant.fetch_attempts++;
    std::uint16_t word = plant.storage[static_cast<std::size_t>(plant.pc)];
    const bool flip =
        plant.force_flip || (plant.p_flip > 0.0 && unit_draw(seed, attempt) < plant.p_flip);
    if (flip) {
        const int bit = static_cast<int>(splitmix64(seed ^ splitmix64(~attempt)) % 16);
        word = static_cast<std::uint16_t>(word ^ (std::uint16_t{1} << bit));
        ++plant.flips;
    }
    return word;
}

}  // namespace

std::uint16_t make_stored_word(std::uint16_t payload15) {
    if (payload15 >= (1u << 15)) throw Error("payload exceeds 15 bits");
    std::uint16_t word = static_cast<std::uint16_t>(payload15 << 1);
    if (std::popcount(word) % 2 == 0) word |= 1u;  // parity bit makes popcount odd
    return word;
}

bool negative_parity(std::uint16_t word) { return std::popcount(word) % 2 == 1; }

std::uint16_t word_payload(std::uint16_t word) { return static_cast<std::uint16_t>(word >> 1); }

std::vector<std::uint16_t> make_program(std::uint64_t program_seed, int words) {
    std::vector<std::uint16_t> program;
    program.reserve(static_cast<std::size_t>(words));
    for (int i = 0; i < words; ++i) {
        const auto payload = static_cast<std::uint16_t>(
            splitmix64(program_seed + static_cast<std::uint64_t>(i)) & 0x7fffu);
        program.push_back(make_stored_word(payload));
    }
    return program;
}

std::uint16_t halt_word() { return make_stored_word(0); }

ProcessorStepResult processor_step(ProcessorPlant plant, ProcessorSignal signal,
                                   std::uint64_t seed) {
    if (plant.halted) throw HaltedProgram();
    if (plant.storage.empty()) throw Error("processor has no program");

    switch (signal) {
        case ProcessorSignal::proceed:
            if (plant.pending) {
                // Commit the verified word, then move the checkpoint past it.
                plant.acc = static_cast<std::uint16_t>(plant.acc + word_payload(*plant.pending));
                plant.pending.reset();
                plant.pc += 1;
                plant.checkpoint = {plant.pc, plant.acc};
            }
            break;
        case ProcessorSignal::reset:
            plant.pc = plant.checkpoint.pc;
            plant.acc = plant.checkpoint.acc;
            plant.pending.reset();
            break;
    }

    if (plant.pc >= static_cast<int>(plant.storage.size())) {
        plant.halted = true;
        return {plant, halt_word()};
    }

    const std::uint16_t fetched = fetch_through_channel(plant, seed);
    plant.pending = fetched;
    return {plant, fetched};
}

}  // namespace loopcheck::plants
