#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace loopcheck::plants {

/// Verdict signals sent back to the processor by its parity controller.
enum class ProcessorSignal {
    proceed,  // parity negative: commit and fetch the next word
    reset,    // parity positive: roll back and re-fetch
};

/// A minimal stored-program processor whose storage channel may corrupt a
/// fetched word with at most one bit flip. Words are 16 bits wide: a 15-bit
/// payload in bits 15..1 plus a parity bit at bit 0 chosen so every stored
/// word has negative (odd) parity. The single instruction accumulates
/// payloads: acc <- (acc + payload) mod 2^16.
struct ProcessorPlant {
    std::vector<std::uint16_t> storage;  // program words, each with odd parity
    int pc = 0;                          // index of the pending (last fetched) word
    std::uint16_t acc = 0;
    struct Checkpoint {
        int pc = 0;
        std::uint16_t acc = 0;
    } checkpoint;
    std::optional<std::uint16_t> pending;  // fetched, awaiting the parity verdict
    bool halted = false;

    // channel configuration and bookkeeping
    double p_flip = 0.0;              // per-fetch probability of one bit flip
    bool force_flip = false;          // corrupt every fetch while set
    std::uint64_t fetch_attempts = 0; // counts every fetch, re-fetches included
    std::uint64_t flips = 0;          // bit flips injected so far
};

struct ProcessorStepResult {
    ProcessorPlant plant;
    std::uint16_t fetched = 0;  // the possibly-corrupted word handed to the controller
};

/// Advance the processor by one memory cycle.
/// proceed: commit the pending word into acc, advance pc, move the checkpoint
/// forward, then fetch storage[pc] through the noisy channel. reset: restore
/// (pc, acc) from the checkpoint, discard the pending word, and re-fetch the
/// same address with a fresh noise draw. Once the final word is committed the
/// plant halts and reports a fixed odd-parity idle word; stepping a halted
/// plant throws HaltedProgram.
ProcessorStepResult processor_step(ProcessorPlant plant, ProcessorSignal signal,
                                   std::uint64_t seed);

/// Append the parity bit that gives a 15-bit payload odd total parity.
std::uint16_t make_stored_word(std::uint16_t payload15);

/// True when the word has odd population count (the no-error condition).
bool negative_parity(std::uint16_t word);

std::uint16_t word_payload(std::uint16_t word);

/// Deterministic pseudo-random program: `words` payloads derived from
/// `program_seed`, each wrapped with its parity bit.
std::vector<std::uint16_t> make_program(std::uint64_t program_seed, int words);

/// The idle word a halted plant keeps reporting (payload 0, odd parity).
std::uint16_t halt_word();

}  // namespace loopcheck::plants
