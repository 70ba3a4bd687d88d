#pragma once

#include <cstdint>
#include <vector>

#include "maxwell/gf2.hpp"
#include "maxwell/tanner.hpp"

namespace maxwell {

struct PeelResult {
    std::vector<char> residual_vars;  // maximal stopping set inside the erased set
    long decoded_count = 0;
};

// All-zero codeword assumption: the erasure pattern fully specifies the run.
PeelResult peel_bp(const TannerGraph& g, const std::vector<char>& erased);

enum class EventKind { decode, guess, condition };

struct RunEvent {
    EventKind kind;
    int bit;
    long time;
};

struct MaxwellRun {
    std::vector<RunEvent> events;
    std::vector<GuessExpr> conditions;                  // every nonempty parity condition
    std::vector<std::pair<long, long>> trajectory;     // (determined_count, entropy_bits)
    std::vector<char> guessed;                          // channel label g per variable
    long guesses = 0;
    long condition_rank = 0;
    long final_entropy = 0;  // guesses - rank = log2(compatible codeword count)
    long cancellations = 0;  // complete cancellations at checks (diagnostic)
};

struct GuessStrategy {
    enum Kind { sequential, rounds } kind = sequential;
    double delta_gamma = 0.01;  // rounds mode step
};

MaxwellRun maxwell_decode(const TannerGraph& g, const std::vector<char>& erased,
                          const GuessStrategy& strategy, uint64_t seed);

// Right-hand side of the independent-guess counting bound, evaluated from the
// three-valued message fixpoint of the finished run.
long guess_count_lower_bound(const TannerGraph& g, const std::vector<char>& erased,
                             const MaxwellRun& run);

}  // namespace maxwell
