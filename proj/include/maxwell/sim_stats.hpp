#pragma once

#include <cstdint>
#include <vector>

#include "maxwell/ensemble.hpp"
#include "maxwell/maxwell_decoder.hpp"

namespace maxwell {

// Per-trial RNG streams derived from the master seed XOR trial index;
// aggregation is by trial index, so results are independent of scheduling.
std::vector<MaxwellRun> run_trials(const DDPair& dd, int n, double epsilon, int trials,
                                   uint64_t seed, const GuessStrategy& strategy, int threads = 0);

struct TrajectoryBin {
    double determined = 0.0;  // bin center, determined fraction
    double mean = 0.0;        // entropy per bit
    double q05 = 0.0;
    double q95 = 0.0;
};

struct TrajectoryStats {
    std::vector<TrajectoryBin> bins;
};

TrajectoryStats trajectory_stats(const std::vector<MaxwellRun>& runs, int n_bits, int bins);

struct Concentration {
    double mean = 0.0;    // final entropy per bit
    double stddev = 0.0;
    double zero_fraction = 0.0;  // trials ending at entropy 0
    int trials = 0;
};

Concentration entropy_concentration(const DDPair& dd, int n, double epsilon, int trials,
                                    uint64_t seed,
                                    const GuessStrategy& strategy = GuessStrategy{},
                                    int threads = 0);

int thread_budget(int requested = 0);  // MAXWELL_THREADS cap

}  // namespace maxwell
