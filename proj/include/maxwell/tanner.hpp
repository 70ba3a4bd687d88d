#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "maxwell/ensemble.hpp"

namespace maxwell {

struct TannerGraph {
    int n = 0;  // variable nodes
    int m = 0;  // check nodes
    std::vector<std::vector<int>> var_adj;  // per-variable incident checks
    std::vector<std::vector<int>> chk_adj;  // per-check incident variables
    uint64_t seed = 0;                      // RNG seed of record
    long multi_edges = 0;                   // parallel socket pairings kept
    long repair_delta = 0;                  // single-node degree repair applied
    long edges() const;
};

// Configuration-model realization: node counts per degree by largest-remainder
// rounding of the target node distributions, sockets paired by seeded shuffle.
// Multi-edges are kept unless simple = true (resampled pairings).
TannerGraph sample_graph(const DDPair& dd, int n, uint64_t seed, bool simple = false);

// Random cycle-free Tanner graph with all check degrees >= 2 (leaf nodes are
// variables); used by the tree counting tests.
TannerGraph sample_tree(int approx_vars, uint64_t seed);

// Adjacency text format: one line per variable, "v <var_index>: <check indices>"
void write_graph(std::ostream& os, const TannerGraph& g);
TannerGraph read_graph(std::istream& is);

// iid erasure pattern at BEC(eps)
std::vector<char> random_erasures(int n, double epsilon, uint64_t seed);

// Deterministic bounded uniform integer; avoids stdlib distribution variance.
class Rng {
public:
    explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9E3779B97F4A7C15ull) {}
    uint64_t next();
    // uniform in [0, n)
    uint64_t below(uint64_t n);
    double uniform01();

private:
    uint64_t s_;
};

}  // namespace maxwell
