#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "maxwell/poly.hpp"
#include "maxwell/tanner.hpp"

namespace maxwell {

struct OracleBoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact rational with long long terms; arithmetic through __int128.
struct Frac {
    long long num = 0;
    long long den = 1;
    Frac() = default;
    Frac(long long n, long long d);
    Frac operator+(const Frac& o) const;
    Frac operator*(const Frac& o) const;
    bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
};

struct BruteForceList {
    int dimension = 0;                // log2 of the list size
    std::vector<uint64_t> words;      // codeword supports (enumerated when dimension <= 20)
};

// All codewords consistent with the received zeros: the null space of the
// check matrix restricted to the erased positions. Refuses when the solution
// space dimension exceeds max_dim.
BruteForceList brute_force_list(const TannerGraph& g, const std::vector<char>& erased,
                                int max_dim = 25);

struct ExactExit {
    int n = 0;
    int k = 0;                    // n - rank(H)
    std::vector<Poly> per_bit;    // h_i(eps) in the power basis
    Poly average;
    Frac integral;                // exact integral of the average EXIT over [0,1]
};

// For every bit i and erasure subset S of the other positions, bit i is MAP
// undetermined iff a codeword has support inside S u {i} containing i. Exact
// subset enumeration; requires n <= 20 and k <= max_k.
ExactExit exact_exit_polynomial(const TannerGraph& g, int max_k = 15);

// Small named codes for fixtures and GLDPC component curves.
TannerGraph single_parity_graph(int n);
TannerGraph repetition_graph(int n);
TannerGraph hamming_graph(int m_bits);  // [2^m - 1, 2^m - 1 - m]

}  // namespace maxwell
