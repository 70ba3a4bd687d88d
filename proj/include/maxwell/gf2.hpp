#pragma once

#include <cstdint>
#include <vector>

namespace maxwell {

// XOR set of guess indices in canonical sorted form; the value of a bit is
// the GF(2) sum of the listed guesses plus the constant.
struct GuessExpr {
    std::vector<uint32_t> idx;

    bool empty() const { return idx.empty(); }
    void xor_with(const GuessExpr& o);
    static GuessExpr single(uint32_t g) { return GuessExpr{{g}}; }
};

// Incremental GF(2) row rank over guess-index bitsets.
class Gf2Rank {
public:
    // returns true when the row was independent (rank grew)
    bool add(const GuessExpr& row);
    std::size_t rank() const { return pivots_.size(); }

private:
    struct Row {
        uint32_t pivot;
        std::vector<uint64_t> bits;
    };
    std::vector<Row> pivots_;  // kept pivot-descending
};

// Rank of a dense GF(2) matrix given as bit-rows over `cols` columns.
std::size_t gf2_rank(std::vector<std::vector<uint64_t>> rows, std::size_t cols);

}  // namespace maxwell
