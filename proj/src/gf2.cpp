#include "maxwell/gf2.hpp"

#include <algorithm>

namespace maxwell {

void GuessExpr::xor_with(const GuessExpr& o) {
    std::vector<uint32_t> out;
    out.reserve(idx.size() + o.idx.size());
    std::size_t i = 0, j = 0;
    while (i < idx.size() && j < o.idx.size()) {
        if (idx[i] < o.idx[j])
            out.push_back(idx[i++]);
        else if (idx[i] > o.idx[j])
            out.push_back(o.idx[j++]);
        else {
            ++i;
            ++j;
        }  // pairs cancel
    }
    out.insert(out.end(), idx.begin() + i, idx.end());
    out.insert(out.end(), o.idx.begin() + j, o.idx.end());
    idx = std::move(out);
}

namespace {

inline uint32_t top_bit(const std::vector<uint64_t>& bits) {
    for (std::size_t w = bits.size(); w-- > 0;) {
        if (bits[w]) return static_cast<uint32_t>(w * 64 + (63 - __builtin_clzll(bits[w])));
    }
    return UINT32_MAX;
}

}  // namespace

bool Gf2Rank::add(const GuessExpr& row) {
    if (row.empty()) return false;
    std::vector<uint64_t> bits((row.idx.back() / 64) + 1, 0);
    for (uint32_t g : row.idx) bits[g / 64] |= 1ull << (g % 64);
    uint32_t p = top_bit(bits);
    while (p != UINT32_MAX) {
        const Row* hit = nullptr;
        for (const Row& r : pivots_)
            if (r.pivot == p) {
                hit = &r;
                break;
            }
        if (!hit) break;
        for (std::size_t w = 0; w < hit->bits.size() && w < bits.size(); ++w)
            bits[w] ^= hit->bits[w];
        p = top_bit(bits);
    }
    if (p == UINT32_MAX) return false;
    pivots_.push_back({p, std::move(bits)});
    return true;
}

std::size_t gf2_rank(std::vector<std::vector<uint64_t>> rows, std::size_t cols) {
    std::size_t rank = 0;
    std::size_t words = (cols + 63) / 64;
    for (auto& r : rows) r.resize(words, 0);
    for (std::size_t c = cols; c-- > 0 && rank < rows.size();) {
        std::size_t w = c / 64;
        uint64_t mask = 1ull << (c % 64);
        std::size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot][w] & mask)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != rank && (rows[i][w] & mask))
                for (std::size_t k = 0; k < words; ++k) rows[i][k] ^= rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace maxwell
