#include "maxwell/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace maxwell {

namespace {

long long igcd(long long a, long long b) {
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

long long reduce128(__int128 v, __int128 g) {
    __int128 r = v / g;
    if (r > INT64_MAX || r < INT64_MIN) throw std::overflow_error("Frac overflow");
    return static_cast<long long>(r);
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Frac::Frac(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Frac: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = igcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Frac Frac::operator+(const Frac& o) const {
    __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
    __int128 d = static_cast<__int128>(den) * o.den;
    __int128 g = gcd128(n, d);
    if (g == 0) g = 1;
    Frac r;
    r.num = reduce128(n, g);
    r.den = reduce128(d, g);
    if (r.den < 0) {
        r.num = -r.num;
        r.den = -r.den;
    }
    return r;
}

Frac Frac::operator*(const Frac& o) const {
    __int128 n = static_cast<__int128>(num) * o.num;
    __int128 d = static_cast<__int128>(den) * o.den;
    __int128 g = gcd128(n, d);
    if (g == 0) g = 1;
    Frac r;
    r.num = reduce128(n, g);
    r.den = reduce128(d, g);
    if (r.den < 0) {
        r.num = -r.num;
        r.den = -r.den;
    }
    return r;
}

namespace {

// rows as variable bitmasks (mod-2 incidence; parallel edges cancel)
std::vector<uint64_t> check_rows(const TannerGraph& g) {
    std::vector<uint64_t> rows(g.m, 0);
    for (int c = 0; c < g.m; ++c)
        for (int v : g.chk_adj[c]) rows[c] ^= 1ull << v;
    return rows;
}

// null-space basis of the rows restricted to the masked columns
std::vector<uint64_t> null_space(std::vector<uint64_t> rows, uint64_t col_mask, int n) {
    for (auto& r : rows) r &= col_mask;
    std::vector<int> pivot_of_col(n, -1);
    std::size_t rank = 0;
    for (int c = 0; c < n && rank < rows.size(); ++c) {
        if (!(col_mask >> c & 1)) continue;
        std::size_t p = rank;
        while (p < rows.size() && !(rows[p] >> c & 1)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[rank], rows[p]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && (rows[i] >> c & 1)) rows[i] ^= rows[rank];
        pivot_of_col[c] = static_cast<int>(rank);
        ++rank;
    }
    std::vector<uint64_t> basis;
    for (int c = 0; c < n; ++c) {
        if (!(col_mask >> c & 1) || pivot_of_col[c] >= 0) continue;
        uint64_t w = 1ull << c;  // free column
        for (int c2 = 0; c2 < n; ++c2) {
            if (pivot_of_col[c2] >= 0 && (rows[static_cast<std::size_t>(pivot_of_col[c2])] >> c & 1))
                w |= 1ull << c2;
        }
        basis.push_back(w);
    }
    return basis;
}

}  // namespace

BruteForceList brute_force_list(const TannerGraph& g, const std::vector<char>& erased,
                                int max_dim) {
    if (g.n > 63) throw OracleBoundError("brute_force_list: blocklength above 63");
    uint64_t mask = 0;
    for (int v = 0; v < g.n; ++v)
        if (erased[v]) mask |= 1ull << v;
    auto basis = null_space(check_rows(g), mask, g.n);
    BruteForceList out;
    out.dimension = static_cast<int>(basis.size());
    if (out.dimension > max_dim)
        throw OracleBoundError("brute_force_list: solution space dimension " +
                               std::to_string(out.dimension) + " exceeds bound " +
                               std::to_string(max_dim));
    if (out.dimension <= 20) {
        out.words.reserve(1ull << out.dimension);
        for (uint64_t sel = 0; sel < (1ull << out.dimension); ++sel) {
            uint64_t w = 0;
            for (int b = 0; b < out.dimension; ++b)
                if (sel >> b & 1) w ^= basis[b];
            out.words.push_back(w);
        }
        std::sort(out.words.begin(), out.words.end());
    }
    return out;
}

ExactExit exact_exit_polynomial(const TannerGraph& g, int max_k) {
    const int n = g.n;
    if (n > 20) throw OracleBoundError("exact_exit_polynomial: blocklength above 20");
    auto rows = check_rows(g);
    ExactExit out;
    out.n = n;
    out.k = static_cast<int>(null_space(rows, (1ull << n) - 1, n).size());
    if (out.k > max_k)
        throw OracleBoundError("exact_exit_polynomial: k = " + std::to_string(out.k) +
                               " exceeds bound " + std::to_string(max_k));

    // counts[i][s]: erasure subsets S of the other bits, |S| = s, leaving bit i
    // undetermined
    std::vector<std::vector<long long>> counts(n, std::vector<long long>(n, 0));
    const uint64_t full = (1ull << n) - 1;
    for (uint64_t T = 1; T <= full; ++T) {
        auto basis = null_space(rows, T, n);
        uint64_t undet = 0;
        for (uint64_t b : basis) undet |= b;
        if (!undet) continue;
        int s = __builtin_popcountll(T) - 1;
        uint64_t u = undet;
        while (u) {
            int i = __builtin_ctzll(u);
            u &= u - 1;
            ++counts[i][s];
        }
    }

    // factorials fit in long long for n <= 20
    std::vector<long long> fact(n + 1, 1);
    for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;

    // binomial expansion of eps^s (1-eps)^(n-1-s) into the power basis
    std::vector<double> avg(n, 0.0);
    __int128 int_sum = 0;  // sum over bits of n! * integral_i
    for (int i = 0; i < n; ++i) {
        std::vector<double> coef(n, 0.0);
        __int128 m = 0;
        for (int s = 0; s < n; ++s) {
            if (!counts[i][s]) continue;
            m += static_cast<__int128>(counts[i][s]) * fact[s] * fact[n - 1 - s];
            double c = static_cast<double>(counts[i][s]);
            int q = n - 1 - s;
            double binom = 1.0;
            for (int t = 0; t <= q; ++t) {
                coef[s + t] += c * ((t % 2) ? -binom : binom);
                binom = binom * (q - t) / (t + 1);
            }
        }
        out.per_bit.push_back(Poly(coef));
        for (int p = 0; p < n; ++p) avg[p] += coef[p] / n;
        int_sum += m;
    }
    out.average = Poly(avg);
    // integral = int_sum / (n * n!)
    __int128 den = static_cast<__int128>(n) * fact[n];
    __int128 gg = gcd128(int_sum, den);
    if (gg == 0) gg = 1;
    out.integral.num = reduce128(int_sum, gg);
    out.integral.den = reduce128(den, gg);
    return out;
}

TannerGraph single_parity_graph(int n) {
    TannerGraph g;
    g.n = n;
    g.m = 1;
    g.var_adj.assign(n, {0});
    g.chk_adj.resize(1);
    for (int v = 0; v < n; ++v) g.chk_adj[0].push_back(v);
    return g;
}

TannerGraph repetition_graph(int n) {
    TannerGraph g;
    g.n = n;
    g.m = n - 1;
    g.var_adj.assign(n, {});
    g.chk_adj.assign(n - 1, {});
    for (int c = 0; c < n - 1; ++c) {
        g.chk_adj[c] = {c, c + 1};
        g.var_adj[c].push_back(c);
        g.var_adj[c + 1].push_back(c);
    }
    return g;
}

TannerGraph hamming_graph(int m_bits) {
    int n = (1 << m_bits) - 1;
    TannerGraph g;
    g.n = n;
    g.m = m_bits;
    g.var_adj.assign(n, {});
    g.chk_adj.assign(m_bits, {});
    for (int v = 1; v <= n; ++v) {
        for (int b = 0; b < m_bits; ++b) {
            if (v >> b & 1) {
                g.var_adj[v - 1].push_back(b);
                g.chk_adj[b].push_back(v - 1);
            }
        }
    }
    return g;
}

}  // namespace maxwell
