#include "maxwell/tanner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace maxwell {

uint64_t Rng::next() {
    // splitmix64
    uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t Rng::below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = next();
    } while (v >= lim);
    return v % n;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

long TannerGraph::edges() const {
    long e = 0;
    for (const auto& a : var_adj) e += static_cast<long>(a.size());
    return e;
}

namespace {

// largest-remainder rounding of total * weights[k]
std::vector<long> apportion(long total, const std::vector<double>& weights) {
    std::vector<long> counts(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> rema;
    long assigned = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        double t = total * weights[k];
        counts[k] = static_cast<long>(std::floor(t));
        assigned += counts[k];
        rema.push_back({t - std::floor(t), k});
    }
    std::sort(rema.begin(), rema.end(), [](auto& a, auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (long i = 0; i < total - assigned && i < static_cast<long>(rema.size()); ++i)
        counts[rema[static_cast<std::size_t>(i)].second]++;
    return counts;
}

bool has_multi_edge(const TannerGraph& g) {
    for (const auto& adj : g.var_adj) {
        std::unordered_set<int> seen(adj.begin(), adj.end());
        if (seen.size() != adj.size()) return true;
    }
    return false;
}

TannerGraph sample_once(const DDPair& dd, int n, Rng& rng, uint64_t seed) {
    const auto& Ln = dd.lambda_node().coeffs();
    const auto& Gn = dd.gamma_node().coeffs();
    std::vector<long> var_counts = apportion(n, Ln);
    double m_target = n * dd.lambda_node_deriv1() / dd.gamma_node_deriv1();
    long m = std::lround(m_target);
    std::vector<long> chk_counts = apportion(m, Gn);

    std::vector<int> var_deg, chk_deg;
    for (std::size_t d = 0; d < var_counts.size(); ++d)
        for (long i = 0; i < var_counts[d]; ++i) var_deg.push_back(static_cast<int>(d));
    for (std::size_t d = 0; d < chk_counts.size(); ++d)
        for (long i = 0; i < chk_counts[d]; ++i) chk_deg.push_back(static_cast<int>(d));

    long ev = std::accumulate(var_deg.begin(), var_deg.end(), 0l);
    long ec = std::accumulate(chk_deg.begin(), chk_deg.end(), 0l);
    long repair = 0;
    if (ev != ec && !chk_deg.empty()) {
        // repair parity with a single-node degree adjustment
        repair = ev - ec;
        auto it = std::max_element(chk_deg.begin(), chk_deg.end());
        *it = std::max<long>(1, *it + repair);
    }

    TannerGraph g;
    g.repair_delta = repair;
    g.seed = seed;
    g.n = static_cast<int>(var_deg.size());
    g.m = static_cast<int>(chk_deg.size());
    g.var_adj.resize(g.n);
    g.chk_adj.resize(g.m);
    std::vector<int> vsock, csock;
    for (int v = 0; v < g.n; ++v)
        for (int k = 0; k < var_deg[v]; ++k) vsock.push_back(v);
    for (int c = 0; c < g.m; ++c)
        for (int k = 0; k < chk_deg[c]; ++k) csock.push_back(c);
    // Fisher-Yates on the check sockets
    for (std::size_t i = csock.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(csock[i - 1], csock[j]);
    }
    for (std::size_t e = 0; e < vsock.size() && e < csock.size(); ++e) {
        g.var_adj[vsock[e]].push_back(csock[e]);
        g.chk_adj[csock[e]].push_back(vsock[e]);
    }
    for (const auto& adj : g.var_adj) {
        std::unordered_set<int> seen(adj.begin(), adj.end());
        g.multi_edges += static_cast<long>(adj.size() - seen.size());
    }
    return g;
}

}  // namespace

TannerGraph sample_graph(const DDPair& dd, int n, uint64_t seed, bool simple) {
    Rng rng(seed);
    TannerGraph g = sample_once(dd, n, rng, seed);
    if (simple) {
        for (int attempt = 0; attempt < 1000 && has_multi_edge(g); ++attempt)
            g = sample_once(dd, n, rng, seed);
    }
    return g;
}

TannerGraph sample_tree(int approx_vars, uint64_t seed) {
    Rng rng(seed);
    TannerGraph g;
    g.seed = seed;
    g.n = 1;
    g.var_adj.push_back({});
    while (g.n < approx_vars) {
        int deg = 2 + static_cast<int>(rng.below(3));  // check degree 2..4
        int c = g.m++;
        g.chk_adj.push_back({});
        int parent = static_cast<int>(rng.below(static_cast<uint64_t>(g.n)));
        g.chk_adj[c].push_back(parent);
        g.var_adj[parent].push_back(c);
        for (int k = 1; k < deg; ++k) {
            int v = g.n++;
            g.var_adj.push_back({c});
            g.chk_adj[c].push_back(v);
        }
    }
    return g;
}

void write_graph(std::ostream& os, const TannerGraph& g) {
    os << "n " << g.n << " m " << g.m << "\n";
    for (int v = 0; v < g.n; ++v) {
        os << "v " << v << ":";
        for (int c : g.var_adj[v]) os << " " << c;
        os << "\n";
    }
}

TannerGraph read_graph(std::istream& is) {
    TannerGraph g;
    std::string tok;
    is >> tok;
    if (tok != "n") throw EnsembleError("graph format: expected leading \"n\"");
    is >> g.n >> tok >> g.m;
    g.var_adj.assign(g.n, {});
    g.chk_adj.assign(g.m, {});
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string v_tag;
        ls >> v_tag;
        if (v_tag != "v") throw EnsembleError("graph format: expected \"v\" line");
        int v;
        char colon;
        ls >> v >> colon;
        if (colon != ':') throw EnsembleError("graph format: expected ':' after index");
        int c;
        while (ls >> c) {
            g.var_adj[v].push_back(c);
            g.chk_adj[c].push_back(v);
        }
    }
    return g;
}

std::vector<char> random_erasures(int n, double epsilon, uint64_t seed) {
    Rng rng(seed);
    std::vector<char> out(n, 0);
    for (int i = 0; i < n; ++i) out[i] = rng.uniform01() < epsilon ? 1 : 0;
    return out;
}

}  // namespace maxwell
