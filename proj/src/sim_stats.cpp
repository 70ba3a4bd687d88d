#include "maxwell/sim_stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace maxwell {

namespace {

uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    return z ^ (z >> 27);
}

}  // namespace

int thread_budget(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int cap = hw;
    if (const char* env = std::getenv("MAXWELL_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) cap = v;
    }
    if (requested > 0) cap = std::min(cap, requested);
    return std::max(1, cap);
}

std::vector<MaxwellRun> run_trials(const DDPair& dd, int n, double epsilon, int trials,
                                   uint64_t seed, const GuessStrategy& strategy, int threads) {
    std::vector<MaxwellRun> runs(trials);
    int workers = std::min(thread_budget(threads), std::max(1, trials));
    std::atomic<int> cursor{0};
    auto work = [&]() {
        for (;;) {
            int i = cursor.fetch_add(1);
            if (i >= trials) return;
            uint64_t stream = seed ^ static_cast<uint64_t>(i);
            TannerGraph g = sample_graph(dd, n, mix(stream, 1));
            auto erased = random_erasures(g.n, epsilon, mix(stream, 2));
            runs[i] = maxwell_decode(g, erased, strategy, mix(stream, 3));
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return runs;
}

TrajectoryStats trajectory_stats(const std::vector<MaxwellRun>& runs, int n_bits, int bins) {
    if (runs.size() < 2) throw std::invalid_argument("trajectory_stats: need at least 2 runs");
    TrajectoryStats out;
    out.bins.resize(bins);
    std::vector<double> vals;
    vals.reserve(runs.size());
    for (int b = 0; b < bins; ++b) {
        double center = (b + 0.5) / bins;
        long target = static_cast<long>(std::ceil(center * n_bits));
        vals.clear();
        for (const MaxwellRun& r : runs) {
            // entropy at the first event with determined count >= target
            long val = r.trajectory.empty() ? 0 : r.trajectory.back().second;
            for (const auto& [det, ent] : r.trajectory) {
                if (det >= target) {
                    val = ent;
                    break;
                }
            }
            vals.push_back(static_cast<double>(val) / n_bits);
        }
        std::sort(vals.begin(), vals.end());
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        auto quant = [&](double q) {
            double pos = q * (static_cast<double>(vals.size()) - 1.0);
            std::size_t lo = static_cast<std::size_t>(pos);
            std::size_t hi = std::min(lo + 1, vals.size() - 1);
            double w = pos - static_cast<double>(lo);
            return vals[lo] * (1.0 - w) + vals[hi] * w;
        };
        out.bins[b] = {center, mean, quant(0.05), quant(0.95)};
    }
    return out;
}

Concentration entropy_concentration(const DDPair& dd, int n, double epsilon, int trials,
                                    uint64_t seed, const GuessStrategy& strategy, int threads) {
    if (trials < 30) throw std::invalid_argument("entropy_concentration: trials must be >= 30");
    auto runs = run_trials(dd, n, epsilon, trials, seed, strategy, threads);
    Concentration c;
    c.trials = trials;
    double sum = 0.0, sum2 = 0.0;
    int zeros = 0;
    for (const MaxwellRun& r : runs) {
        double h = static_cast<double>(r.final_entropy) / n;
        sum += h;
        sum2 += h * h;
        zeros += r.final_entropy == 0 ? 1 : 0;
    }
    c.mean = sum / trials;
    double var = std::max(0.0, sum2 / trials - c.mean * c.mean);
    c.stddev = std::sqrt(var * trials / std::max(1, trials - 1));
    c.zero_fraction = static_cast<double>(zeros) / trials;
    return c;
}

}  // namespace maxwell
