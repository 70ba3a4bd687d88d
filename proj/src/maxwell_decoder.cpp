#include "maxwell/maxwell_decoder.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace maxwell {

PeelResult peel_bp(const TannerGraph& g, const std::vector<char>& erased) {
    PeelResult out;
    std::vector<char> unresolved(erased.begin(), erased.end());
    std::vector<int> undet(g.m, 0);
    std::deque<int> queue;
    for (int c = 0; c < g.m; ++c) {
        for (int v : g.chk_adj[c]) undet[c] += unresolved[v] ? 1 : 0;
        if (undet[c] == 1) queue.push_back(c);
    }
    while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        if (undet[c] != 1) continue;
        int target = -1;
        for (int v : g.chk_adj[c])
            if (unresolved[v]) {
                target = v;
                break;
            }
        unresolved[target] = 0;
        ++out.decoded_count;
        for (int c2 : g.var_adj[target]) {
            --undet[c2];
            if (undet[c2] == 1) queue.push_back(c2);
        }
    }
    out.residual_vars.assign(unresolved.begin(), unresolved.end());
    return out;
}

namespace {

enum class VarState : char { known, undetermined, expressed };

struct DecodeCtx {
    const TannerGraph& g;
    MaxwellRun& run;
    std::vector<VarState> state;
    std::vector<GuessExpr> expr;
    std::vector<int> undet;      // undetermined incidences per check
    std::vector<char> consumed;  // check already resolved or condition-emitted
    std::deque<int> queue;
    Gf2Rank rank;
    long determined = 0;
    long time = 0;

    DecodeCtx(const TannerGraph& gr, MaxwellRun& r) : g(gr), run(r) {}

    void record(EventKind kind, int bit) {
        run.events.push_back({kind, bit, time++});
        run.trajectory.push_back({determined, run.guesses - run.condition_rank});
    }

    void determine(int v, GuessExpr e, EventKind kind) {
        state[v] = VarState::expressed;
        expr[v] = std::move(e);
        ++determined;
        if (kind == EventKind::guess) ++run.guesses;
        record(kind, v);
        for (int c : g.var_adj[v]) {
            if (--undet[c] <= 1 && !consumed[c]) queue.push_back(c);
        }
    }

    void process_queue() {
        while (!queue.empty()) {
            int c = queue.front();
            queue.pop_front();
            if (consumed[c] || undet[c] > 1) continue;
            if (undet[c] == 1) {
                int target = -1;
                GuessExpr acc;
                for (int v : g.chk_adj[c]) {
                    if (state[v] == VarState::undetermined) {
                        target = v;
                    } else if (state[v] == VarState::expressed) {
                        acc.xor_with(expr[v]);
                    }
                }
                consumed[c] = 1;
                determine(target, std::move(acc), EventKind::decode);
            } else {
                // all incidences determined: the check equation constrains the guesses
                consumed[c] = 1;
                GuessExpr acc;
                for (int v : g.chk_adj[c])
                    if (state[v] == VarState::expressed) acc.xor_with(expr[v]);
                if (acc.empty()) {
                    ++run.cancellations;
                    continue;
                }
                run.conditions.push_back(acc);
                if (rank.add(acc)) ++run.condition_rank;
                record(EventKind::condition, g.chk_adj[c].empty() ? -1 : g.chk_adj[c][0]);
            }
        }
    }
};

}  // namespace

MaxwellRun maxwell_decode(const TannerGraph& g, const std::vector<char>& erased,
                          const GuessStrategy& strategy, uint64_t seed) {
    if (static_cast<int>(erased.size()) != g.n)
        throw std::invalid_argument("maxwell_decode: erasure pattern size mismatch");
    MaxwellRun run;
    run.guessed.assign(g.n, 0);
    DecodeCtx ctx(g, run);
    ctx.state.resize(g.n);
    ctx.expr.resize(g.n);
    ctx.undet.assign(g.m, 0);
    ctx.consumed.assign(g.m, 0);
    for (int v = 0; v < g.n; ++v) {
        ctx.state[v] = erased[v] ? VarState::undetermined : VarState::known;
        if (!erased[v]) ++ctx.determined;
    }
    for (int c = 0; c < g.m; ++c) {
        for (int v : g.chk_adj[c]) ctx.undet[c] += erased[v] ? 1 : 0;
        if (ctx.undet[c] <= 1) ctx.queue.push_back(c);
    }
    run.trajectory.push_back({ctx.determined, 0});

    Rng rng(seed);
    uint32_t next_guess = 0;
    double gamma = 0.0;
    ctx.process_queue();
    while (ctx.determined < g.n) {
        std::vector<int> open;
        for (int v = 0; v < g.n; ++v)
            if (ctx.state[v] == VarState::undetermined) open.push_back(v);
        if (open.empty()) break;
        if (strategy.kind == GuessStrategy::sequential) {
            int v = open[rng.below(open.size())];
            run.guessed[v] = 1;
            ctx.determine(v, GuessExpr::single(next_guess++), EventKind::guess);
        } else {
            double p = strategy.delta_gamma / std::max(1e-12, 1.0 - gamma);
            p = std::min(1.0, p);
            gamma = std::min(1.0, gamma + strategy.delta_gamma);
            bool forced = gamma >= 1.0 - 1e-12;
            for (int v : open) {
                if (ctx.state[v] != VarState::undetermined) continue;  // may have chained
                if (forced || rng.uniform01() < p) {
                    run.guessed[v] = 1;
                    ctx.determine(v, GuessExpr::single(next_guess++), EventKind::guess);
                    ctx.process_queue();
                }
            }
        }
        ctx.process_queue();
    }
    run.final_entropy = run.guesses - run.condition_rank;
    return run;
}

namespace {

enum Msg : char { M0 = 0, MG = 1, MQ = 2 };  // ordered 0 > g > ?

}  // namespace

long guess_count_lower_bound(const TannerGraph& g, const std::vector<char>& erased,
                             const MaxwellRun& run) {
    // channel labels
    std::vector<Msg> label(g.n);
    for (int v = 0; v < g.n; ++v)
        label[v] = !erased[v] ? M0 : (run.guessed[v] ? MG : MQ);
    // per-incidence messages; vc[k] along var_adj order, cv aligned with chk_adj
    std::vector<std::vector<Msg>> vc(g.n), cv(g.m);
    for (int v = 0; v < g.n; ++v) vc[v].assign(g.var_adj[v].size(), MQ);
    for (int c = 0; c < g.m; ++c) cv[c].assign(g.chk_adj[c].size(), MQ);
    // incidence cross-references (multi-edges paired in ascending order)
    std::vector<std::vector<int>> v_slot(g.n);  // slot of this incidence inside the check
    std::vector<std::vector<int>> c_slot(g.m);  // slot of this incidence inside the variable
    {
        std::vector<std::vector<std::pair<int, int>>> byvar(g.m);
        for (int c = 0; c < g.m; ++c) {
            c_slot[c].assign(g.chk_adj[c].size(), -1);
            for (std::size_t j = 0; j < g.chk_adj[c].size(); ++j)
                byvar[c].push_back({g.chk_adj[c][j], static_cast<int>(j)});
            std::sort(byvar[c].begin(), byvar[c].end());
        }
        std::vector<std::size_t> cur(g.m, 0);
        for (int v = 0; v < g.n; ++v) {
            v_slot[v].assign(g.var_adj[v].size(), -1);
            for (std::size_t k = 0; k < g.var_adj[v].size(); ++k) {
                int c = g.var_adj[v][k];
                while (cur[c] < byvar[c].size() && byvar[c][cur[c]].first != v) ++cur[c];
                int j = byvar[c][cur[c]++].second;
                v_slot[v][k] = j;
                c_slot[c][j] = static_cast<int>(k);
            }
        }
    }

    bool changed = true;
    int sweeps = 0;
    while (changed && sweeps++ < 4 * (g.n + g.m + 2)) {
        changed = false;
        // variable-to-check
        for (int v = 0; v < g.n; ++v) {
            for (std::size_t k = 0; k < g.var_adj[v].size(); ++k) {
                bool any0 = label[v] == M0, anyg = label[v] == MG;
                for (std::size_t j = 0; j < g.var_adj[v].size(); ++j) {
                    if (j == k) continue;
                    Msg in = cv[g.var_adj[v][j]][v_slot[v][j]];
                    any0 |= in == M0;
                    anyg |= in == MG;
                }
                Msg out = any0 ? M0 : (anyg ? MG : MQ);
                if (out != vc[v][k]) {
                    vc[v][k] = out;
                    changed = true;
                }
            }
        }
        // check-to-variable
        for (int c = 0; c < g.m; ++c) {
            for (std::size_t k = 0; k < g.chk_adj[c].size(); ++k) {
                bool anyq = false, anyg = false;
                for (std::size_t j = 0; j < g.chk_adj[c].size(); ++j) {
                    if (j == k) continue;
                    Msg in = vc[g.chk_adj[c][j]][c_slot[c][j]];
                    anyq |= in == MQ;
                    anyg |= in == MG;
                }
                Msg out = anyq ? MQ : (anyg ? MG : M0);
                if (out != cv[c][k]) {
                    cv[c][k] = out;
                    changed = true;
                }
            }
        }
    }

    // k >= G - sum_v (l_g - 1) + sum_{C_g} (r' - 1), with the residual-graph
    // conventions: skip variables seeing a 0, count only non-0 check edges
    long bound = run.guesses;
    for (int v = 0; v < g.n; ++v) {
        if (label[v] == M0) continue;
        long lg = label[v] == MG ? 1 : 0;
        bool any0 = false;
        for (std::size_t k = 0; k < g.var_adj[v].size(); ++k) {
            Msg in = cv[g.var_adj[v][k]][v_slot[v][k]];
            any0 |= in == M0;
            lg += in == MG ? 1 : 0;
        }
        if (any0) continue;
        bound -= std::max(0l, lg - 1);
    }
    for (int c = 0; c < g.m; ++c) {
        long nonzero = 0;
        bool anyq = false;
        for (std::size_t k = 0; k < g.chk_adj[c].size(); ++k) {
            Msg in = vc[g.chk_adj[c][k]][c_slot[c][k]];
            if (in != M0) ++nonzero;
            anyq |= in == MQ;
        }
        if (nonzero >= 1 && !anyq) bound += nonzero - 1;
    }
    return bound;
}

}  // namespace maxwell
