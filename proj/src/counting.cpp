#include "maxwell/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maxwell/exit_curves.hpp"

namespace maxwell {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Second-order Taylor scalar: carries (f, f', f'') through composed
// expressions, giving analytic Psi derivatives without symbolic work.
struct Jet2 {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    static Jet2 var(double x) { return {x, 1.0, 0.0}; }
    static Jet2 cst(double c) { return {c, 0.0, 0.0}; }
};

Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
Jet2 operator/(const Jet2& a, const Jet2& b) {
    double iv = 1.0 / b.v;
    Jet2 inv{iv, -b.d1 * iv * iv, (2.0 * b.d1 * b.d1 - b.v * b.d2) * iv * iv * iv};
    return a * inv;
}
Jet2 log2j(const Jet2& a) {
    return {std::log(a.v) / kLn2, a.d1 / (a.v * kLn2), (a.d2 * a.v - a.d1 * a.d1) / (a.v * a.v * kLn2)};
}
Jet2 powj(const Jet2& a, int n) {
    Jet2 r = Jet2::cst(1.0);
    Jet2 base = a;
    int k = n;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

template <typename T>
T psi_expr(const NodeDDP& ddp, const T& u) {
    const auto& le = ddp.lambda_edge.coeffs();
    const auto& Ln = ddp.lambda_node.coeffs();
    const auto& Gn = ddp.gamma_node.coeffs();
    T one = T::cst(1.0);
    // v(u): ratio of the two edge-degree sums
    T A = T::cst(0.0), B = T::cst(0.0);
    for (std::size_t k = 0; k < le.size(); ++k) {
        if (le[k] == 0.0) continue;
        int l = static_cast<int>(k) + 1;  // edge degree
        T den = one + powj(u, l);
        A = A + T::cst(le[k]) / den;
        B = B + T::cst(le[k]) * powj(u, l - 1) / den;
    }
    T v = B / A;
    T t1 = T::cst(-ddp.lambda_d1) * log2j((one + u * v) / ((one + u) * (one + v)));
    T t2 = T::cst(0.0);
    for (std::size_t l = 1; l < Ln.size(); ++l) {
        if (Ln[l] == 0.0) continue;
        t2 = t2 + T::cst(Ln[l]) * log2j((one + powj(u, static_cast<int>(l))) /
                                        (T::cst(2.0) * powj(one + u, static_cast<int>(l))));
    }
    T w = (one - v) / (one + v);
    T t3 = T::cst(0.0);
    for (std::size_t r = 1; r < Gn.size(); ++r) {
        if (Gn[r] == 0.0) continue;
        t3 = t3 + T::cst(Gn[r]) * log2j(one + powj(w, static_cast<int>(r)));
    }
    return t1 + t2 + T::cst(ddp.lambda_d1 / ddp.gamma_d1) * t3;
}

struct Plain {
    double v;
    static Plain var(double x) { return {x}; }
    static Plain cst(double c) { return {c}; }
};
Plain operator+(const Plain& a, const Plain& b) { return {a.v + b.v}; }
Plain operator-(const Plain& a, const Plain& b) { return {a.v - b.v}; }
Plain operator*(const Plain& a, const Plain& b) { return {a.v * b.v}; }
Plain operator/(const Plain& a, const Plain& b) { return {a.v / b.v}; }
Plain log2j(const Plain& a) { return {std::log(a.v) / kLn2}; }
Plain powj(const Plain& a, int n) { return {std::pow(a.v, n)}; }

double v_of_u(const NodeDDP& ddp, double u) {
    const auto& le = ddp.lambda_edge.coeffs();
    double A = 0.0, B = 0.0;
    for (std::size_t k = 0; k < le.size(); ++k) {
        if (le[k] == 0.0) continue;
        int l = static_cast<int>(k) + 1;
        double den = 1.0 + std::pow(u, l);
        A += le[k] / den;
        B += le[k] * std::pow(u, l - 1) / den;
    }
    return B / A;
}

}  // namespace

ResidualEnsemble residual_ensemble(const DDPair& dd, double epsilon) {
    ResidualEnsemble res;
    res.epsilon = epsilon;
    res.fixed_point = de_fixed_point(dd, epsilon);
    if (res.fixed_point.x <= 0.0) {
        res.lambda_node_res = Poly::zero();
        res.gamma_node_res = Poly::zero();
        return res;
    }
    double x = res.fixed_point.x, y = res.fixed_point.y;
    // Lambda_eps(z) = eps * Lambda(z y)
    std::vector<double> lc(dd.lambda_node().coeffs());
    double yp = 1.0;
    for (std::size_t l = 0; l < lc.size(); ++l) {
        lc[l] *= epsilon * yp;
        yp *= y;
    }
    res.lambda_node_res = Poly(std::move(lc));
    // Gamma_eps(z) = Gamma(1-x+zx) - Gamma(1-x) - z x Gamma'(1-x)
    const Poly& G = dd.gamma_node();
    Poly comp = G.compose(Poly::affine(1.0 - x, x));
    std::vector<double> gc(comp.coeffs());
    if (gc.size() < 2) gc.resize(2, 0.0);
    gc[0] = 0.0;  // cancels exactly by construction
    gc[1] = 0.0;
    res.gamma_node_res = Poly(std::move(gc));
    return res;
}

NodeDDP make_node_ddp(const Poly& lambda_node, const Poly& gamma_node) {
    NodeDDP ddp;
    ddp.lambda_node = lambda_node;
    ddp.gamma_node = gamma_node;
    ddp.lambda_edge = node_to_edge(lambda_node);
    ddp.lambda_d1 = lambda_node.derivative()(1.0);
    ddp.gamma_d1 = gamma_node.derivative()(1.0);
    return ddp;
}

NodeDDP normalize_residual(const ResidualEnsemble& res) {
    if (res.empty()) throw EnsembleError("normalize_residual: empty residual graph");
    double ls = res.lambda_node_res(1.0);
    double gs = res.gamma_node_res(1.0);
    if (ls <= 0.0 || gs <= 0.0) throw EnsembleError("normalize_residual: degenerate residual");
    return make_node_ddp(res.lambda_node_res * (1.0 / ls), res.gamma_node_res * (1.0 / gs));
}

NodeDDP node_ddp_of(const DDPair& dd) { return make_node_ddp(dd.lambda_node(), dd.gamma_node()); }

PsiEvaluation psi(const NodeDDP& ddp, double u) {
    if (u < 0.0) throw std::invalid_argument("psi: u must be >= 0");
    if (u == 1.0) return {1.0, 1.0, 0.0};  // Psi(1) = 0 identically
    double value = psi_expr<Plain>(ddp, Plain::var(u)).v;
    return {u, v_of_u(ddp, u), value};
}

void psi_derivatives(const NodeDDP& ddp, double u, double& d1, double& d2) {
    Jet2 r = psi_expr<Jet2>(ddp, Jet2::var(u));
    d1 = r.d1;
    d2 = r.d2;
}

double edge_fraction_of_u(const NodeDDP& ddp, double u) {
    double v = v_of_u(ddp, u);
    return u * v / (1.0 + u * v);
}

TightnessReport check_tightness(const DDPair& dd, double epsilon, int grid_size) {
    TightnessReport rep;
    ResidualEnsemble res = residual_ensemble(dd, epsilon);
    if (res.empty()) {
        rep.empty_residual = true;
        rep.verdict = PsiVerdict::certified;
        return rep;
    }
    NodeDDP ddp = normalize_residual(res);
    {
        double d1, d2;
        psi_derivatives(ddp, 1.0, d1, d2);
        (void)d1;
        rep.psi_dd_at_1 = d2;
    }
    // Psi achieves its max over [0, inf) in [0, 1]; scan there.
    std::vector<double> vals(grid_size + 1);
    for (int i = 0; i <= grid_size; ++i)
        vals[i] = psi(ddp, static_cast<double>(i) / grid_size).value;
    double best = vals[0];  // u = 0 endpoint (Psi = -r of the residual)
    double best_u = 0.0;
    std::vector<std::pair<double, double>> interior;  // refined (u, psi) maxima
    for (int i = 1; i < grid_size; ++i) {
        if (vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) {
            // Newton refinement of the interior extremum
            double u = static_cast<double>(i) / grid_size;
            double lo = static_cast<double>(i - 1) / grid_size;
            double hi = static_cast<double>(i + 1) / grid_size;
            for (int it = 0; it < 30; ++it) {
                double d1, d2;
                psi_derivatives(ddp, u, d1, d2);
                if (d2 == 0.0) break;
                double nu = u - d1 / d2;
                if (nu < lo || nu > hi) break;
                if (std::abs(nu - u) < 1e-14) {
                    u = nu;
                    break;
                }
                u = nu;
            }
            if (u > 1.0 - 1e-6) continue;  // the u = 1 critical point itself
            interior.push_back({u, psi(ddp, u).value});
        }
    }
    for (const auto& [u, val] : interior) {
        if (val > best) {
            best = val;
            best_u = u;
        }
    }
    rep.max_u = best_u;
    rep.max_psi = best;
    if (best > 1e-9)
        rep.verdict = PsiVerdict::violated;
    else if (best < -1e-12 && rep.psi_dd_at_1 < 0.0)
        rep.verdict = PsiVerdict::certified;
    else
        rep.verdict = PsiVerdict::marginal;
    // eps-derivative at near-zero maxima away from u = 1 (reported only);
    // the u = 0 endpoint carries Psi(0) = -r of the residual and is the
    // relevant maximum whenever the residual rate crosses zero
    std::vector<std::pair<double, double>> candidates = interior;
    candidates.insert(candidates.begin(), {0.0, vals[0]});
    for (const auto& [u, val] : candidates) {
        if (std::abs(val) >= 1e-3) continue;
        double de = 1e-6;
        auto psi_at = [&](double eps_v) {
            ResidualEnsemble r2 = residual_ensemble(dd, eps_v);
            if (r2.empty()) return 0.0;
            return psi(normalize_residual(r2), u).value;
        };
        rep.secondary_maxima.push_back(
            {u, val, (psi_at(epsilon + de) - psi_at(epsilon - de)) / (2.0 * de)});
    }
    return rep;
}

CondEntropy conditional_entropy(const DDPair& dd, double epsilon) {
    CondEntropy ce;
    DEFixedPoint fp = de_fixed_point(dd, epsilon);
    if (fp.x <= 0.0) {
        ce.value = 0.0;
        ce.certified = true;
        return ce;
    }
    ce.value = std::max(0.0, trial_entropy(dd, epsilon, fp.x, fp.y));
    ce.certified = check_tightness(dd, epsilon).verdict == PsiVerdict::certified;
    return ce;
}

double growth_rate(const NodeDDP& ddp, double e, double tol) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("growth_rate: e must be in (0,1)");
    const auto& le = ddp.lambda_edge.coeffs();
    const auto& Gn = ddp.gamma_node.coeffs();
    // rho edge-perspective from Gamma
    Poly rho = node_to_edge(ddp.gamma_node);
    const auto& re = rho.coeffs();

    auto A = [&](double u) {  // sum_l lambda_l u^l/(1+u^l), increasing 0 -> 1
        double s = 0.0;
        for (std::size_t k = 0; k < le.size(); ++k) {
            if (le[k] == 0.0) continue;
            double ul = std::pow(u, static_cast<int>(k) + 1);
            s += le[k] * ul / (1.0 + ul);
        }
        return s;
    };
    auto B = [&](double v) {  // v sum_r rho_r [(1+v)^{r-1}-(1-v)^{r-1}]/[(1+v)^r+(1-v)^r]
        double s = 0.0;
        for (std::size_t k = 0; k < re.size(); ++k) {
            if (re[k] == 0.0) continue;
            int r = static_cast<int>(k) + 1;
            double p = std::pow(1.0 + v, r - 1), m = std::pow(1.0 - v, r - 1);
            s += re[k] * (p - m) / (p * (1.0 + v) + m * (1.0 - v));
        }
        return v * s;
    };
    auto solve_increasing = [&](auto&& f, double target) {
        double hi = 1.0;
        while (f(hi) < target && hi < 1e12) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, lo); ++it) {
            double mid = 0.5 * (lo + hi);
            if (f(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    double u = solve_increasing(A, e);
    double v = solve_increasing(B, e);
    const auto& Ln = ddp.lambda_node.coeffs();
    double t = 0.0;
    for (std::size_t l = 1; l < Ln.size(); ++l)
        if (Ln[l] != 0.0) t += Ln[l] * std::log2(1.0 + std::pow(u, static_cast<int>(l)));
    double tc = 0.0;
    for (std::size_t r = 1; r < Gn.size(); ++r)
        if (Gn[r] != 0.0)
            tc += Gn[r] * std::log2((std::pow(1.0 + v, static_cast<int>(r)) +
                                     std::pow(1.0 - v, static_cast<int>(r))) /
                                    2.0);
    double h2 = -e * std::log2(e) - (1.0 - e) * std::log2(1.0 - e);
    return t - ddp.lambda_d1 * e * std::log2(u * v) + ddp.lambda_d1 / ddp.gamma_d1 * tc -
           ddp.lambda_d1 * h2;
}

double growth_rate(const DDPair& dd, double e, double tol) {
    return growth_rate(node_ddp_of(dd), e, tol);
}

double certification_boundary(const DDPair& dd, double tol) {
    double lo = bp_threshold(dd) + 1e-7;
    double hi = 1.0;
    auto certified = [&](double eps) {
        TightnessReport rep = check_tightness(dd, eps);
        return !rep.empty_residual && rep.verdict == PsiVerdict::certified;
    };
    if (certified(lo)) return lo;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (certified(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace maxwell
