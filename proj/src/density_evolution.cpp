#include "maxwell/density_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maxwell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Newton polish of the fixed point of f(x) = eps*lambda(y(x)) - x near x0.
// The DE contraction is slow near thresholds; a couple of Newton steps recover
// full precision once the iteration stalls.
double polish_fixed_point(const DDPair& dd, double epsilon, double x0) {
    const Poly& lam = dd.lambda_edge();
    const Poly lam_d = lam.derivative();
    double x = x0;
    double fx = std::abs(epsilon * lam(dd.y_at(x)) - x);
    for (int i = 0; i < 50; ++i) {
        double yx = dd.y_at(x);
        double f = epsilon * lam(yx) - x;
        double fd = epsilon * lam_d(yx) * dd.y_deriv_at(x) - 1.0;
        if (fd == 0.0) break;
        double nx = std::min(std::max(x - f / fd, 0.0), 1.0);
        double fnx = std::abs(epsilon * lam(dd.y_at(nx)) - nx);
        if (fnx > fx) break;  // near-tangent fixed points: keep the safe iterate
        fx = fnx;
        if (std::abs(nx - x) < 1e-16) {
            x = nx;
            break;
        }
        x = nx;
    }
    return (x >= 0.0 && x <= 1.0) ? x : x0;
}

}  // namespace

DEFixedPoint de_fixed_point(const DDPair& dd, double epsilon, double tol, long max_iter) {
    DEFixedPoint fp;
    fp.epsilon = epsilon;
    const Poly& lam = dd.lambda_edge();
    double x = 1.0;
    long t = 0;
    bool stalled = false;
    for (; t < max_iter; ++t) {
        double nx = epsilon * lam(dd.y_at(x));
        double step = std::abs(nx - x);
        x = nx;
        if (step < tol) break;
        if (step < 1e-15) {
            stalled = true;
            break;
        }
    }
    fp.converged = (t < max_iter) || stalled;
    fp.iterations = t;
    if (x > 0.0 && x < 1.0) x = polish_fixed_point(dd, epsilon, x);
    if (x < tol * 0.5) x = 0.0;
    fp.x = x;
    fp.y = dd.y_at(x);
    return fp;
}

double stability_threshold(const DDPair& dd) {
    const Poly& lam = dd.lambda_edge();
    // lowest nonzero edge power of lambda: lambda(t) ~ l_j0 t^(j0-1)
    std::size_t p = 1;
    while (p < lam.coeffs().size() && lam.coeff(p) == 0.0) ++p;
    if (p >= lam.coeffs().size()) return kInf;
    double lam_lead = lam.coeff(p);  // power p in t, edge degree p+1
    // lowest nonzero power of y(x): y ~ c_k x^k; in LDPC mode y'(0) = rho'(1)
    std::size_t k = 1;
    double c = 0.0;
    if (dd.generalized_mode()) {
        const Poly& y = *dd.y_poly();
        while (k < y.coeffs().size() && y.coeff(k) == 0.0) ++k;
        if (k >= y.coeffs().size()) return kInf;
        c = y.coeff(k);
    } else {
        c = dd.y_deriv_at(0.0);
        if (c == 0.0) return kInf;  // degree-2-free checks cannot occur (min degree 2)
    }
    // x / lambda(y(x)) ~ x^(1 - k*p) / (lam_lead * c^p)
    if (k * p > 1) return kInf;
    return 1.0 / (lam_lead * std::pow(c, static_cast<double>(p)));
}

double shannon_threshold(const DDPair& dd) { return 1.0 - dd.design_rate(); }

BPThreshold bp_threshold_point(const DDPair& dd, double tol) {
    const Poly& lam = dd.lambda_edge();
    auto eps_of = [&](double x) {
        double l = lam(dd.y_at(x));
        return l > 0.0 ? x / l : kInf;
    };
    const int grid = 10000;
    double best_eps = kInf, best_x = 1.0;
    for (int i = 1; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        double e = eps_of(x);
        if (e < best_eps) {
            best_eps = e;
            best_x = x;
        }
    }
    // golden-section refinement around the grid minimum
    double lo = std::max(best_x - 2.0 / grid, 1e-12);
    double hi = std::min(best_x + 2.0 / grid, 1.0);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = eps_of(c), fd = eps_of(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eps_of(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eps_of(d);
        }
    }
    double xm = 0.5 * (a + b);
    double em = eps_of(xm);
    double stab = stability_threshold(dd);
    // ties resolved toward the smaller epsilon; stability is the x->0 limit
    if (stab <= em) return {stab, 0.0};
    return {em, xm};
}

double bp_threshold(const DDPair& dd, double tol) { return bp_threshold_point(dd, tol).epsilon; }

ThreeValuedState three_valued_de(const DDPair& dd, double epsilon, double gamma, double tol,
                                 long max_iter) {
    ThreeValuedState st;
    st.epsilon = epsilon;
    st.gamma = gamma;
    const Poly& lam = dd.lambda_edge();
    const Poly& rho = dd.rho_edge();
    // all-erasure start
    double a0 = 0.0, aq = 1.0, ag = 0.0;
    double b0 = 0.0, bq = 1.0, bg = 0.0;
    long t = 0;
    bool stalled = false;
    for (; t < max_iter; ++t) {
        b0 = rho(a0);
        bq = 1.0 - rho(a0 + ag);
        bg = 1.0 - b0 - bq;
        double na0 = 1.0 - epsilon * lam(bg + bq);
        double naq = (1.0 - gamma) * epsilon * lam(bq);
        double nag = epsilon * lam(bg + bq) - naq;
        double step = std::max(std::abs(naq - aq), std::abs(nag - ag));
        a0 = na0;
        aq = naq;
        ag = nag;
        if (step < tol) break;
        if (step < 1e-15) {
            stalled = true;
            break;
        }
    }
    st.converged = (t < max_iter) || stalled;
    st.iterations = t;
    // The ?-messages follow standard DE at eps(1-gamma) and the ?+g messages
    // standard DE at eps; polish both and reassemble.
    double xq = polish_fixed_point(dd, epsilon * (1.0 - gamma), aq);
    double xs = polish_fixed_point(dd, epsilon, aq + ag);
    if (aq < tol * 10) xq = aq;  // keep clean sub-threshold zeros
    aq = xq;
    ag = std::max(0.0, xs - xq);
    a0 = 1.0 - aq - ag;
    b0 = rho(a0);
    bq = 1.0 - rho(a0 + ag);
    bg = 1.0 - b0 - bq;
    st.left = {a0, aq, ag};
    st.right = {b0, bq, bg};
    return st;
}

}  // namespace maxwell
