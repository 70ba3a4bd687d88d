#include "maxwell/exit_curves.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace maxwell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
              double tol) {
    // flo carries the sign of f(lo); invariant: sign change inside [lo, hi]
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

struct CriticalPoint {
    double x;
    bool minimum;  // eps' changes - to + (local minimum of eps)
};

std::vector<CriticalPoint> critical_points(const DDPair& dd, int grid, double tol) {
    auto N = [&](double x) { return eps_deriv_numerator(dd, x); };
    std::vector<CriticalPoint> out;
    double prev_x = 0.0, prev_v = 0.0;
    bool have_prev = false;
    for (int i = 1; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        double v = N(x);
        if (have_prev && prev_v != 0.0 && v != 0.0 && (prev_v > 0.0) != (v > 0.0)) {
            double r = bisect(N, prev_x, x, prev_v, tol);
            out.push_back({r, prev_v < 0.0});
        }
        if (v != 0.0) {
            prev_x = x;
            prev_v = v;
            have_prev = true;
        }
    }
    return out;
}

// sign of eps'(x) just above 0
int sign_near_zero(const DDPair& dd) {
    for (double x : {1e-6, 1e-4, 1e-3, 1e-2}) {
        double v = eps_deriv_numerator(dd, x);
        if (v != 0.0) return v > 0.0 ? 1 : -1;
    }
    return 0;
}

}  // namespace

double eps_deriv_numerator(const DDPair& dd, double x) {
    // eps'(x) has the sign of lambda(y) - x lambda'(y) y'(x); evaluated
    // pointwise (expanding the composition loses precision at high degrees)
    double yx = dd.y_at_precise(x);
    return dd.lambda_edge()(yx) - x * dd.lambda_edge().derivative()(yx) * dd.y_deriv_at(x);
}

double epsilon_of_x(const DDPair& dd, double x) {
    if (x <= 0.0) return stability_threshold(dd);
    double l = dd.lambda_edge()(dd.y_at_precise(x));
    return l > 0.0 ? x / l : kInf;
}

std::vector<double> BranchPartition::jump_epsilons() const {
    std::vector<double> out;
    out.reserve(jumps.size());
    for (const Jump& j : jumps) out.push_back(j.eps);
    return out;
}

BranchPartition compute_partition(const DDPair& dd, int grid_size) {
    if (grid_size < 1000) throw EnsembleError("compute_partition: grid_size must be >= 1000");
    const double tol = 1e-13;
    BranchPartition part;
    auto crit = critical_points(dd, grid_size, tol);
    auto eps = [&](double x) { return epsilon_of_x(dd, x); };

    // all maximal increasing stretches of eps(x)
    {
        int sign0 = sign_near_zero(dd);
        double start = -1.0;
        if (sign0 >= 0) start = 0.0;
        for (const CriticalPoint& c : crit) {
            if (c.minimum) {
                if (start < 0.0) start = c.x;
            } else if (start >= 0.0) {
                part.stretches.push_back({start, c.x, eps(start), eps(c.x)});
                start = -1.0;
            }
        }
        if (start >= 0.0) part.stretches.push_back({start, 1.0, eps(start), eps(1.0)});
        if (part.stretches.empty() || part.stretches.back().x_high != 1.0)
            throw EnsembleError("compute_partition: eps(x) not increasing at x = 1");
    }

    // backward recursion from x_u = 1
    std::vector<Interval> rev;
    double x_u = 1.0;
    for (;;) {
        double x_l = 0.0;
        for (auto it = crit.rbegin(); it != crit.rend(); ++it) {
            if (it->x < x_u - tol) {
                x_l = it->x;
                break;
            }
        }
        rev.push_back({x_l, x_u, eps(x_l), eps(x_u)});
        if (x_l <= 0.0) break;
        // largest x < x_l with eps(x) = eps(x_l)
        double target = eps(x_l);
        auto f = [&](double x) { return eps(x) - target; };
        double found = -1.0;
        double px = x_l - x_l / grid_size;
        double pv = f(px);
        for (int i = 1; i <= grid_size; ++i) {
            double x = px - x_l / grid_size;
            if (x <= 0.0) break;
            double v = f(x);
            if (pv != 0.0 && v != 0.0 && (pv > 0.0) != (v > 0.0)) {
                found = bisect(f, x, px, v, tol);
                break;
            }
            px = x;
            pv = v;
        }
        if (found < 0.0) break;
        x_u = found;
    }
    part.intervals.assign(rev.rbegin(), rev.rend());

    // jump records; a jump at the threshold (first interval starting above 0)
    // has x_minus = 0 and eps(0) != eps(x_plus) in general
    if (part.intervals.front().x_low > tol)
        part.jumps.push_back({part.intervals.front().eps_low, 0.0, part.intervals.front().x_low});
    for (std::size_t i = 1; i < part.intervals.size(); ++i)
        part.jumps.push_back(
            {part.intervals[i].eps_low, part.intervals[i - 1].x_high, part.intervals[i].x_low});

    for (const Interval& iv : part.intervals) {
        double prev = eps(std::max(iv.x_low, 1e-15));
        for (int i = 1; i <= 64; ++i) {
            double x = iv.x_low + (iv.x_high - iv.x_low) * i / 64.0;
            double e = eps(x);
            if (e < prev - 1e-9)
                throw EnsembleError(
                    "compute_partition: interval not monotone; grid too coarse, refine grid_size");
            prev = e;
        }
    }
    return part;
}

ExitCurve ebp_curve(const DDPair& dd, int grid_size) {
    BranchPartition part = compute_partition(dd);
    std::vector<double> xs;
    xs.reserve(grid_size + 8);
    for (int i = 0; i <= grid_size; ++i) xs.push_back(static_cast<double>(i) / grid_size);
    for (const Interval& iv : part.intervals) {
        xs.push_back(iv.x_low);
        xs.push_back(iv.x_high);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    ExitCurve curve{CurveKind::EBP, {}};
    for (double x : xs)
        curve.samples.push_back({x, epsilon_of_x(dd, x), dd.lambda_node()(dd.y_at(x))});
    return curve;
}

double bp_exit(const DDPair& dd, double epsilon) {
    DEFixedPoint fp = de_fixed_point(dd, epsilon);
    if (fp.x <= 0.0) return 0.0;
    return dd.lambda_node()(fp.y);
}

double trial_entropy(const DDPair& dd, double epsilon, double x, double y) {
    double l1 = dd.lambda_node_deriv1();
    return l1 * x * (1.0 - y) - l1 / dd.gamma_node_deriv1() * (1.0 - dd.gamma_node()(1.0 - x)) +
           epsilon * dd.lambda_node()(y);
}

double trial_entropy_on_curve(const DDPair& dd, double x) {
    if (x <= 0.0) return 0.0;
    double yx = dd.y_at_precise(x);
    double lam = dd.lambda_edge()(yx);
    double eps_L = lam > 0.0 ? x * dd.lambda_primitive()(yx) / lam : 0.0;
    return dd.lambda_node_deriv1() * (eps_L - x * yx + dd.y_integral_at(x));
}

std::optional<Poly> trial_entropy_poly(const DDPair& dd) {
    if (!dd.y_poly()) return std::nullopt;
    const Poly& y = *dd.y_poly();
    // expanded composition is only trustworthy at modest degrees
    if ((dd.lambda_primitive().degree() + 1) * y.degree() > 60) return std::nullopt;
    Poly num = dd.lambda_primitive().compose(y);
    Poly den = dd.lambda_edge().compose(y);
    auto [quot, rem] = num.divmod(den);
    double scale = 0.0;
    for (double c : num.coeffs()) scale = std::max(scale, std::abs(c));
    for (double c : rem.coeffs())
        if (std::abs(c) > 1e-9 * std::max(1.0, scale)) return std::nullopt;
    Poly x1 = Poly::monomial(1);
    Poly p = (x1 * quot - x1 * y + y.antiderivative()) * dd.lambda_node_deriv1();
    p.trim(1e-12);
    return p;
}

MapThreshold map_threshold(const DDPair& dd, double tol) {
    MapThreshold res;
    auto P = [&](double x) { return trial_entropy_on_curve(dd, x); };
    const int grid = 10000;
    const double floor = 1e-13;  // |P| below this is indistinguishable from 0
    double px = 1e-9, pv = P(px);
    for (int i = 1; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        double v = P(x);
        if (std::abs(v) <= floor) continue;
        if (std::abs(pv) > floor && (pv > 0.0) != (v > 0.0))
            res.roots.push_back(bisect(P, px, x, pv, tol));
        // tangency: local extremum of P touching zero without sign change
        if (i >= 2) {
            double xm = static_cast<double>(i - 1) / grid;
            double vm = P(xm);
            if (std::abs(vm) < 1e-10 && (vm - pv) * (v - vm) < 0.0 && pv * v > 0.0)
                res.tangencies.push_back(xm);
        }
        px = x;
        pv = v;
    }

    double bp = bp_threshold(dd);
    double cap = std::min(stability_threshold(dd), shannon_threshold(dd));
    if (res.roots.empty()) {
        res.epsilon = bp;
        res.x_star = 0.0;
        res.tight = std::abs(first_upper_bound(dd) - bp) < 1e-9;
        return res;
    }
    double best_eps = kInf, best_x = 0.0;
    for (double r : res.roots) {
        double e = epsilon_of_x(dd, r);
        if (e < best_eps) {
            best_eps = e;
            best_x = r;
        }
    }
    res.x_star = best_x;
    // tightness side condition: no x' in (x*, 1] with eps(x') = eps(x*),
    // i.e. eps stays strictly above eps(x*) beyond the winning root
    bool clean = true;
    for (int i = 1; i <= grid && clean; ++i) {
        double x = best_x + (1.0 - best_x) * i / grid;
        clean = epsilon_of_x(dd, x) - best_eps > 0.0;
    }
    res.tight = clean;
    // relation chain eps_BP <= eps_MAP <= min(eps_Sh, eps_Stab)
    if (best_eps > cap + 1e-15) {
        res.epsilon = std::max(bp, cap);
        res.tight = std::abs(res.epsilon - bp) < 1e-9;
    } else {
        res.epsilon = std::max(bp, best_eps);
    }
    return res;
}

namespace {

// x on a given increasing stretch with eps(x) = target
double x_on_stretch(const DDPair& dd, const Interval& s, double target, double tol) {
    auto f = [&](double x) { return epsilon_of_x(dd, x) - target; };
    double lo = s.x_low, hi = s.x_high;
    double flo = f(lo);
    if (flo >= 0.0) return lo;
    if (f(hi) <= 0.0) return hi;
    return bisect(f, lo, hi, flo, tol);
}

}  // namespace

double first_upper_bound(const DDPair& dd, double tol) {
    BranchPartition part = compute_partition(dd);
    auto P = [&](double x) { return trial_entropy_on_curve(dd, x); };
    // g(x) = P(x) + sum of jump gaps above x; tail area from eps(x) to 1 is r - g(x)
    auto g = [&](double x) {
        double acc = P(x);
        for (const Jump& j : part.jumps)
            if (j.x_minus > x + 1e-15) acc += P(j.x_plus) - P(j.x_minus);
        return acc;
    };
    // walk intervals bottom-up; g is continuous and nondecreasing along them
    const double floor = 1e-12;
    for (const Interval& iv : part.intervals) {
        double glo = g(std::max(iv.x_low, 0.0));
        double ghi = g(iv.x_high);
        if (std::abs(glo) <= floor) return iv.eps_low;  // balance at the branch bottom
        if (glo > 0.0) return bp_threshold(dd);         // no tail balance above here
        if (ghi < 0.0) continue;
        double x = bisect(g, std::max(iv.x_low, 0.0), iv.x_high, glo, tol);
        return epsilon_of_x(dd, x);
    }
    return bp_threshold(dd);
}

EbpArea ebp_area(const DDPair& dd) {
    const Poly& lam = dd.lambda_edge();
    const Poly lamd = lam.derivative();
    auto integrand = [&](double x) {
        double yx = dd.y_at(x);
        double l = lam(yx);
        double h = dd.lambda_node()(yx);
        double deps = (l - x * lamd(yx) * dd.y_deriv_at(x)) / (l * l);
        return h * deps;
    };
    const double delta = 1e-6;
    double numeric = integrate(integrand, delta, 1.0, 1e-12) + trial_entropy_on_curve(dd, delta);
    double closed = trial_entropy_on_curve(dd, 1.0);
    return {numeric, closed};
}

BpArea bp_area(const DDPair& dd) {
    BranchPartition part = compute_partition(dd);
    auto P = [&](double x) { return trial_entropy_on_curve(dd, x); };
    BpArea out;
    double area = 0.0;
    for (const Interval& iv : part.intervals) area += P(iv.x_high) - P(iv.x_low);
    out.area = area;
    const Poly& L = dd.lambda_primitive();
    for (const Jump& j : part.jumps) {
        double yp = dd.y_at(j.x_plus), ym = dd.y_at(j.x_minus);
        double A = j.x_plus * yp - j.x_minus * ym;
        double B = j.eps * (L(yp) - L(ym));
        double C = dd.y_integral_at(j.x_plus) - dd.y_integral_at(j.x_minus);
        out.deficits.push_back(A - B - C);
    }
    return out;
}

MapCurve map_exit_curve(const DDPair& dd, int grid_size) {
    MapThreshold mt = map_threshold(dd);
    BranchPartition part = compute_partition(dd);
    MapCurve mc;
    mc.curve.kind = CurveKind::MAP;
    auto h_of = [&](double x) { return dd.lambda_node()(dd.y_at(x)); };
    auto P = [&](double x) { return trial_entropy_on_curve(dd, x); };

    double x_start = mt.x_star;
    if (mt.x_star > 0.0 && std::abs(epsilon_of_x(dd, mt.x_star) - mt.epsilon) < 1e-9) {
        mc.jumps.push_back({mt.epsilon, 0.0, mt.x_star, false});
    } else {
        // threshold pinned by stability: the curve leaves h = 0 continuously
        x_start = 0.0;
    }

    // zero part
    int zgrid = std::max(2, grid_size / 10);
    for (int i = 0; i < zgrid; ++i)
        mc.curve.samples.push_back({0.0, mt.epsilon * i / zgrid, 0.0});

    std::size_t si = 0;
    while (si < part.stretches.size() && part.stretches[si].x_high < x_start - 1e-12) ++si;
    if (si == part.stretches.size()) throw EnsembleError("map_exit_curve: start not on a stretch");

    double x_cur = std::max(x_start, part.stretches[si].x_low);
    for (;;) {
        const Interval& s = part.stretches[si];
        double x_end = s.x_high;
        bool last = (si + 1 == part.stretches.size());
        double jump_eps = 0.0, x_minus = 0.0, x_plus = 0.0;
        if (!last) {
            const Interval& t = part.stretches[si + 1];
            // local balance: P at the two equal-eps branch points coincide
            double lo = std::max(epsilon_of_x(dd, x_cur), t.eps_low);
            double hi = std::min(s.eps_high, t.eps_high);
            auto bal = [&](double e) {
                double xm = x_on_stretch(dd, s, e, 1e-13);
                double xp = x_on_stretch(dd, t, e, 1e-13);
                return P(xp) - P(xm);
            };
            double flo = bal(lo), fhi = bal(hi);
            if (flo == 0.0) {
                jump_eps = lo;
            } else if ((flo > 0.0) == (fhi > 0.0)) {
                throw EnsembleError("map_exit_curve: balance point not bracketed between stretch " +
                                    std::to_string(si) + " and " + std::to_string(si + 1));
            } else {
                jump_eps = bisect(bal, lo, hi, flo, 1e-13);
            }
            x_minus = x_on_stretch(dd, s, jump_eps, 1e-13);
            x_plus = x_on_stretch(dd, t, jump_eps, 1e-13);
            x_end = x_minus;
        }
        int pts = std::max(2, static_cast<int>(grid_size * (x_end - x_cur)) + 2);
        for (int i = 0; i <= pts; ++i) {
            double x = x_cur + (x_end - x_cur) * i / pts;
            mc.curve.samples.push_back({x, epsilon_of_x(dd, x), h_of(x)});
        }
        mc.segments.push_back({x_cur, x_end});
        if (last) break;
        mc.jumps.push_back({jump_eps, x_minus, x_plus, true});
        x_cur = x_plus;
        ++si;
    }
    return mc;
}

double map_curve_area(const DDPair& dd, const MapCurve& mc) {
    const Poly& lam = dd.lambda_edge();
    const Poly lamd = lam.derivative();
    auto integrand = [&](double x) {
        double yx = dd.y_at(x);
        double l = lam(yx);
        double deps = (l - x * lamd(yx) * dd.y_deriv_at(x)) / (l * l);
        return dd.lambda_node()(yx) * deps;
    };
    double area = 0.0;
    for (const auto& [a, b] : mc.segments)
        if (b > a) area += integrate(integrand, std::max(a, 1e-9), b, 1e-11);
    return area;
}

std::vector<TrajectoryPoint> maxwell_trajectory(const DDPair& dd, double epsilon, int grid_size) {
    DEFixedPoint fp = de_fixed_point(dd, epsilon);
    if (fp.x <= 0.0) return {{1.0, 1.0, 0.0}};
    BranchPartition part = compute_partition(dd);
    auto P = [&](double x) { return trial_entropy_on_curve(dd, x); };
    auto Lam = [&](double x) { return dd.lambda_node()(dd.y_at(x)); };

    // locate the operating fixed point on a BP branch
    int iv = static_cast<int>(part.intervals.size()) - 1;
    while (iv > 0 && fp.x < part.intervals[iv].x_low - 1e-9) --iv;

    std::vector<TrajectoryPoint> traj;
    double s = 0.0;  // entropy per bit
    auto emit = [&](double gamma, double det, double val) {
        traj.push_back({gamma, det, std::max(0.0, val)});
    };

    double x_top = fp.x;
    for (; iv >= 0; --iv) {
        const Interval& seg = part.intervals[iv];
        // guessing phase: ride the branch down from x_top to its lower end
        double x_bot = seg.x_low;
        int pts = std::max(2, static_cast<int>(grid_size * (x_top - x_bot)) + 2);
        double Ptop = P(x_top), s0 = s;
        for (int i = 0; i <= pts; ++i) {
            double x = x_top - (x_top - x_bot) * i / pts;
            double e = epsilon_of_x(dd, x);
            s = s0 + (Ptop - P(x));
            emit(1.0 - e / epsilon, 1.0 - e * Lam(x), s);
        }
        // find the jump whose upper abscissa is this branch bottom
        const Jump* jm = nullptr;
        for (const Jump& j : part.jumps)
            if (std::abs(j.x_plus - seg.x_low) < 1e-9) jm = &j;
        if (!jm) break;  // branch reaches x = 0 (threshold by stability)
        // confirmation cascade at fixed reduced parameter jm->eps: the state
        // slides down to the lower branch while conditions accumulate
        double gamma_j = 1.0 - jm->eps / epsilon;
        int cpts = std::max(2, static_cast<int>(grid_size * (jm->x_plus - jm->x_minus)) + 2);
        double s_jump = s, P_plus = P(jm->x_plus);
        for (int i = 1; i <= cpts; ++i) {
            double x = jm->x_plus - (jm->x_plus - jm->x_minus) * i / cpts;
            // trial entropy at channel jm->eps on the EBP point x; the x -> 0
            // limit is 0 (eps(x) Lambda(y) = x Lambda(y)/lambda(y) vanishes)
            double p_ej = x > 0.0 ? P(x) + (jm->eps - epsilon_of_x(dd, x)) * Lam(x) : 0.0;
            s = s_jump - (p_ej - P_plus);
            emit(gamma_j, 1.0 - jm->eps * Lam(x), s);
        }
        x_top = jm->x_minus;
        if (x_top <= 0.0) break;
    }
    emit(1.0, 1.0, s);
    return traj;
}

GldpcBounds gldpc_map_bound(const Poly& lambda, const Poly& right_exit, double tol) {
    DDPair dd = DDPair::generalized(lambda, right_exit);
    return {bp_threshold(dd, tol), first_upper_bound(dd, tol)};
}

GapAreas component_gap_areas(const DDPair& dd) {
    double eps_bp = bp_threshold(dd);
    const Poly& lam = dd.lambda_edge();
    auto lam_inv = [&](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return bisect([&](double w) { return lam(w) - t; }, 0.0, 1.0, -t, 1e-13);
    };
    auto f = [&](double x) { return lam_inv(x / eps_bp) - dd.y_at(x); };
    double area = integrate(f, 0.0, std::min(eps_bp, 1.0), 1e-10);
    if (eps_bp < 1.0)
        area += integrate([&](double x) { return 1.0 - dd.y_at(x); }, eps_bp, 1.0, 1e-10);
    BpArea ba = bp_area(dd);
    double dsum = 0.0;
    for (double d : ba.deficits) dsum += d;
    return {area / dd.int_lambda(), dsum / dd.int_lambda()};
}

}  // namespace maxwell
