#pragma once

#include <optional>
#include <vector>

#include "maxwell/density_evolution.hpp"
#include "maxwell/ensemble.hpp"

namespace maxwell {

// eps(x) = x / lambda(y(x)); the stability limit at x = 0 (may be +inf)
double epsilon_of_x(const DDPair& dd, double x);

// sign carrier of eps'(x): lambda(y(x)) - x lambda'(y(x)) y'(x)
double eps_deriv_numerator(const DDPair& dd, double x);

struct Interval {
    double x_low = 0.0;
    double x_high = 0.0;
    double eps_low = 0.0;   // eps(x_low)
    double eps_high = 0.0;  // eps(x_high)
};

struct Jump {
    double eps = 0.0;      // eps(x_plus) = eps(x_minus) except for a threshold jump
    double x_minus = 0.0;  // lower-branch abscissa (0 for a jump at the BP threshold)
    double x_plus = 0.0;   // upper-branch abscissa
};

// The intervals on which eps(x) increases and the BP decoder operates, built
// by the backward recursion from x = 1, plus all maximal increasing stretches
// of eps(x) (the parts of the EBP curve hidden from the BP decoder included).
struct BranchPartition {
    std::vector<Interval> intervals;  // BP-visible branches, ordered by x
    std::vector<Jump> jumps;          // discontinuities of the BP EXIT curve
    std::vector<Interval> stretches;  // every maximal increasing stretch
    int J() const { return static_cast<int>(intervals.size()); }
    std::vector<double> jump_epsilons() const;
};

BranchPartition compute_partition(const DDPair& dd, int grid_size = 10000);

enum class CurveKind { BP, EBP, MAP };

struct ExitSample {
    double x;
    double epsilon;
    double h;
};

struct ExitCurve {
    CurveKind kind;
    std::vector<ExitSample> samples;
};

ExitCurve ebp_curve(const DDPair& dd, int grid_size = 1000);

// BP EXIT function: 0 below the BP threshold, Lambda(y(x)) at the largest DE
// fixed point above it.
double bp_exit(const DDPair& dd, double epsilon);

// Trial entropy P_eps(x, y) (LDPC mode).
double trial_entropy(const DDPair& dd, double epsilon, double x, double y);

// P(x) = P_{eps(x)}(x, y(x)) along the EBP curve. Valid in both modes:
// Lambda'(1) * [eps(x) L(y(x)) - x y(x) + int_0^x y].
double trial_entropy_on_curve(const DDPair& dd, double x);

// Closed-form polynomial for P(x) when Lambda(y)/lambda(y) divides exactly
// (variable-regular ensembles); nullopt otherwise.
std::optional<Poly> trial_entropy_poly(const DDPair& dd);

struct MapThreshold {
    double epsilon = 0.0;
    double x_star = 0.0;            // 0 when no root of P exists in (0,1]
    bool tight = false;             // Improved Upper-Bound side condition holds
    std::vector<double> roots;      // sign-change roots of P in (0,1]
    std::vector<double> tangencies; // |P| ~ 0 local extrema without sign change
};

MapThreshold map_threshold(const DDPair& dd, double tol = 1e-12);

struct MapJump {
    double eps = 0.0;
    double x_minus = 0.0;
    double x_plus = 0.0;
    bool conjectural = false;
};

struct MapCurve {
    ExitCurve curve;  // kind = MAP
    std::vector<MapJump> jumps;
    std::vector<std::pair<double, double>> segments;  // walked x-ranges
};

// Maxwell construction: h = 0 below the MAP threshold; above it the curve
// follows the increasing EBP stretches, with internal discontinuities placed
// where the trial entropies of the two branch points balance.
MapCurve map_exit_curve(const DDPair& dd, int grid_size = 1000);

// int h^MAP dEps over the constructed curve, by quadrature on its segments.
double map_curve_area(const DDPair& dd, const MapCurve& mc);

struct EbpArea {
    double numeric;      // signed quadrature of h dEps(x) over [0,1]
    double closed_form;  // P(1) - P(0)
};
EbpArea ebp_area(const DDPair& dd);

struct BpArea {
    double area = 0.0;             // int_0^1 h^BP(eps) dEps, branch-wise closed form
    std::vector<double> deficits;  // D_i per jump, area = r + (1/int lambda) sum D_i
};
BpArea bp_area(const DDPair& dd);

// Unique eps in [eps_BP, 1] with int_{eps}^1 h^BP = design rate.
double first_upper_bound(const DDPair& dd, double tol = 1e-12);

struct TrajectoryPoint {
    double gamma;
    double determined;
    double entropy;
};

// Analytic guess/confirmation trajectory of the decoder with guessing at
// channel parameter eps: entropy per bit against the determined fraction.
std::vector<TrajectoryPoint> maxwell_trajectory(const DDPair& dd, double epsilon,
                                                int grid_size = 1000);

struct GldpcBounds {
    double eps_bp;
    double eps_bar_map;
};
GldpcBounds gldpc_map_bound(const Poly& lambda, const Poly& right_exit, double tol = 1e-12);

struct GapAreas {
    double total_gap;   // (area between lambda^-1(x/eps_BP) and y(x)) / int lambda
    double map_bp_gap;  // (1/int lambda) sum D_i
};
GapAreas component_gap_areas(const DDPair& dd);

}  // namespace maxwell
