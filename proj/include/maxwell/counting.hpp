#pragma once

#include <vector>

#include "maxwell/density_evolution.hpp"
#include "maxwell/ensemble.hpp"

namespace maxwell {

// Degree profile of the residual graph left by BP at BEC(eps), normalized to
// the node counts of the original graph.
struct ResidualEnsemble {
    Poly lambda_node_res;  // Lambda_eps(z) = eps * Lambda(z y)
    Poly gamma_node_res;   // Gamma_eps(z) = Gamma(1-x+zx) - Gamma(1-x) - z x Gamma'(1-x)
    double epsilon = 0.0;
    DEFixedPoint fixed_point;
    bool empty() const { return fixed_point.x <= 0.0; }
};

ResidualEnsemble residual_ensemble(const DDPair& dd, double epsilon);

// A proper node-perspective ddp (Lambda(1) = Gamma(1) = 1) for Psi evaluation.
struct NodeDDP {
    Poly lambda_node;
    Poly gamma_node;
    Poly lambda_edge;
    double lambda_d1;  // Lambda'(1)
    double gamma_d1;   // Gamma'(1)
};

NodeDDP make_node_ddp(const Poly& lambda_node, const Poly& gamma_node);
NodeDDP normalize_residual(const ResidualEnsemble& res);
NodeDDP node_ddp_of(const DDPair& dd);

struct PsiEvaluation {
    double u;
    double v;
    double value;
};

// Weight-enumerator exponent offset Psi_Xi(u) (base-2 logs); Psi(1) = 0.
PsiEvaluation psi(const NodeDDP& ddp, double u);
// First and second derivative of Psi at u (analytic, via 2nd-order jets).
void psi_derivatives(const NodeDDP& ddp, double u, double& d1, double& d2);

enum class PsiVerdict { certified, violated, marginal };

struct SecondaryMax {
    double u;
    double psi;
    double dpsi_deps;  // central difference in eps, reported not certified
};

struct TightnessReport {
    PsiVerdict verdict = PsiVerdict::certified;
    bool empty_residual = false;
    double max_u = 1.0;        // location of the largest interior maximum
    double max_psi = 0.0;      // its Psi value (0 when none)
    double psi_dd_at_1 = 0.0;  // Psi''(1)
    std::vector<SecondaryMax> secondary_maxima;
};

// Scans Psi over u in [0,1] for the residual ddp at eps; certified when the
// global maximum stays at u = 1 with Psi''(1) < 0.
TightnessReport check_tightness(const DDPair& dd, double epsilon, int grid_size = 10000);

struct CondEntropy {
    double value = 0.0;
    bool certified = false;
};

// Asymptotic conditional entropy per bit: trial entropy at the DE fixed
// point, clamped at 0; certification from check_tightness.
CondEntropy conditional_entropy(const DDPair& dd, double epsilon);

// (1/n) log2 E[N(e n Lambda'(1))]: exponent of the expected number of
// codewords involving a fraction e of the edges.
double growth_rate(const NodeDDP& ddp, double e, double tol = 1e-12);
double growth_rate(const DDPair& dd, double e, double tol = 1e-12);
// e implied by a Psi scan point u (stationarity e = uv/(1+uv))
double edge_fraction_of_u(const NodeDDP& ddp, double u);

// Infimum of eps with verdict == certified, by bisection.
double certification_boundary(const DDPair& dd, double tol = 1e-5);

}  // namespace maxwell
