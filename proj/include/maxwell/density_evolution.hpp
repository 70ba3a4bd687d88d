#pragma once

#include <array>
#include <cstdint>

#include "maxwell/ensemble.hpp"

namespace maxwell {

struct DEFixedPoint {
    double epsilon = 0.0;
    double x = 0.0;  // variable-to-check erased fraction (largest fixed point)
    double y = 0.0;  // check-to-variable erased fraction, y = 1 - rho(1-x)
    long iterations = 0;
    bool converged = true;
};

// Iterates x <- eps*lambda(y(x)) from x0 = 1; the iteration is monotone
// decreasing, so it converges to the largest fixed point.
DEFixedPoint de_fixed_point(const DDPair& dd, double epsilon, double tol = 1e-12,
                            long max_iter = 1000000);

// inf over x in (0,1] of eps(x) = x/lambda(y(x)), including the x->0 stability
// limit. Grid scan plus golden-section refinement.
double bp_threshold(const DDPair& dd, double tol = 1e-12);
// Same, also reporting the minimizing abscissa (0 when stability-determined).
struct BPThreshold {
    double epsilon;
    double x;
};
BPThreshold bp_threshold_point(const DDPair& dd, double tol = 1e-12);

// 1/(lambda'(0) rho'(1)); +infinity when lambda'(0) = 0. In generalized mode
// the x->0 limit of x/lambda(y(x)) from leading coefficients.
double stability_threshold(const DDPair& dd);

double shannon_threshold(const DDPair& dd);

// Three-valued (0/?/g) density evolution of the decoder with guessing.
struct ThreeValuedState {
    std::array<double, 3> left;   // (a_0, a_?, a_g) variable-to-check
    std::array<double, 3> right;  // (b_0, b_?, b_g) check-to-variable
    double epsilon = 0.0;
    double gamma = 0.0;
    long iterations = 0;
    bool converged = true;
};
ThreeValuedState three_valued_de(const DDPair& dd, double epsilon, double gamma,
                                 double tol = 1e-12, long max_iter = 1000000);

}  // namespace maxwell
