#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "maxwell/poly.hpp"

namespace maxwell {

struct EnsembleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An LDPC ensemble spec: edge-perspective pair (lambda, rho) plus the derived
// node-perspective pair (Lambda, Gamma) and design rate. In generalized mode a
// right-exit polynomial y(x) replaces 1 - rho(1 - x); rho/Gamma are then unset.
class DDPair {
public:
    // lambda/rho given as maps {edge degree j -> coefficient of x^(j-1)}
    static DDPair from_degree_maps(const std::map<int, double>& lambda,
                                   const std::map<int, double>& rho);
    static DDPair from_edge(Poly lambda, Poly rho);
    // generalized (GLDPC) mode: y given directly, {power k -> coefficient of x^k}
    static DDPair generalized(Poly lambda, Poly right_exit);
    static DDPair parse_json(const std::string& text);
    static DDPair load_json(const std::string& path);

    const Poly& lambda_edge() const { return lambda_edge_; }
    const Poly& rho_edge() const;
    const Poly& lambda_node() const { return lambda_node_; }
    const Poly& gamma_node() const;
    bool generalized_mode() const { return generalized_; }

    // y(x): check-to-variable erasure curve, 1 - rho(1-x) or the override.
    // Evaluated pointwise; expanding 1 - rho(1-x) is unstable at high degrees.
    double y_at(double x) const;
    // full relative precision down to x = 0 (expm1 form); for the analytics
    double y_at_precise(double x) const;
    double y_deriv_at(double x) const;
    double y_integral_at(double x) const;  // int_0^x y
    double int_y() const { return int_y_; }
    // expanded y(x) polynomial when trustworthy (override or modest degree)
    const Poly* y_poly() const { return have_y_poly_ ? &y_poly_ : nullptr; }

    // L(w) = int_0^w lambda
    const Poly& lambda_primitive() const { return lambda_primitive_; }

    double int_lambda() const { return int_lambda_; }
    double lambda_node_deriv1() const { return 1.0 / int_lambda_; }  // Lambda'(1)
    double gamma_node_deriv1() const;                                // Gamma'(1)
    double design_rate() const { return design_rate_; }

private:
    DDPair() = default;
    void finish_setup();

    Poly lambda_edge_, rho_edge_, lambda_node_, gamma_node_;
    Poly rho_deriv_, rho_primitive_;  // LDPC mode evaluation helpers
    Poly y_poly_, y_poly_deriv_, y_poly_primitive_;
    Poly lambda_primitive_;
    bool have_y_poly_ = false;
    bool generalized_ = false;
    double int_lambda_ = 0.0, int_rho_ = 0.0, int_y_ = 0.0, design_rate_ = 0.0;
};

// lambda = Lambda'/Lambda'(1); used by the round-trip property tests
Poly node_to_edge(const Poly& node_poly);

}  // namespace maxwell
