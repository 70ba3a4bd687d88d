#include <doctest.h>

#include <cmath>

#include "maxwell/counting.hpp"
#include "maxwell/exit_curves.hpp"
#include "maxwell/tanner.hpp"

using namespace maxwell;

namespace {

DDPair reg36() { return DDPair::from_edge(Poly::monomial(2), Poly::monomial(5)); }

NodeDDP random_node_ddp(Rng& rng) {
    std::map<int, double> lm;
    double sum = 0.0;
    int terms = 2 + static_cast<int>(rng.below(3));
    for (int t = 0; t < terms; ++t) {
        double w = 0.05 + rng.uniform01();
        lm[2 + static_cast<int>(rng.below(8))] += w;
        sum += w;
    }
    for (auto& [d, w] : lm) w /= sum;
    std::map<int, double> rm;
    rm[4 + static_cast<int>(rng.below(5))] = 0.4;
    rm[5 + static_cast<int>(rng.below(5))] += 0.6;
    return node_ddp_of(DDPair::from_degree_maps(lm, rm));
}

}  // namespace

TEST_CASE("residual ensemble structure") {
    DDPair dd = reg36();
    SUBCASE("full ensemble at eps one") {
        ResidualEnsemble res = residual_ensemble(dd, 1.0);
        REQUIRE_FALSE(res.empty());
        // Lambda_1(z) = Lambda(z); Gamma_1(z) = Gamma(z) (no degree-1 checks)
        for (std::size_t k = 0; k <= dd.lambda_node().degree(); ++k)
            CHECK(res.lambda_node_res.coeff(k) ==
                  doctest::Approx(dd.lambda_node().coeff(k)).epsilon(1e-12));
        for (std::size_t k = 0; k <= dd.gamma_node().degree(); ++k)
            CHECK(res.gamma_node_res.coeff(k) ==
                  doctest::Approx(dd.gamma_node().coeff(k)).epsilon(1e-12));
    }
    SUBCASE("empty below threshold") {
        ResidualEnsemble res = residual_ensemble(dd, 0.40);
        CHECK(res.empty());
    }
    SUBCASE("coefficient identities at a working point") {
        ResidualEnsemble res = residual_ensemble(dd, 0.52);
        double x = res.fixed_point.x, y = res.fixed_point.y;
        CHECK(res.lambda_node_res(1.0) <= 1.0 + 1e-12);
        CHECK(res.gamma_node_res(1.0) <= 1.0 + 1e-12);
        CHECK(res.gamma_node_res.coeff(0) == 0.0);
        CHECK(res.gamma_node_res.coeff(1) == 0.0);
        for (std::size_t l = 0; l <= res.lambda_node_res.degree(); ++l)
            CHECK(res.lambda_node_res.coeff(l) ==
                  doctest::Approx(0.52 * dd.lambda_node().coeff(l) * std::pow(y, l))
                      .epsilon(1e-12));
        // Gamma_eps(z) coefficients from the binomial expansion
        for (std::size_t k = 2; k <= res.gamma_node_res.degree(); ++k) {
            double expect = 0.0;
            for (std::size_t r = k; r <= dd.gamma_node().degree(); ++r) {
                double binom = 1.0;
                for (std::size_t t = 0; t < k; ++t)
                    binom = binom * static_cast<double>(r - t) / static_cast<double>(t + 1);
                expect += dd.gamma_node().coeff(r) * binom * std::pow(x, k) *
                          std::pow(1.0 - x, r - k);
            }
            CHECK(res.gamma_node_res.coeff(k) == doctest::Approx(expect).epsilon(1e-11));
        }
        // residual design rate equals the trial entropy at the fixed point
        double r_res = res.lambda_node_res(1.0) -
                       dd.lambda_node_deriv1() / dd.gamma_node_deriv1() * res.gamma_node_res(1.0);
        CHECK(r_res == doctest::Approx(trial_entropy(dd, 0.52, x, y)).epsilon(1e-12));
    }
}

TEST_CASE("psi basics") {
    NodeDDP full = node_ddp_of(reg36());
    CHECK(psi(full, 1.0).value == 0.0);
    CHECK(psi(full, 0.0).value == doctest::Approx(-0.5).epsilon(1e-12));
    // v(u) satisfies the defining ratio identity
    for (double u : {0.1, 0.3, 0.7, 0.95}) {
        PsiEvaluation ev = psi(full, u);
        const auto& le = full.lambda_edge.coeffs();
        double A = 0.0, B = 0.0;
        for (std::size_t k = 0; k < le.size(); ++k) {
            if (le[k] == 0.0) continue;
            double ul = std::pow(u, static_cast<int>(k) + 1);
            A += le[k] / (1.0 + ul);
            B += le[k] * std::pow(u, static_cast<int>(k)) / (1.0 + ul);
        }
        CHECK(ev.v * A == doctest::Approx(B).epsilon(1e-12));
    }
    CHECK_THROWS(psi(full, -0.5));
}

TEST_CASE("psi properties on random ddps") {
    Rng rng(41);
    for (int t = 0; t < 12; ++t) {
        NodeDDP ddp = random_node_ddp(rng);
        CHECK(psi(ddp, 1.0).value == 0.0);
        // symmetry bound Psi(1/u) >= Psi(u) for u > 1
        for (double u : {1.2, 1.7, 2.5, 4.0})
            CHECK(psi(ddp, 1.0 / u).value >= psi(ddp, u).value - 1e-12);
        // analytic derivatives against central differences
        double d1, d2;
        psi_derivatives(ddp, 0.6, d1, d2);
        double h = 1e-5;
        double c1 = (psi(ddp, 0.6 + h).value - psi(ddp, 0.6 - h).value) / (2 * h);
        double c2 =
            (psi(ddp, 0.6 + h).value - 2 * psi(ddp, 0.6).value + psi(ddp, 0.6 - h).value) /
            (h * h);
        CHECK(d1 == doctest::Approx(c1).epsilon(1e-6));
        CHECK(d2 == doctest::Approx(c2).epsilon(1e-4));
    }
}

TEST_CASE("tightness certification across the map threshold") {
    DDPair dd = reg36();
    CHECK(check_tightness(dd, 1.0).verdict == PsiVerdict::certified);
    CHECK(check_tightness(dd, 0.52).verdict == PsiVerdict::certified);
    CHECK(check_tightness(dd, 0.45).verdict == PsiVerdict::violated);
    CHECK(check_tightness(dd, 1.0).psi_dd_at_1 < 0.0);
    // the certification boundary sits at the map threshold
    double boundary = certification_boundary(dd, 1e-5);
    CHECK(boundary == doctest::Approx(map_threshold(dd).epsilon).epsilon(2e-4));
}

TEST_CASE("secondary maximum derivative report near the critical point") {
    DDPair dd = reg36();
    TightnessReport rep = check_tightness(dd, 0.48816);
    REQUIRE_FALSE(rep.secondary_maxima.empty());
    // the near-zero secondary maximum recedes as eps grows past the threshold
    CHECK(rep.secondary_maxima[0].dpsi_deps < 0.0);
    CHECK(std::abs(rep.secondary_maxima[0].psi) < 1e-4);
}

TEST_CASE("conditional entropy") {
    DDPair dd = reg36();
    CondEntropy b = conditional_entropy(dd, 0.52);
    CHECK(b.value == doctest::Approx(0.02755).epsilon(1e-3));
    CHECK(b.certified);
    CondEntropy c = conditional_entropy(dd, 0.4881508841915644);
    CHECK(c.value == doctest::Approx(0.0).epsilon(1e-6));
    CondEntropy top = conditional_entropy(dd, 1.0);
    CHECK(top.value == doctest::Approx(dd.design_rate()).epsilon(1e-12));
    CHECK(conditional_entropy(dd, 0.3).value == 0.0);
    // nondecreasing in eps and continuous at the threshold from above
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        double eps = i / 50.0;
        double v = conditional_entropy(dd, eps).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    double at = map_threshold(dd).epsilon;
    CHECK(conditional_entropy(dd, at + 1e-4).value < 1e-3);
    CHECK(conditional_entropy(dd, at + 1e-4).value > 0.0);
}

TEST_CASE("growth rate") {
    DDPair dd = reg36();
    SUBCASE("sup over e meets the design rate") {
        double best = -1.0;
        for (int i = 1; i < 100; ++i) best = std::max(best, growth_rate(dd, i / 100.0));
        CHECK(best == doctest::Approx(dd.design_rate()).epsilon(1e-10));
    }
    SUBCASE("small weights are exponentially rare when lambda'(0) = 0") {
        CHECK(growth_rate(dd, 1e-2) < 0.0);
        CHECK(growth_rate(dd, 1e-3) < 0.0);
        CHECK(growth_rate(dd, 1e-3) > growth_rate(dd, 1e-2) - 1.0);
    }
    SUBCASE("consistency with the psi parameterization at its extrema") {
        // residual pair near the critical point develops a second maximum
        ResidualEnsemble res = residual_ensemble(dd, 0.4882);
        NodeDDP rn = normalize_residual(res);
        double u = 0.55;  // refine to the interior extremum
        for (int it = 0; it < 60; ++it) {
            double d1, d2;
            psi_derivatives(rn, u, d1, d2);
            if (d2 == 0.0) break;
            double nu = u - d1 / d2;
            if (nu <= 0.01 || nu >= 0.999) break;
            if (std::abs(nu - u) < 1e-15) break;
            u = nu;
        }
        double e0 = edge_fraction_of_u(rn, u);
        double r_res = 1.0 - rn.lambda_d1 / rn.gamma_d1;
        CHECK(growth_rate(rn, e0) == doctest::Approx(r_res + psi(rn, u).value).epsilon(1e-8));
    }
    CHECK_THROWS(growth_rate(dd, 0.0));
    CHECK_THROWS(growth_rate(dd, 1.0));
}

TEST_CASE("psi zero at one for random residuals") {
    Rng rng(59);
    DDPair dd = reg36();
    for (double eps : {0.45, 0.52, 0.7, 0.9}) {
        NodeDDP rn = normalize_residual(residual_ensemble(dd, eps));
        CHECK(std::abs(psi(rn, 1.0).value) <= 1e-12);
        CHECK(std::abs(psi(rn, 1.0 - 1e-9).value) <= 1e-12);
    }
    for (int t = 0; t < 6; ++t) {
        NodeDDP ddp = random_node_ddp(rng);
        CHECK(std::abs(psi(ddp, 1.0).value) <= 1e-12);
    }
}
