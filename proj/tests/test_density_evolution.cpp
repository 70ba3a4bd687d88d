#include <doctest.h>

#include <cmath>
#include <limits>

#include "maxwell/density_evolution.hpp"
#include "maxwell/exit_curves.hpp"
#include "maxwell/tanner.hpp"

using namespace maxwell;

namespace {

DDPair reg36() { return DDPair::from_edge(Poly::monomial(2), Poly::monomial(5)); }
DDPair reg24() { return DDPair::from_edge(Poly::monomial(1), Poly::monomial(3)); }

DDPair random_pair(Rng& rng) {
    std::map<int, double> lm, rm;
    double sum = 0.0;
    int terms = 2 + static_cast<int>(rng.below(3));
    for (int t = 0; t < terms; ++t) {
        double w = 0.05 + rng.uniform01();
        lm[2 + static_cast<int>(rng.below(10))] += w;
        sum += w;
    }
    for (auto& [d, w] : lm) w /= sum;
    rm[5 + static_cast<int>(rng.below(4))] = 1.0;
    return DDPair::from_degree_maps(lm, rm);
}

}  // namespace

TEST_CASE("fixed point of the running example") {
    DDPair dd = reg36();
    DEFixedPoint fp = de_fixed_point(dd, 0.46);
    CHECK(fp.x == doctest::Approx(0.3789).epsilon(2e-4));
    CHECK(fp.y == doctest::Approx(0.9076).epsilon(2e-4));
    // fixed-point equations hold tightly
    CHECK(fp.x == doctest::Approx(0.46 * std::pow(fp.y, 2)).epsilon(1e-12));
    CHECK(fp.y == doctest::Approx(1.0 - std::pow(1.0 - fp.x, 5)).epsilon(1e-12));
}

TEST_CASE("epsilon one and below threshold") {
    DDPair dd = reg36();
    DEFixedPoint top = de_fixed_point(dd, 1.0);
    CHECK(top.x == doctest::Approx(1.0));
    CHECK(top.y == doctest::Approx(1.0));
    DEFixedPoint low = de_fixed_point(dd, 0.40);
    CHECK(low.x == 0.0);
}

TEST_CASE("bp thresholds") {
    CHECK(bp_threshold(reg36()) == doctest::Approx(0.4294).epsilon(1e-3));
    CHECK(bp_threshold(reg24()) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    DDPair dj = DDPair::from_degree_maps({{2, 0.3}, {3, 0.3}, {14, 0.4}}, {{7, 1.0}});
    CHECK(bp_threshold(dj) == doctest::Approx(0.48437).epsilon(1e-4));
}

TEST_CASE("stability threshold") {
    DDPair stco = DDPair::from_degree_maps({{2, 0.4}, {7, 0.6}}, {{7, 1.0}});
    CHECK(stability_threshold(stco) == doctest::Approx(1.0 / 2.4).epsilon(1e-12));
    CHECK(bp_threshold(stco) == doctest::Approx(1.0 / 2.4).epsilon(1e-6));
    CHECK(std::isinf(stability_threshold(reg36())));
    CHECK(stability_threshold(reg24()) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("shannon threshold") {
    CHECK(shannon_threshold(reg36()) == doctest::Approx(0.5).epsilon(1e-14));
    DDPair r34 = DDPair::from_edge(Poly::monomial(2), Poly::monomial(3));
    CHECK(shannon_threshold(r34) == doctest::Approx(0.75).epsilon(1e-14));
    DDPair row1 = DDPair::from_degree_maps({{2, 1.0}}, {{6, 0.4}, {7, 0.6}});
    CHECK(shannon_threshold(row1) == doctest::Approx(0.3048).epsilon(1e-4));
}

TEST_CASE("fixed point monotone in epsilon and zero below threshold") {
    Rng rng(11);
    for (int t = 0; t < 6; ++t) {
        DDPair dd = random_pair(rng);
        double bp = bp_threshold(dd);
        double prev = -1.0;
        for (int i = 0; i <= 100; ++i) {
            double eps = static_cast<double>(i) / 100;
            DEFixedPoint fp = de_fixed_point(dd, eps);
            CHECK(fp.x >= prev - 1e-10);
            prev = fp.x;
            if (eps < bp - 1e-4) CHECK(fp.x < 1e-11);
        }
        CHECK(bp <= std::min(stability_threshold(dd), 1.0) + 1e-9);
    }
}

TEST_CASE("three valued de reduces to standard de") {
    DDPair dd = reg36();
    SUBCASE("gamma zero disables guessing") {
        ThreeValuedState st = three_valued_de(dd, 0.46, 0.0);
        CHECK(st.left[2] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(st.right[2] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(st.left[1] == doctest::Approx(de_fixed_point(dd, 0.46).x).epsilon(1e-10));
    }
    SUBCASE("gamma one guesses every undetermined bit") {
        ThreeValuedState st = three_valued_de(dd, 0.46, 1.0);
        CHECK(st.left[1] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(st.right[1] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("split matches the two reduced recursions") {
        ThreeValuedState st = three_valued_de(dd, 0.46, 0.1);
        double xq = de_fixed_point(dd, 0.46 * 0.9).x;
        double xs = de_fixed_point(dd, 0.46).x;
        CHECK(st.left[1] == doctest::Approx(xq).epsilon(1e-9));
        CHECK(st.left[1] + st.left[2] == doctest::Approx(xs).epsilon(1e-9));
    }
}

TEST_CASE("three valued state is a distribution") {
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        DDPair dd = random_pair(rng);
        double eps = 0.2 + 0.7 * rng.uniform01();
        double gamma = rng.uniform01();
        ThreeValuedState st = three_valued_de(dd, eps, gamma);
        CHECK(st.left[0] + st.left[1] + st.left[2] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(st.right[0] + st.right[1] + st.right[2] == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : st.left) CHECK(v >= -1e-12);
        for (double v : st.right) CHECK(v >= -1e-12);
        double xq = de_fixed_point(dd, eps * (1.0 - gamma)).x;
        double xs = de_fixed_point(dd, eps).x;
        CHECK(st.left[1] == doctest::Approx(xq).epsilon(1e-10));
        CHECK(st.left[1] + st.left[2] == doctest::Approx(xs).epsilon(1e-10));
    }
}

TEST_CASE("regular pairs dip once") {
    // eps(x) for (l, r) regular with l >= 3 has exactly one interior minimum
    for (int l : {3, 4, 5}) {
        for (int r : {l + 1, l + 3}) {
            DDPair dd = DDPair::from_edge(Poly::monomial(l - 1), Poly::monomial(r - 1));
            int sign_changes = 0;
            double prev = eps_deriv_numerator(dd, 1e-4);
            for (int i = 2; i <= 10000; ++i) {
                double v = eps_deriv_numerator(dd, static_cast<double>(i) / 10000);
                if (prev != 0.0 && v != 0.0 && (prev > 0) != (v > 0)) ++sign_changes;
                prev = v;
            }
            CHECK(sign_changes == 1);
        }
    }
}
