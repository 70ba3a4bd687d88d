#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "maxwell/exit_curves.hpp"
#include "maxwell/tanner.hpp"

using namespace maxwell;

namespace {

DDPair reg36() { return DDPair::from_edge(Poly::monomial(2), Poly::monomial(5)); }
DDPair reg24() { return DDPair::from_edge(Poly::monomial(1), Poly::monomial(3)); }
DDPair doublejump() {
    return DDPair::from_degree_maps({{2, 0.3}, {3, 0.3}, {14, 0.4}}, {{7, 1.0}});
}
DDPair stco() { return DDPair::from_degree_maps({{2, 0.4}, {7, 0.6}}, {{7, 1.0}}); }

DDPair random_pair(Rng& rng) {
    for (;;) {
        std::map<int, double> lm, rm;
        double sum = 0.0;
        int terms = 2 + static_cast<int>(rng.below(3));
        for (int t = 0; t < terms; ++t) {
            double w = 0.05 + rng.uniform01();
            lm[2 + static_cast<int>(rng.below(12))] += w;
            sum += w;
        }
        for (auto& [d, w] : lm) w /= sum;
        rm[4 + static_cast<int>(rng.below(5))] = 0.3;
        rm[5 + static_cast<int>(rng.below(5))] += 0.7;
        DDPair dd = DDPair::from_degree_maps(lm, rm);
        if (dd.design_rate() >= 0.05) return dd;
    }
}

}  // namespace

TEST_CASE("epsilon of x") {
    DDPair dd = reg36();
    CHECK(epsilon_of_x(dd, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(epsilon_of_x(dd, 0.2606) == doctest::Approx(0.4294).epsilon(1e-3));
    DDPair sc = stco();
    CHECK(epsilon_of_x(sc, 1e-9) == doctest::Approx(1.0 / 2.4).epsilon(1e-6));
}

TEST_CASE("partition of the running examples") {
    SUBCASE("single jump (3,6)") {
        BranchPartition p = compute_partition(reg36());
        REQUIRE(p.J() == 1);
        CHECK(p.intervals[0].x_low == doctest::Approx(0.2606).epsilon(1e-3));
        CHECK(p.intervals[0].x_high == doctest::Approx(1.0));
        REQUIRE(p.jumps.size() == 1);
        CHECK(p.jumps[0].eps == doctest::Approx(0.4294).epsilon(1e-3));
        CHECK(p.jumps[0].x_minus == 0.0);
    }
    SUBCASE("double jump") {
        BranchPartition p = compute_partition(doublejump());
        REQUIRE(p.J() == 2);
        CHECK(p.intervals[0].x_low == doctest::Approx(0.09904).epsilon(1e-3));
        CHECK(p.intervals[0].x_high == doctest::Approx(0.22156).epsilon(1e-3));
        CHECK(p.intervals[1].x_low == doctest::Approx(0.37016).epsilon(1e-3));
        REQUIRE(p.jumps.size() == 2);
        CHECK(p.jumps[0].eps == doctest::Approx(0.48437).epsilon(1e-4));
        CHECK(p.jumps[1].eps == doctest::Approx(0.51553).epsilon(1e-4));
        // jump continuity between consecutive intervals
        CHECK(epsilon_of_x(doublejump(), p.intervals[0].x_high) ==
              doctest::Approx(p.intervals[1].eps_low).epsilon(1e-9));
    }
    SUBCASE("globally monotone (2,4)") {
        BranchPartition p = compute_partition(reg24());
        REQUIRE(p.J() == 1);
        CHECK(p.intervals[0].x_low == 0.0);
        CHECK(p.jumps.empty());
    }
    SUBCASE("stability threshold with a later jump") {
        BranchPartition p = compute_partition(stco());
        REQUIRE(p.J() == 2);
        CHECK(p.intervals[0].x_low == 0.0);
        CHECK(p.intervals[0].x_high == doctest::Approx(0.04828).epsilon(1e-3));
        CHECK(p.intervals[1].x_low == doctest::Approx(0.3309).epsilon(1e-3));
        REQUIRE(p.jumps.size() == 1);
        CHECK(p.jumps[0].eps == doctest::Approx(0.4691).epsilon(1e-3));
    }
    CHECK_THROWS_AS(compute_partition(reg36(), 100), EnsembleError);
}

TEST_CASE("ebp curve endpoints and fixed point sample") {
    DDPair dd = reg36();
    ExitCurve c = ebp_curve(dd, 500);
    CHECK(c.samples.front().x == 0.0);
    CHECK(c.samples.front().h == 0.0);
    CHECK(c.samples.back().epsilon == doctest::Approx(1.0));
    CHECK(c.samples.back().h == doctest::Approx(1.0));
    // h = Lambda(y) = y^3 at the BP critical point
    CHECK(dd.lambda_node()(dd.y_at(0.2606)) == doctest::Approx(0.4727).epsilon(2e-3));
}

TEST_CASE("bp exit values") {
    DDPair dd = reg36();
    CHECK(bp_exit(dd, 1.0) == doctest::Approx(1.0));
    CHECK(bp_exit(dd, 0.40) == 0.0);
    CHECK(bp_exit(dd, 0.46) == doctest::Approx(std::pow(0.9076, 3)).epsilon(1e-3));
}

TEST_CASE("trial entropy values") {
    DDPair dd = reg36();
    CHECK(trial_entropy(dd, 1.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(trial_entropy(dd, 0.7, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    // closed-form polynomial for the variable-regular case
    auto p = trial_entropy_poly(dd);
    REQUIRE(p.has_value());
    const double expect[] = {0.0, 0.0, -2.5, 10.0, -12.5, 7.0, -1.5};
    for (std::size_t k = 0; k < 7; ++k)
        CHECK(p->coeff(k) == doctest::Approx(expect[k]).epsilon(1e-10));
    // bivariate and on-curve forms agree along the curve
    for (int i = 1; i <= 20; ++i) {
        double x = i / 20.0;
        double eps = epsilon_of_x(dd, x);
        CHECK(trial_entropy(dd, eps, x, dd.y_at(x)) ==
              doctest::Approx(trial_entropy_on_curve(dd, x)).epsilon(1e-11));
    }
}

TEST_CASE("trial entropy stationary at de fixed points") {
    Rng rng(3);
    for (int t = 0; t < 8; ++t) {
        DDPair dd = random_pair(rng);
        double eps = 0.3 + 0.6 * rng.uniform01();
        DEFixedPoint fp = de_fixed_point(dd, eps);
        if (fp.x <= 0.0) continue;
        double h = 1e-6;
        double px =
            (trial_entropy(dd, eps, fp.x + h, fp.y) - trial_entropy(dd, eps, fp.x - h, fp.y)) /
            (2 * h);
        double py =
            (trial_entropy(dd, eps, fp.x, fp.y + h) - trial_entropy(dd, eps, fp.x, fp.y - h)) /
            (2 * h);
        CHECK(std::abs(px) < 1e-8);
        CHECK(std::abs(py) < 1e-8);
    }
}

TEST_CASE("map thresholds of the named ensembles") {
    MapThreshold m36 = map_threshold(reg36());
    CHECK(m36.epsilon == doctest::Approx(0.4881508841915644).epsilon(1e-9));
    CHECK(m36.tight);
    MapThreshold m24 = map_threshold(reg24());
    CHECK(m24.epsilon == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(m24.tight);
    MapThreshold mdj = map_threshold(doublejump());
    CHECK(mdj.epsilon == doctest::Approx(0.4913).epsilon(1e-3));
    CHECK(mdj.x_star == doctest::Approx(0.1434).epsilon(1e-2));
    // stability pins the MAP threshold for the stco ensemble
    MapThreshold msc = map_threshold(stco());
    CHECK(msc.epsilon == doctest::Approx(1.0 / 2.4).epsilon(1e-4));
    CHECK(msc.tight);
}

TEST_CASE("threshold relation chain on random ensembles") {
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        DDPair dd = random_pair(rng);
        double bp = bp_threshold(dd);
        MapThreshold mt = map_threshold(dd);
        CHECK(mt.epsilon >= bp - 1e-9);
        CHECK(mt.epsilon <= std::min(shannon_threshold(dd), stability_threshold(dd)) + 1e-9);
        CHECK(first_upper_bound(dd) >= bp - 1e-9);
    }
}

TEST_CASE("area identities") {
    Rng rng(23);
    std::vector<DDPair> pairs = {reg36(), reg24(), doublejump(), stco()};
    for (int t = 0; t < 8; ++t) pairs.push_back(random_pair(rng));
    for (const DDPair& dd : pairs) {
        EbpArea ea = ebp_area(dd);
        CHECK(ea.closed_form == doctest::Approx(dd.design_rate()).epsilon(1e-10));
        CHECK(ea.numeric == doctest::Approx(dd.design_rate()).epsilon(1e-8));
        BpArea ba = bp_area(dd);
        double dsum = 0.0;
        for (double d : ba.deficits) {
            CHECK(d >= -1e-10);
            dsum += d;
        }
        CHECK(ba.area - dd.design_rate() == doctest::Approx(dsum / dd.int_lambda()).epsilon(1e-8));
        // quadrature cross-check of the branch-wise closed form
        BranchPartition part = compute_partition(dd);
        double quad = 0.0;
        for (const Interval& iv : part.intervals) {
            int steps = 2000;
            double prev_e = epsilon_of_x(dd, std::max(iv.x_low, 0.0));
            double prev_h = dd.lambda_node()(dd.y_at(std::max(iv.x_low, 0.0)));
            for (int i = 1; i <= steps; ++i) {
                double x = iv.x_low + (iv.x_high - iv.x_low) * i / steps;
                double e = epsilon_of_x(dd, x);
                double h = dd.lambda_node()(dd.y_at(x));
                quad += 0.5 * (h + prev_h) * (e - prev_e);
                prev_e = e;
                prev_h = h;
            }
        }
        CHECK(ba.area == doctest::Approx(quad).epsilon(1e-5));
    }
}

TEST_CASE("first upper bound examples") {
    CHECK(first_upper_bound(reg36()) == doctest::Approx(0.48815).epsilon(1e-4));
    CHECK(first_upper_bound(reg24()) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    DDPair row4 = DDPair::from_degree_maps({{3, 0.771429}, {8, 0.228571}}, {{5, 1.0}});
    CHECK(first_upper_bound(row4) == doctest::Approx(0.6979).epsilon(1e-3));
    // single-jump ensembles: the first bound and the Maxwell threshold coincide
    for (const DDPair& dd : {reg36(), reg24()})
        CHECK(first_upper_bound(dd) == doctest::Approx(map_threshold(dd).epsilon).epsilon(1e-8));
}

TEST_CASE("map exit curve") {
    SUBCASE("single jump equals bp exit above threshold") {
        DDPair dd = reg36();
        MapCurve mc = map_exit_curve(dd, 400);
        REQUIRE(mc.jumps.size() == 1);
        CHECK(mc.jumps[0].eps == doctest::Approx(0.48815).epsilon(1e-4));
        CHECK_FALSE(mc.jumps[0].conjectural);
        for (const ExitSample& s : mc.curve.samples) {
            if (s.epsilon > 0.49 && s.epsilon <= 1.0)
                CHECK(s.h == doctest::Approx(bp_exit(dd, s.epsilon)).epsilon(1e-6));
        }
    }
    SUBCASE("double jump balance points") {
        MapCurve mc = map_exit_curve(doublejump(), 400);
        REQUIRE(mc.jumps.size() == 2);
        CHECK(mc.jumps[0].eps == doctest::Approx(0.4913).epsilon(1e-3));
        CHECK(mc.jumps[1].eps == doctest::Approx(0.5186).epsilon(1e-3));
        CHECK(mc.jumps[1].x_minus == doctest::Approx(0.2378).epsilon(1e-2));
        CHECK(mc.jumps[1].x_plus == doctest::Approx(0.4121).epsilon(1e-2));
        CHECK(mc.jumps[1].conjectural);
    }
    SUBCASE("hidden-branch threshold (J_MAP > J_BP)") {
        DDPair bl = DDPair::from_degree_maps({{2, 0.15}, {3, 0.15}, {51, 0.7}}, {{16, 1.0}});
        CHECK(compute_partition(bl).J() == 1);
        MapCurve mc = map_exit_curve(bl, 400);
        REQUIRE(mc.jumps.size() == 2);
        CHECK(mc.jumps[1].eps == doctest::Approx(0.4855).epsilon(1e-3));
        CHECK(mc.jumps[1].x_minus == doctest::Approx(0.1096).epsilon(1e-2));
    }
    SUBCASE("area under the map curve is the design rate; below the bp curve") {
        Rng rng(31);
        std::vector<DDPair> pairs = {reg36(), doublejump()};
        for (int t = 0; t < 4; ++t) pairs.push_back(random_pair(rng));
        for (const DDPair& dd : pairs) {
            MapCurve mc = map_exit_curve(dd, 800);
            double area = map_curve_area(dd, mc);
            CHECK(area == doctest::Approx(dd.design_rate()).epsilon(1e-6));
            for (int i = 0; i <= 200; ++i) {
                double eps = i / 200.0;
                double h_bp = bp_exit(dd, eps);
                double h_map = 0.0;
                for (const auto& s : mc.curve.samples)
                    if (s.epsilon <= eps) h_map = std::max(h_map, s.h);
                CHECK(h_map <= h_bp + 1e-6);
            }
        }
    }
}

TEST_CASE("maxwell trajectory") {
    DDPair dd = reg36();
    SUBCASE("below threshold is the trivial point") {
        auto tr = maxwell_trajectory(dd, 0.40, 200);
        REQUIRE(tr.size() == 1);
        CHECK(tr[0].determined == 1.0);
        CHECK(tr[0].entropy == 0.0);
    }
    SUBCASE("guess count and endpoints at eps 0.46") {
        auto tr = maxwell_trajectory(dd, 0.46, 500);
        CHECK(tr.front().determined == doctest::Approx(0.6561).epsilon(1e-3));
        CHECK(tr.front().entropy == 0.0);
        double peak = 0.0;
        for (const auto& p : tr) peak = std::max(peak, p.entropy);
        CHECK(peak == doctest::Approx(0.0201509).epsilon(1e-4));
        CHECK(tr.back().entropy == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(tr.back().determined == 1.0);
    }
    SUBCASE("final entropy matches conditional entropy above the map threshold") {
        for (double eps : {0.50, 0.52, 0.60}) {
            auto tr = maxwell_trajectory(dd, eps, 500);
            DEFixedPoint fp = de_fixed_point(dd, eps);
            double expect = std::max(0.0, trial_entropy(dd, eps, fp.x, fp.y));
            CHECK(tr.back().entropy == doctest::Approx(expect).epsilon(1e-6));
        }
    }
    SUBCASE("entropy zero at the end between bp and map thresholds") {
        for (double eps : {0.44, 0.46, 0.48}) {
            auto tr = maxwell_trajectory(dd, eps, 500);
            CHECK(tr.back().entropy == doctest::Approx(0.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("gldpc bounds") {
    Poly y74({0, 0, 3, 4, -15, 12, -3});
    GldpcBounds b = gldpc_map_bound(Poly::monomial(1), y74);
    CHECK(b.eps_bp == doctest::Approx(0.75645).epsilon(1e-4));
    CHECK(b.eps_bar_map == doctest::Approx(0.85616).epsilon(1e-4));
    // LDPC check curve in generalized form reproduces the plain machinery
    DDPair r36 = reg36();
    Poly y36 = Poly::constant(1.0) - Poly::monomial(5).compose(Poly::affine(1.0, -1.0));
    GldpcBounds same = gldpc_map_bound(Poly::monomial(2), y36);
    CHECK(same.eps_bp == doctest::Approx(bp_threshold(r36)).epsilon(1e-9));
    CHECK(same.eps_bar_map == doctest::Approx(first_upper_bound(r36)).epsilon(1e-9));
}

TEST_CASE("component gap areas") {
    GapAreas g24 = component_gap_areas(reg24());
    CHECK(g24.total_gap == doctest::Approx(1.0 / 6.0).epsilon(1e-7));
    CHECK(g24.map_bp_gap == doctest::Approx(0.0).epsilon(1e-10));
    DDPair r36 = reg36();
    GapAreas g36 = component_gap_areas(r36);
    CHECK(g36.total_gap ==
          doctest::Approx(shannon_threshold(r36) - bp_threshold(r36)).epsilon(1e-6));
    CHECK(g36.map_bp_gap > 0.0);
    DDPair r45 = DDPair::from_edge(Poly::monomial(3), Poly::monomial(4));
    GapAreas g45 = component_gap_areas(r45);
    CHECK(g45.total_gap ==
          doctest::Approx(shannon_threshold(r45) - bp_threshold(r45)).epsilon(1e-6));
}

TEST_CASE("regular sequence facts at rate one half") {
    double prev_bp = 1e9, prev_bar = 0.0;
    for (int l : {3, 4, 6, 12, 20}) {
        DDPair dd = DDPair::from_edge(Poly::monomial(l - 1), Poly::monomial(2 * l - 1));
        double bp = bp_threshold(dd);
        double bar = first_upper_bound(dd);
        CHECK(bp < prev_bp);
        CHECK(bar > prev_bar);
        prev_bp = bp;
        prev_bar = bar;
    }
    CHECK(prev_bar > 0.49);
}
