#include "doctest.h"

#include "inls/errors.hpp"
#include "inls/grid.hpp"
#include "inls/potential.hpp"

#include <cmath>
#include <numbers>

using namespace inls;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("eval closed forms") {
    CHECK(Potential::softcore(1.0).eval(0.0) == 1.0);
    CHECK(Potential::zero().eval(17.3) == 0.0);
    CHECK(Potential::gaussian_well(1.0).eval(1.0) ==
          doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(Potential::softcore(-1.0), ValidationError);
}

TEST_CASE("x_dot_grad_v closed forms") {
    CHECK(Potential::softcore(1.0).x_dot_grad_v(1.0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(Potential::softcore(2.0).x_dot_grad_v(0.0) == 0.0);
    CHECK(Potential::gaussian_well(3.0).x_dot_grad_v(0.0) == 0.0);
    CHECK(Potential::gaussian_repulsive(2.0).x_dot_grad_v(1.0) ==
          doctest::Approx(-4.0 * std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("x_dot_grad_v agrees with centered differences") {
    const Potential pots[] = {Potential::zero(), Potential::gaussian_repulsive(1.3),
                              Potential::gaussian_well(0.7), Potential::softcore(2.1)};
    const double h = 1e-5;
    for (const auto& V : pots) {
        for (double r : {0.1, 0.5, 1.0, 2.0, 5.0, 9.0}) {
            const double fd = r * (V.eval(r + h) - V.eval(r - h)) / (2.0 * h);
            CHECK(V.x_dot_grad_v(r) == doctest::Approx(fd).epsilon(1e-8));
        }
    }
}

TEST_CASE("kato norm: Gaussian families give 2 pi c") {
    for (double c : {0.5, 1.0, 1.9}) {
        const KatoResult k = kato_norm(Potential::gaussian_well(c));
        REQUIRE_FALSE(k.divergent);
        CHECK(k.value == doctest::Approx(2.0 * kPi * c).epsilon(1e-8));
        const KatoResult kr = kato_norm(Potential::gaussian_repulsive(c));
        CHECK(kr.value == doctest::Approx(2.0 * kPi * c).epsilon(1e-8));
    }
}

TEST_CASE("kato norm: zero and softcore") {
    const KatoResult kz = kato_norm(Potential::zero());
    CHECK_FALSE(kz.divergent);
    CHECK(kz.value == 0.0);

    CHECK(kato_norm(Potential::softcore(1.0)).divergent);
}

TEST_CASE("kato norm of the negative part") {
    CHECK(kato_norm_negative_part(Potential::gaussian_repulsive(2.0)).value == 0.0);
    CHECK(kato_norm_negative_part(Potential::softcore(2.0)).value == 0.0);
    const KatoResult k = kato_norm_negative_part(Potential::gaussian_well(1.0));
    CHECK(k.value == doctest::Approx(2.0 * kPi).epsilon(1e-8));
}

TEST_CASE("kato norm scales linearly in the amplitude") {
    const double k1 = kato_norm(Potential::gaussian_well(1.0)).value;
    const double k3 = kato_norm(Potential::gaussian_well(3.0)).value;
    CHECK(k3 == doctest::Approx(3.0 * k1).epsilon(1e-12));
}

TEST_CASE("hypothesis checks per family") {
    auto grid = make_grid(32.0, 1024);

    SUBCASE("softcore passes T1.4") {
        const auto rep = hypothesis_check(Potential::softcore(1.0), TheoremId::t1_4, *grid);
        CHECK(rep.overall);
        CHECK(rep.find("2V_plus_xdgv_nonneg")->status == CheckStatus::pass);
        CHECK(rep.find("xdgv_nonpositive")->status == CheckStatus::pass);
    }
    SUBCASE("gaussian_repulsive fails T1.4 via 2V + x.grad V") {
        const auto rep = hypothesis_check(Potential::gaussian_repulsive(1.0), TheoremId::t1_4, *grid);
        CHECK_FALSE(rep.overall);
        CHECK(rep.find("2V_plus_xdgv_nonneg")->status == CheckStatus::fail);
    }
    SUBCASE("gaussian_well passes T1.1 below the 4 pi bar") {
        const auto rep = hypothesis_check(Potential::gaussian_well(1.0), TheoremId::t1_1, *grid);
        CHECK(rep.overall);
        CHECK(rep.find("kato_Vminus_lt_4pi")->evidence == doctest::Approx(2.0 * kPi).epsilon(1e-8));
    }
    SUBCASE("gaussian_well(2.5) fails T1.1: negative part too large") {
        const auto rep = hypothesis_check(Potential::gaussian_well(2.5), TheoremId::t1_1, *grid);
        CHECK_FALSE(rep.overall);
    }
    SUBCASE("softcore passes T1.1 only through the L^delta route") {
        const auto rep = hypothesis_check(Potential::softcore(1.0), TheoremId::t1_1, *grid);
        CHECK(rep.overall);
        // not in L^{3/2}: the Kato route is not the one that carries the verdict
        CHECK(rep.find("V_in_L3/2")->status == CheckStatus::inapplicable);
        CHECK(rep.find("V_in_Ldelta_gt_3/2")->status == CheckStatus::pass);
    }
    SUBCASE("softcore fails T1.2: |x||grad V| not in L^{3/2}") {
        const auto rep = hypothesis_check(Potential::softcore(1.0), TheoremId::t1_2, *grid);
        CHECK_FALSE(rep.overall);
        CHECK(rep.find("x_gradV_in_L3/2")->status == CheckStatus::fail);
    }
    SUBCASE("gaussian_well fails T1.2 and T1.4: x.grad V > 0 somewhere") {
        CHECK_FALSE(hypothesis_check(Potential::gaussian_well(0.5), TheoremId::t1_2, *grid).overall);
        CHECK_FALSE(hypothesis_check(Potential::gaussian_well(0.5), TheoremId::t1_4, *grid).overall);
    }
    SUBCASE("the zero potential passes every theorem") {
        for (TheoremId id : {TheoremId::t1_1, TheoremId::t1_2, TheoremId::t1_4})
            CHECK(hypothesis_check(Potential::zero(), id, *grid).overall);
    }
}
