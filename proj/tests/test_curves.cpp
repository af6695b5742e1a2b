#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "piopt/curve.hpp"
#include "piopt/markup.hpp"

using namespace piopt;

TEST_CASE("triangle construction and evaluation") {
    Curve c = triangle_curve(0.5);
    CHECK(c.kind() == CurveKind::distribution);
    CHECK(c.normalized());
    CHECK(c.revenue_at(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.revenue_at(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.revenue_at(0.25) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.revenue_at(0.75) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.value_at(0.5) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.monopoly_quantile() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.area() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(triangle_curve(-0.1), domain_error);
    CHECK_THROWS_AS(c.value_at(0.0), domain_error);
}

TEST_CASE("point mass triangle") {
    Curve c = triangle_curve(1.0);
    CHECK(c.vertices().size() == 2);
    CHECK(c.sample_value(0.3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.sample_value(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quantile_at_price on the triangle") {
    Curve c = triangle_curve(0.5);
    CHECK(c.quantile_at_price(2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.price_posting_revenue(2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.price_posting_revenue(1.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(c.quantile_at_price(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.quantile_at_price(1e9) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(c.quantile_at_price(-1.0), domain_error);
}

TEST_CASE("quadrilateral constraints") {
    // qbar = 0.25, r = 2: qprime in [0.4, 0.5]
    CHECK_THROWS_AS(quadrilateral_curve({0.25, 0.6, 2.0}), constraint_error);
    CHECK_THROWS_AS(quadrilateral_curve({0.25, 0.3, 2.0}), constraint_error);
    Curve q = quadrilateral_curve({0.25, 0.45, 2.0});
    CHECK(q.vertices().size() == 4);
    CHECK(q.revenue_at(0.45) == doctest::Approx(0.9).epsilon(1e-12));
    // at the lower bound the quadrilateral collapses to the triangle
    double lo = 0.25 * 2.0 / (0.25 * 2.0 + 0.75);
    Curve tri_like = quadrilateral_curve({0.25, lo, 2.0});
    CHECK(tri_like.vertices().size() == 3);
    // SPA revenue closed form on a quadrilateral
    CHECK(spa_revenue_quad(0.25, 0.5, 2.0) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(spa_revenue(quadrilateral_curve({0.25, 0.5, 2.0})) ==
          doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("fbar envelope") {
    Curve e = fbar_curve({0.09, 0.098, 0.01, 0.01});
    CHECK(e.kind() == CurveKind::envelope);
    CHECK(e.revenue_at(0.0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(e.revenue_at(0.094) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(e.value_at(0.5), domain_error);
    CHECK_THROWS_AS(fbar_curve({0.2, 0.1, 0.01, 0.01}), constraint_error);
}

TEST_CASE("truncate") {
    Curve c = Curve::distribution({{0.0, 0.0}, {0.2, 0.9}, {0.4, 1.0}, {1.0, 0.0}});
    Curve t = c.truncate();
    REQUIRE(t.vertices().size() == 3);
    CHECK(t.vertices()[1].q == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(t.vertices()[1].R == doctest::Approx(1.0).epsilon(1e-12));
    // idempotent and fixed point on already-truncated curves
    Curve tt = t.truncate();
    CHECK(tt.vertices().size() == t.vertices().size());
    Curve tri = triangle_curve(0.3);
    CHECK(tri.truncate().vertices().size() == 3);
    CHECK(c.triangulation().qbar == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("concavity is enforced") {
    CHECK_THROWS_AS(
        Curve::distribution({{0.0, 0.0}, {0.3, 0.2}, {0.6, 0.9}, {1.0, 0.0}}),
        constraint_error);
    CHECK_THROWS_AS(Curve::distribution({{0.0, 0.5}, {1.0, 0.0}}),
                    constraint_error);
}

TEST_CASE("triangle_value scalar map") {
    CHECK(triangle_value(0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(triangle_value(0.5, 0.25) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(triangle_value(0.5, 0.75) ==
          doctest::Approx((1.0 - 0.75) / (0.5 * 0.75)).epsilon(1e-12));
    CHECK(triangle_value(1.0, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("optimal revenue on curves") {
    CHECK(opt_revenue_curve(triangle_curve(0.3)) ==
          doctest::Approx(1.7).epsilon(1e-12));
    CHECK(opt_revenue_curve(triangle_curve(1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // quadrilaterals are truncated, so OPT is still 2 - qbar
    CHECK(opt_revenue_curve(quadrilateral_curve({0.25, 0.45, 2.0})) ==
          doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("sampling inverts the value map") {
    Curve c = triangle_curve(0.4);
    for (int i = 1; i <= 20; ++i) {
        double u = i / 20.0;
        CHECK(c.sample_value(u) == doctest::Approx(c.value_at(u)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(c.sample_value(0.0), domain_error);
}
