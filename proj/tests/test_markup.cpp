#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "piopt/markup.hpp"

using namespace piopt;

namespace {
// frozen closed-form values from the independent high-precision oracle
constexpr double kGrid[][3] = {
    {1.1, 0.0, 1.0317604430485308},    {1.1, 0.05, 0.9737257641838309},
    {1.1, 0.093, 0.9244132745851745},  {1.1, 0.25, 0.7489282513866895},
    {1.1, 0.5, 0.4835740730280953},    {1.1, 0.75, 0.23434024133487674},
    {1.1, 0.95, 0.04573144312608721},  {1.5, 0.0, 1.1344187027020274},
    {1.5, 0.05, 1.0439006984658767},   {1.5, 0.093, 0.9702590637085197},
    {1.5, 0.25, 0.7304201741048385},   {1.5, 0.5, 0.424282636945089},
    {1.5, 0.75, 0.18709026813413487},  {1.5, 0.95, 0.034088214237995344},
    {2.0, 0.0, 1.2274112777602189},    {2.0, 0.05, 1.096441635247964},
    {2.0, 0.093, 0.9949512465210026},  {2.0, 0.25, 0.693313977356077},
    {2.0, 0.5, 0.36521008705241925},   {2.0, 0.75, 0.14921200372192375},
    {2.0, 0.95, 0.025857412538861275}, {2.4469452, 0.0, 1.2905403963134714},
    {2.4469452, 0.05, 1.1241329963373852},
    {2.4469452, 0.093, 1.0002852279784862},
    {2.4469452, 0.25, 0.6571483022391145},
    {2.4469452, 0.5, 0.3238684272046125},
    {2.4469452, 0.75, 0.12627971438812713},
    {2.4469452, 0.95, 0.021266837798736494},
    {3.0, 0.0, 1.3520815669978354},    {3.0, 0.05, 1.1431115027509617},
    {3.0, 0.093, 0.9947381032881851},  {3.0, 0.25, 0.6137056388801094},
    {3.0, 0.5, 0.28360467567550685},   {3.0, 0.75, 0.10607065923627225},
    {3.0, 0.95, 0.017436208350249224}, {5.0, 0.0, 1.4941013047286873},
    {5.0, 0.05, 1.1444409940963953},   {5.0, 0.093, 0.9310546345605415},
    {5.0, 0.25, 0.48642439010487076},  {5.0, 0.5, 0.19480130362584497},
    {5.0, 0.75, 0.06714112171447562},  {5.0, 0.95, 0.010558401830144224},
    {8.0, 0.0, 1.6067129659820945},    {8.0, 0.05, 1.0815343421512964},
    {8.0, 0.093, 0.8163221297906701},  {8.0, 0.25, 0.3662586249097374},
    {8.0, 0.5, 0.13218849493826346},   {8.0, 0.75, 0.04328479617106835},
    {8.0, 0.95, 0.006633405032076062}, {11.0, 0.0, 1.6724630399843585},
    {11.0, 0.05, 1.005261786422619},   {11.0, 0.093, 0.7177546317406257},
    {11.0, 0.25, 0.2926659526425478},  {11.0, 0.5, 0.09996691309572783},
    {11.0, 0.75, 0.031933913225916905},
    {11.0, 0.95, 0.004835740730280958},
};
}  // namespace

TEST_CASE("triangle closed form matches the frozen oracle grid") {
    for (const auto& row : kGrid) {
        CAPTURE(row[0]);
        CAPTURE(row[1]);
        CHECK(markup_revenue_triangle(row[0], row[1]) ==
              doctest::Approx(row[2]).epsilon(1e-12));
    }
}

TEST_CASE("closed form limits and domain") {
    CHECK(markup_revenue_triangle(2.0, 0.0) ==
          doctest::Approx(1.2274112777602189).epsilon(1e-12));
    // r -> 1+ limit is 1 - qbar (discontinuity against the SPA's value 1)
    CHECK(markup_revenue_triangle(1.0 + 1e-9, 0.3) ==
          doctest::Approx(0.6999999999533334).epsilon(1e-12));
    CHECK(markup_revenue_triangle(2.0, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(markup_revenue_triangle(1.0, 0.3), domain_error);
    CHECK_THROWS_AS(markup_revenue_triangle(2.0, -0.1), domain_error);
    CHECK(opt_revenue_truncated(0.3) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK_THROWS_AS(opt_revenue_truncated(1.5), domain_error);
    CHECK(hat_quantile(0.5, 2.0) ==
          doctest::Approx(0.5 / (2.0 - 1.0 + 0.5)).epsilon(1e-12));
}

TEST_CASE("curve evaluation agrees with the triangle closed form") {
    for (const auto& row : kGrid) {
        if (row[1] <= 0.0 || row[1] >= 1.0) continue;
        Curve c = triangle_curve(row[1]);
        CHECK(markup_revenue_curve(row[0], c) ==
              doctest::Approx(row[2]).epsilon(1e-11));
        CHECK(markup_revenue_curve(row[0], c, Integration::quadrature) ==
              doctest::Approx(row[2]).epsilon(1e-9));
    }
}

TEST_CASE("mechanism mixtures") {
    CHECK_THROWS_AS(Mechanism({{0.5, 1.0}, {0.6, 2.0}}), constraint_error);
    CHECK_THROWS_AS(Mechanism({{1.0, 0.9}}), constraint_error);
    Mechanism half = Mechanism({{0.5, 1.0}, {0.5, 2.0}});
    CHECK(stochastic_markup_revenue(half, 0.0) ==
          doctest::Approx(1.1137056388801094).epsilon(1e-12));
    Mechanism spa = Mechanism::spa();
    for (double qb : {0.1, 0.25, 0.5, 0.9})
        CHECK(stochastic_markup_revenue(spa, triangle_curve(qb)) ==
              doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("approximation ratio reports") {
    Mechanism spa = Mechanism::spa();
    RevenueReport rep = approximation_ratio(spa, 0.09310569563591735);
    CHECK(rep.ratio == doctest::Approx(1.9068943043640827).epsilon(1e-9));
    RevenueReport point = approximation_ratio(spa, 1.0);
    CHECK(point.ratio == doctest::Approx(1.0).epsilon(1e-12));
    Mechanism mix = Mechanism::mix(0.8056404981990561, 2.4469453820661915);
    RevenueReport eq = approximation_ratio(mix, 0.09310569563591735);
    CHECK(eq.mechanism_revenue == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Monte Carlo against closed forms") {
    Mechanism m2 = Mechanism::markup(2.0);
    McEstimate est = mc_simulate_triangle(m2, 0.0, 200000, 42);
    CHECK(std::fabs(est.mean - 1.2274112777602189) < 3.0 * est.stderr_);
    McEstimate again = mc_simulate_triangle(m2, 0.0, 200000, 42);
    CHECK(est.mean == again.mean);  // determinism
    Mechanism spa = Mechanism::spa();
    McEstimate s = mc_simulate_triangle(spa, 0.3, 200000, 7);
    CHECK(std::fabs(s.mean - 1.0) < 3.0 * s.stderr_);
    McEstimate c = mc_simulate(spa, triangle_curve(0.3), 200000, 7);
    // the curve and scalar paths share the sampler; rounding order differs
    CHECK(c.mean == doctest::Approx(s.mean).epsilon(1e-12));
}

TEST_CASE("quadrilateral revenue via both integration modes") {
    Curve q = quadrilateral_curve({0.2, 0.35, 2.0});
    for (double r : {1.3, 2.0, 4.0}) {
        double a = markup_revenue_curve(r, q);
        double b = markup_revenue_curve(r, q, Integration::quadrature);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
}
