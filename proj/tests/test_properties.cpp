#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "properties.hpp"

TEST_CASE("curve round trips and quadrilateral equivalence") {
    CHECK(props::check_curve_roundtrips() == 0);
}

TEST_CASE("closed form vs quadrature on the (r, qbar) grid") {
    CHECK(props::max_formula_quadrature_gap() <= 1e-8);
}

TEST_CASE("closed form vs Monte Carlo on the (r, qbar) grid") {
    CHECK(props::check_formula_vs_mc(200000) == 0);
}

TEST_CASE("SPA earns exactly 1 on every triangle") {
    CHECK(props::check_spa_unit_revenue() == 0);
}

TEST_CASE("continuity claims in r and qbar") {
    CHECK(props::check_continuity_claims() == 0);
}

TEST_CASE("mixture revenue is monotone in qprime for alpha >= 2/3") {
    CHECK(props::check_monotone_in_qprime(50, 1000) == 0);
}

TEST_CASE("truncation never lowers a ratio already >= 1/alpha") {
    CHECK(props::check_truncation_ratio(1000) == 0);
}

TEST_CASE("Monte Carlo scale equivariance") {
    CHECK(props::check_mc_scale_equivariance());
}

TEST_CASE("certification soundness at random interior points") {
    piopt::CrossingResult cr = piopt::find_crossing();
    CHECK(props::check_certification_soundness(cr) == 0);
}

TEST_CASE("benchmark normalization and program ordering") {
    piopt::EquilibriumSolution sol = piopt::solve_equilibrium();
    CHECK(props::check_bstar_normalized(sol));
}

TEST_CASE("best-in-hindsight benchmark is normalized (exhaustive)") {
    CHECK(props::check_bih_normalized_exhaustive(3, 2) == 0);
    CHECK(props::check_bih_normalized_exhaustive(2, 3) == 0);
}

TEST_CASE("FTL alternating regret is exactly linear") {
    CHECK(props::check_ftl_alternating_regret() == 0);
}

TEST_CASE("RWM regret rate decreases on alternating instances") {
    CHECK(props::check_rwm_sublinear());
}

TEST_CASE("FTL expected payoff is permutation symmetric") {
    CHECK(props::check_ftl_permutation_symmetry() == 0);
}

TEST_CASE("posterior-leader equivalence holds exhaustively") {
    CHECK(props::check_posterior_exhaustive() == 0);
}

TEST_CASE("series remainders are certified") {
    CHECK(props::check_series_remainders());
}

TEST_CASE("quad pricing at beta = 1 matches the SPA ratio") {
    CHECK(props::check_quad_pricing_vs_spa() == 0);
}

TEST_CASE("indifference identity on the log grid") {
    CHECK(props::check_indifference_log_grid());
}
