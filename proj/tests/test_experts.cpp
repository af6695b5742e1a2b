#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "piopt/experts.hpp"

using namespace piopt;

namespace {
OnlinePolicy make_ftl(int k) {
    return [k](int t, const std::vector<std::vector<int>>& h) {
        return ftl_policy(t, h, k);
    };
}
}  // namespace

TEST_CASE("ftl policy") {
    auto p1 = ftl_policy(1, {}, 3);
    REQUIRE(p1.size() == 3);
    for (double x : p1) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    auto p2 = ftl_policy(2, {{1, 0}});
    CHECK(p2[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p2[1] == doctest::Approx(0.0).epsilon(1e-15));
    auto p3 = ftl_policy(3, {{1, 0}, {0, 1}});
    CHECK(p3[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p3[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(ftl_policy(2, {}), domain_error);
}

TEST_CASE("rwm policy") {
    auto pol = rwm_policy(std::log(2.0));
    auto p = pol(2, {{1, 0}});
    CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    auto tiny = rwm_policy(1e-12)(2, {{1, 0}});
    CHECK(tiny[0] == doctest::Approx(0.5).epsilon(1e-9));
    auto sharp = rwm_policy(50.0)(2, {{1, 0}});
    CHECK(sharp[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(rwm_policy(0.0), domain_error);
}

TEST_CASE("run_policy and bih on the alternating instance") {
    RewardMatrix m42 = alternating_instance(4, 2);
    CHECK(run_policy(make_ftl(2), m42) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bih(m42) == 2);
    RewardMatrix m43 = alternating_instance(4, 3);
    CHECK(run_policy(make_ftl(3), m43) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    RewardMatrix big = alternating_instance(100, 4);
    CHECK(run_policy(make_ftl(4), big) == doctest::Approx(12.5).epsilon(1e-12));
    CHECK(bih(big) - run_policy(make_ftl(4), big) ==
          doctest::Approx(37.5).epsilon(1e-12));
    CHECK_THROWS_AS(alternating_instance(3, 2), domain_error);
    CHECK_THROWS_AS(alternating_instance(4, 1), domain_error);
    // all-ones matrix: every policy earns n
    RewardMatrix ones{3, 2, {{1, 1}, {1, 1}, {1, 1}}};
    CHECK(run_policy(make_ftl(2), ones) == doctest::Approx(3.0).epsilon(1e-15));
    RewardMatrix single{3, 1, {{1}, {0}, {1}}};
    CHECK(run_policy(make_ftl(1), single) ==
          doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("alternating construction") {
    RewardMatrix m = alternating_instance(2, 2);
    REQUIRE(m.rewards.size() == 2);
    CHECK(m.rewards[0] == std::vector<int>{1, 0});
    CHECK(m.rewards[1] == std::vector<int>{0, 1});
}

TEST_CASE("expected performance") {
    CHECK(expected_performance(make_ftl(2), {{1.0, 0.0}}, 3) ==
          doctest::Approx(2.5).epsilon(1e-12));
    CHECK(expected_performance(make_ftl(1), {{0.7}}, 5) ==
          doctest::Approx(3.5).epsilon(1e-12));
    CHECK_THROWS_AS(expected_performance(make_ftl(2), {{0.5, 0.5}}, 20),
                    size_error);
    // MC mode agrees with exact on a small instance
    McOptions mc;
    mc.monte_carlo = true;
    mc.samples = 200000;
    mc.seed = 5;
    double exact = expected_performance(make_ftl(2), {{0.6, 0.4}}, 3);
    double approx = expected_performance(make_ftl(2), {{0.6, 0.4}}, 3, mc);
    CHECK(std::fabs(exact - approx) < 0.01);
}

TEST_CASE("posterior leader check") {
    // pool (0.5, 0.25): one-step lead makes the leading expert strictly
    // favored, so the argmax sets agree
    CHECK(posterior_leader_check({{0.5, 0.25}}, {{1, 0}}));
    CHECK(posterior_leader_check({{0.5, 0.25}}, {{1, 1}}));
    CHECK(posterior_leader_check({{0.5, 0.25}}, {}));
    CHECK(posterior_leader_check({{0.9, 0.3, 0.2}}, {{1, 0, 0}, {1, 1, 0}}));
}

TEST_CASE("ftl round payoffs") {
    auto seq = ftl_round_payoffs({{0.9, 0.1}}, 3);
    REQUIRE(seq.size() == 3);
    CHECK(seq[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(seq[1] > seq[0]);
    CHECK(seq[2] > seq[1]);
    auto flat = ftl_round_payoffs({{0.5, 0.5}}, 4);
    for (double v : flat) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    auto det = ftl_round_payoffs({{1.0, 0.0}}, 3);
    CHECK(det[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(det[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(det[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("round payoffs match full-history enumeration") {
    // the binomial-count recursion against direct expected_performance
    BernoulliMeans f{{0.8, 0.2}};
    auto seq = ftl_round_payoffs(f, 4);
    double total = 0.0;
    for (double v : seq) total += v;
    CHECK(total ==
          doctest::Approx(expected_performance(make_ftl(2), f, 4)).epsilon(1e-10));
}

TEST_CASE("learning gap chain") {
    LearningGapReport rep = gap_learning_check({{0.8, 0.2}}, 4);
    CHECK(rep.strict);
    CHECK(rep.ftl_value < rep.scaled_bench);
    CHECK(rep.scaled_bench <= rep.opt + 1e-12);
    CHECK(rep.opt == doctest::Approx(3.2).epsilon(1e-12));
    // two-round hand computation for means (0.6, 0.4)
    LearningGapReport two = gap_learning_check({{0.6, 0.4}}, 2);
    auto seq = ftl_round_payoffs({{0.6, 0.4}}, 2);
    CHECK(two.ftl_value == doctest::Approx(0.5 + seq[1]).epsilon(1e-12));
    CHECK(two.scaled_bench == doctest::Approx(2.0 * seq[1]).epsilon(1e-12));
    CHECK(two.strict);
    CHECK_THROWS_AS(gap_learning_check({{0.5, 0.5}}, 4), constraint_error);
}
