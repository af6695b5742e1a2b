#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "piopt/errors.hpp"

namespace piopt {

struct RewardMatrix {
    int n = 0;  // rounds
    int k = 0;  // experts
    std::vector<std::vector<int>> rewards;  // n rows of k binary entries
};

struct BernoulliMeans {
    std::vector<double> f;
    bool non_degenerate() const;
};

// A policy maps (round t, the t-1 history rows) to a distribution over experts.
using OnlinePolicy = std::function<std::vector<double>(
    int t, const std::vector<std::vector<int>>& history)>;

// k is only consulted at t = 1, when the history is empty.
std::vector<double> ftl_policy(int t,
                               const std::vector<std::vector<int>>& history,
                               int k = 0);
OnlinePolicy rwm_policy(double eta);

double run_policy(const OnlinePolicy& policy, const RewardMatrix& m);
int bih(const RewardMatrix& m);
RewardMatrix alternating_instance(int n, int k);

struct McOptions {
    bool monte_carlo = false;
    std::uint64_t seed = 1;
    std::uint64_t samples = 1u << 16;
};

// Exact enumeration over all 2^{nk} reward matrices when within the cap,
// otherwise a seeded MC estimate if opts.monte_carlo is set.
double expected_performance(const OnlinePolicy& policy,
                            const BernoulliMeans& means, int n,
                            const McOptions& opts = {});

bool posterior_leader_check(const BernoulliMeans& pool,
                            const std::vector<std::vector<int>>& history);

std::vector<double> ftl_round_payoffs(const BernoulliMeans& means, int n);

struct LearningGapReport {
    double ftl_value;      // FTL(F) = sum of per-round expected payoffs
    double scaled_bench;   // n * E[round-n payoff]
    double opt;            // n * max f
    bool strict;           // ftl_value < scaled_bench <= opt
    std::string to_json() const;
};

LearningGapReport gap_learning_check(const BernoulliMeans& means, int n);

}  // namespace piopt
