#pragma once

#include <optional>
#include <string>
#include <vector>

#include "piopt/solver.hpp"

namespace piopt {

// B(F) = scale * [(1+delta) base(F) - delta markdown(F)], delta = 0 for plain
// benchmarks (then markdown is unused).
struct BenchmarkSpec {
    double scale;
    Mechanism base;
    double delta = 0.0;
    std::optional<Mechanism> markdown;
};

struct LedgerEntry {
    std::string name;
    double bound;
    double computed;
    double margin;
    bool pass;
    std::string note;
};

struct GapReport {
    double beta;        // certified lower bound on the true program value
    double beta_prime;  // relaxed-program witness value
    double margin;      // beta - beta_prime
    bool established;
    std::vector<LedgerEntry> ledger;
    std::string to_json() const;
};

double benchmark_value(const BenchmarkSpec& spec, const Curve& f);
double benchmark_value(const BenchmarkSpec& spec, double qbar);

// Max over the triangle grid of benchmark_value / opt_revenue_truncated: the
// relaxed-program witness for this benchmark.
double relaxed_program_value(const BenchmarkSpec& spec,
                             const std::vector<double>& qbar_grid);

// a M_{r1}(F) + b M_{r3}(F) - c M_{r2}(F) <= OPT(F) whenever a+b-c <= 1,
// a >= c, b >= c; returning false is a test failure.
bool affine_bound_check(double a, double b, double c, double r1, double r2,
                        double r3, const Curve& f);

// Certified extremes of (2-q)/rev(mech, Tr_q) over a quantile interval,
// lifted cell-by-cell through the in-q continuity bounds.
CertifiedBound certify_mech_apx_max(const Mechanism& m, double q_lo,
                                    double q_hi, double target,
                                    double floor_step, double slack = 1e-12);
CertifiedBound certify_mech_apx_min(const Mechanism& m, double q_lo,
                                    double q_hi, double target,
                                    double floor_step, double slack = 1e-12);

GapReport verify_gap_triangle(double delta,
                              const EquilibriumSolution* sol = nullptr);

// Four-piece upper bound on M_r of any distribution stochastically dominated
// by the F-bar envelope (two closed terms plus two quadratures).
double markup_rev_upper_bound_dominated(double r, const FbarParams& p);

GapReport verify_gap_regular(const EquilibriumSolution* sol = nullptr);

}  // namespace piopt
