#pragma once

#include <string>
#include <vector>

#include "piopt/markup.hpp"

namespace piopt {

// A bound valid for every parameter in the stated continuum interval,
// obtained by lifting grid evaluations through the markup-revenue
// continuity inequalities (in r: M_{r1} >= (r1/r2) M_{r2}; in qbar:
// ((1-q2)/(1-q1)) M(q2) <= M(q1) <= 2(q2-q1) + M(q2)) plus numeric slack.
struct CertifiedBound {
    double value;
    enum class Kind { lower, upper } kind;
    double grid_eps;
    double slack;
    double witness_q;
    double witness_r;
    std::string name;
    std::string note;
    std::string to_json() const;
};

struct SolverConfig {
    double grid_eps = 1e-6;
    double r_max = 11.0;
    double r_tail_hi = 200.0;
    double alpha_tol = 1e-6;
    double slack = 1e-12;
};

struct CrossingResult {
    double lo;
    double hi;
    CertifiedBound left;   // min of M_rhat over qbar in [0, lo]
    CertifiedBound right;  // max of sup_r M_r over qbar in [hi, 1)
    double rhat;
};

struct ApxMarkupOpt {
    double ratio;        // (2 - qbar) / best grid revenue
    double r_star;       // grid argmax markup
    bool boundary;       // true if the supremum sits at the r_max boundary
    double ratio_lower;  // certified over the whole continuum r in (1, inf)
};

struct EquilibriumSolution {
    double qbar_star;
    double r_star;
    double alpha_star;
    double beta;
    std::vector<CertifiedBound> certificates;
    std::string to_json() const;
};

double apx_spa(double qbar);

ApxMarkupOpt apx_markup_opt(double qbar, double r_max = 11.0,
                            double r_grid_eps = 1e-9);

// Certified lower bound for min of M_r(Tr_q) over the continuum [q_lo, q_hi];
// adaptive cells must each certify >= target or a certification_error names
// the failing cell.
CertifiedBound certify_markup_min_in_q(double r, double q_lo, double q_hi,
                                       double grid_eps, double target,
                                       double slack = 1e-12);

// Certified upper bound for sup over qbar in [q_lo, q_hi] and r in (1, r_hi]
// of M_r(Tr_qbar). The interval (1, r_start] is covered by the analytic
// bound M_r <= r (1 - qbar).
CertifiedBound certify_markup_max_in_qr(double q_lo, double q_hi,
                                        double grid_eps, double target,
                                        double r_hi = 200.0,
                                        double slack = 1e-12);

CrossingResult find_crossing(const SolverConfig& cfg = SolverConfig{});

double adversary_best_response(double alpha, double r, double grid_eps = 1e-9);

double solve_alpha(double r_star, double qbar_star, double tol);

EquilibriumSolution solve_equilibrium(const SolverConfig& cfg = SolverConfig{});

// Corrected explicit formula for the second derivative of 1/APX(alpha,r,qbar)
// in qbar (positive on the certification box).
double second_derivative_inv_apx(double alpha, double r, double qbar);

// Confirms M_r(Tr_qbar) < 1 for qbar >= qbar_min, r in [r_lo, r_hi] on a
// certified grid; beyond r_hi the analytic argument is a recorded assumption.
bool r_tail_check(double qbar_min, double r_lo, double r_hi);

}  // namespace piopt
