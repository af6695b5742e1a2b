#pragma once

#include <string>
#include <vector>

#include "piopt/errors.hpp"

namespace piopt {

struct PolylogSum {
    double q;
    long long truncation;  // last index included; 0 for analytic closed forms
    double value;
    double remainder;  // geometric tail bound: |value - true sum| <= remainder
};

// S(q) = sum_{k>=2} (1-q)^{k-1} / k^2; q = 0 handled analytically.
PolylogSum series_S(double q);
// T(q) = sum_{k>=2} (1-q)^{k-2} / k^2 = S(q) / (1-q) for q < 1, T(1) = 1/4.
PolylogSum series_T(double q);

double quad_pricing_apx(double beta, double q);

struct MaxminResult {
    double beta;   // argmax of the inner minimum
    double alpha;  // the max-min value
    double q;      // inner argmin at the reported beta
};
MaxminResult quad_pricing_maxmin();

double indifference_alpha_for_q(double q);

double anon_truncation_density(double t);
double anon_truncation_antiderivative(double t);

struct AnonParams {
    double gamma;
    double beta;
    double alpha;
};
AnonParams anon_truncation_params();

struct IndifferenceReport {
    bool ok;
    double worst_violation;
    double worst_tau;
    std::string to_json() const;
};
IndifferenceReport verify_indifference(const std::vector<double>& tau_grid,
                                       double tol = 1e-8);

}  // namespace piopt
