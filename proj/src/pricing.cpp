#include "piopt/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"
#include "piopt/detail/quad.hpp"

namespace piopt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Sums x^{k-1+off} / k^2 from k = 2 with a geometric tail bound.
PolylogSum tail_sum(double q, int off) {
    double x = 1.0 - q;
    PolylogSum out{q, 0, 0.0, 0.0};
    if (x <= 0.0) {
        if (off == -1) {  // T(1): only the k = 2 term survives
            out.value = 0.25;
            return out;
        }
        return out;  // S(1) = 0
    }
    double sum = 0.0;
    long long k = 2;
    for (;; ++k) {
        double term = std::pow(x, static_cast<double>(k - 1 + off)) /
                      (static_cast<double>(k) * k);
        sum += term;
        // tail <= term * x / (1 - x) since term ratios are below x
        double tail = term * x / (1.0 - x);
        if (term < 1e-16 && tail < 1e-15) {
            out.truncation = k;
            out.remainder = tail;
            break;
        }
        if (k > 200000000) throw certification_error("series did not converge");
    }
    out.value = sum;
    return out;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

PolylogSum series_S(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw domain_error("series_S needs q in [0,1]");
    if (q == 0.0) return {0.0, 0, kPi * kPi / 6.0 - 1.0, 0.0};
    return tail_sum(q, 0);
}

PolylogSum series_T(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw domain_error("series_T needs q in [0,1]");
    if (q == 0.0) return {0.0, 0, kPi * kPi / 6.0 - 1.0, 0.0};
    return tail_sum(q, -1);
}

double quad_pricing_apx(double beta, double q) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw domain_error("quad_pricing_apx needs beta in [0,1]");
    if (!(q > 0.0 && q <= 1.0))
        throw domain_error("quad_pricing_apx needs q in (0,1]");
    return (beta + 2.0 * (1.0 - beta) * series_S(q).value) / (2.0 - q);
}

MaxminResult quad_pricing_maxmin() {
    auto inner_argmin = [](double beta) {
        return golden_min([&](double q) { return quad_pricing_apx(beta, q); },
                          1e-9, 1.0, 1e-10);
    };
    auto inner_min = [&](double beta) {
        return quad_pricing_apx(beta, inner_argmin(beta));
    };
    double beta = golden_min([&](double b) { return -inner_min(b); }, 0.5, 1.0,
                             1e-8);
    double q = inner_argmin(beta);
    return {beta, quad_pricing_apx(beta, q), q};
}

double indifference_alpha_for_q(double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw domain_error("indifference_alpha_for_q needs q in [0,1]");
    double t = series_T(q).value;
    return 2.0 * t / (1.0 + 2.0 * t);
}

double anon_truncation_density(double t) {
    if (t < 1.0) throw domain_error("anon_truncation_density needs t >= 1");
    return (3.0 * t + 1.0) / (t * (t + 1.0) * (t + 1.0));
}

double anon_truncation_antiderivative(double t) {
    if (t < 1.0)
        throw domain_error("anon_truncation_antiderivative needs t >= 1");
    return -2.0 / (t + 1.0) + std::log(t / (t + 1.0));
}

AnonParams anon_truncation_params() {
    double gamma = 4.0 / 3.0;
    double x = (3.0 / 4.0) / (1.0 + std::log(2.0));
    double beta = x / (1.0 + x);
    return {gamma, beta, gamma * beta};
}

std::string IndifferenceReport::to_json() const {
    return nlohmann::json{{"ok", ok},
                          {"worst_violation", worst_violation},
                          {"worst_tau", worst_tau}}
        .dump();
}

IndifferenceReport verify_indifference(const std::vector<double>& tau_grid,
                                       double tol) {
    if (tau_grid.empty()) throw domain_error("empty tau grid");
    double gamma = anon_truncation_params().gamma;
    IndifferenceReport rep{true, 0.0, tau_grid.front()};
    for (double tau : tau_grid) {
        if (tau < 1.0) throw domain_error("tau grid must lie in [1, inf)");
        double lhs =
            1.0 + gamma * detail::integrate(
                              [](double t) {
                                  return anon_truncation_density(t) * t /
                                         (t + 1.0);
                              },
                              1.0, tau, 1e-12);
        double rhs = gamma * (2.0 * tau * tau + tau) / ((1.0 + tau) * (1.0 + tau));
        double viol = std::fabs(lhs - rhs);
        if (viol > rep.worst_violation) {
            rep.worst_violation = viol;
            rep.worst_tau = tau;
        }
    }
    rep.ok = rep.worst_violation <= tol;
    return rep;
}

}  // namespace piopt
