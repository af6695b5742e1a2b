#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "piopt/curve.hpp"

namespace piopt {

// The triangle closed form is discontinuous at r = 1; r = 1 routes to the
// second-price auction and the formula is only evaluated beyond this gap.
inline constexpr double kRMinGap = 1e-9;

struct MarkupAtom {
    double weight;
    double r;
};

// Finite mixture of r-markup mechanisms; the SPA is the r = 1 atom.
class Mechanism {
  public:
    explicit Mechanism(std::vector<MarkupAtom> atoms);
    static Mechanism spa() { return Mechanism({{1.0, 1.0}}); }
    static Mechanism markup(double r) { return Mechanism({{1.0, r}}); }
    // M_{alpha,r}: SPA with probability alpha, else the r-markup.
    static Mechanism mix(double alpha, double r) {
        return Mechanism({{alpha, 1.0}, {1.0 - alpha, r}});
    }
    const std::vector<MarkupAtom>& atoms() const { return atoms_; }
    std::string to_json() const;

  private:
    std::vector<MarkupAtom> atoms_;
};

struct RevenueReport {
    double mechanism_revenue;
    double optimal_revenue;
    double ratio;
    std::string to_json() const;
};

struct McEstimate {
    double mean;
    double stderr_;
    std::uint64_t samples;
    std::uint64_t seed;
    std::string generator;
    std::string to_json() const;
};

// Optimal two-agent revenue on a truncated normalized curve: 2 - qbar.
double opt_revenue_truncated(double qbar);

// Second-price auction revenue: twice the area under the revenue curve.
double spa_revenue(const Curve& f);
// Closed form on the quadrilateral: q' + (1-q) q'/(r q).
double spa_revenue_quad(double qbar, double qprime, double r);

// Quantile selling at price r * V(q): q/(r - qr + q).
double hat_quantile(double q, double r);

// Closed form for M_r on Tr_qbar, r > 1 (accepts qbar = 0).
double markup_revenue_triangle(double r, double qbar);

enum class Integration { analytic, quadrature };

// M_r(F) = 2 * integral of revbar_F(r V_F(q)) over q in [0,1]; exact
// piecewise rational+log evaluation, or adaptive quadrature as an oracle.
double markup_revenue_curve(double r, const Curve& f,
                            Integration mode = Integration::analytic);

double stochastic_markup_revenue(const Mechanism& m, const Curve& f);
double stochastic_markup_revenue(const Mechanism& m, double qbar);

RevenueReport approximation_ratio(const Mechanism& m, double qbar);
RevenueReport approximation_ratio(const Mechanism& m, const Curve& f);

McEstimate mc_simulate(const Mechanism& m, const Curve& f,
                       std::uint64_t samples, std::uint64_t seed);
// Triangle by scalar monopoly quantile; supports qbar = 0 and qbar = 1.
McEstimate mc_simulate_triangle(const Mechanism& m, double qbar,
                                std::uint64_t samples, std::uint64_t seed);

}  // namespace piopt
