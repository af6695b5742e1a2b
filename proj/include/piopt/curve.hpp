#pragma once

#include <string>
#include <vector>

#include "piopt/errors.hpp"

namespace piopt {

inline constexpr double kTol = 1e-12;

enum class CurveKind { distribution, envelope };

struct Vertex {
    double q;
    double R;
};

struct TriangleDist {
    double qbar;
};

struct QuadrilateralDist {
    double qbar;
    double qprime;
    double r;
};

struct FbarParams {
    double q1;
    double q2;
    double d1;
    double d2;
};

// Piecewise-linear revenue curve R(q) on [0,1] in quantile space.
// kind = distribution: R(0) = 0 and concave. kind = envelope: neither
// required; envelopes only participate in the dominated-revenue bound.
class Curve {
  public:
    static Curve distribution(std::vector<Vertex> vs);
    static Curve envelope(std::vector<Vertex> vs);

    CurveKind kind() const { return kind_; }
    const std::vector<Vertex>& vertices() const { return v_; }
    bool normalized() const;

    double revenue_at(double q) const;
    // V(q) = R(q)/q; q in (0,1], distribution curves only.
    double value_at(double q) const;
    // Largest q with V(q) >= p (sale probability of posted price p).
    double quantile_at_price(double p) const;
    // p * quantile_at_price(p).
    double price_posting_revenue(double p) const;
    // Smallest argmax vertex quantile.
    double monopoly_quantile() const;
    double area() const;
    Curve truncate() const;
    TriangleDist triangulation() const;
    double sample_value(double u) const;
    std::string to_json() const;

  private:
    Curve(CurveKind k, std::vector<Vertex> vs);
    void require_distribution(const char* op) const;

    CurveKind kind_;
    std::vector<Vertex> v_;
};

Curve triangle_curve(double qbar);
Curve quadrilateral_curve(const QuadrilateralDist& d);
Curve fbar_curve(const FbarParams& p);

// Triangle value function as a scalar map; accepts qbar = 0 (equal-revenue
// limit, V(q) = (1-q)/q) which has no curve representation.
double triangle_value(double qbar, double q);

// Exact two-agent optimal revenue of the distribution with revenue curve F:
// integral over [0, qbar] of R'(q) * 2(1-q) dq, piecewise exact.
// Equals 2 - qbar on truncated curves.
double opt_revenue_curve(const Curve& f);

}  // namespace piopt
