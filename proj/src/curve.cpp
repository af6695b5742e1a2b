#include "piopt/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace piopt {

namespace {

double seg_slope(const Vertex& a, const Vertex& b) {
    return (b.R - a.R) / (b.q - a.q);
}

std::vector<Vertex> drop_collinear(std::vector<Vertex> vs) {
    std::vector<Vertex> out;
    for (const auto& v : vs) {
        while (out.size() >= 2) {
            const Vertex& a = out[out.size() - 2];
            const Vertex& b = out.back();
            double cross = (b.q - a.q) * (v.R - a.R) - (v.q - a.q) * (b.R - a.R);
            if (std::fabs(cross) <= kTol * std::max(1.0, std::fabs(v.R - a.R)))
                out.pop_back();
            else
                break;
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

Curve::Curve(CurveKind k, std::vector<Vertex> vs) : kind_(k), v_(std::move(vs)) {}

Curve Curve::distribution(std::vector<Vertex> vs) {
    if (vs.size() < 2) throw constraint_error("curve needs at least two vertices");
    if (std::fabs(vs.front().q) > kTol || std::fabs(vs.back().q - 1.0) > kTol)
        throw constraint_error("curve must span quantiles 0 to 1");
    vs.front().q = 0.0;
    vs.back().q = 1.0;
    if (std::fabs(vs.front().R) > kTol)
        throw constraint_error("distribution curve requires R(0) = 0");
    vs.front().R = 0.0;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i)
        if (vs[i + 1].q <= vs[i].q + kTol)
            throw constraint_error("vertex quantiles must be strictly increasing");
    for (const auto& v : vs)
        if (v.R < -kTol) throw constraint_error("revenue must be non-negative");
    vs = drop_collinear(std::move(vs));
    for (std::size_t i = 0; i + 2 < vs.size(); ++i) {
        double s0 = seg_slope(vs[i], vs[i + 1]);
        double s1 = seg_slope(vs[i + 1], vs[i + 2]);
        if (s1 > s0 + 1e-9 * std::max({1.0, std::fabs(s0), std::fabs(s1)}))
            throw constraint_error("distribution curve must be concave");
    }
    return Curve(CurveKind::distribution, std::move(vs));
}

Curve Curve::envelope(std::vector<Vertex> vs) {
    if (vs.size() < 2) throw constraint_error("curve needs at least two vertices");
    if (std::fabs(vs.front().q) > kTol || std::fabs(vs.back().q - 1.0) > kTol)
        throw constraint_error("curve must span quantiles 0 to 1");
    vs.front().q = 0.0;
    vs.back().q = 1.0;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i)
        if (vs[i + 1].q <= vs[i].q + kTol)
            throw constraint_error("vertex quantiles must be strictly increasing");
    for (const auto& v : vs)
        if (v.R < -kTol) throw constraint_error("revenue must be non-negative");
    return Curve(CurveKind::envelope, drop_collinear(std::move(vs)));
}

void Curve::require_distribution(const char* op) const {
    if (kind_ != CurveKind::distribution)
        throw domain_error(std::string(op) + " requires a distribution curve");
}

bool Curve::normalized() const {
    double mx = 0.0;
    for (const auto& v : v_) mx = std::max(mx, v.R);
    return std::fabs(mx - 1.0) <= 1e-9;
}

double Curve::revenue_at(double q) const {
    if (q < -kTol || q > 1.0 + kTol) throw domain_error("quantile outside [0,1]");
    q = std::clamp(q, 0.0, 1.0);
    auto it = std::upper_bound(v_.begin(), v_.end(), q,
                               [](double x, const Vertex& v) { return x < v.q; });
    std::size_t i = (it == v_.begin()) ? 0 : (it - v_.begin() - 1);
    if (i + 1 >= v_.size()) i = v_.size() - 2;
    const Vertex& a = v_[i];
    const Vertex& b = v_[i + 1];
    return a.R + seg_slope(a, b) * (q - a.q);
}

double Curve::value_at(double q) const {
    require_distribution("value_at");
    if (q <= 0.0 || q > 1.0 + kTol)
        throw domain_error("value_at requires quantile in (0,1]");
    return revenue_at(std::min(q, 1.0)) / q;
}

double Curve::quantile_at_price(double p) const {
    if (p < -1e-9) throw domain_error("price must be non-negative");
    if (p < 0.0) p = 0.0;  // absorb rounding noise from V(q) near zero
    // V(1) = R(1); everyone buys at or below the support floor.
    if (p <= v_.back().R) return 1.0;
    for (std::size_t i = v_.size() - 1; i-- > 0;) {
        const Vertex& a = v_[i];
        const Vertex& b = v_[i + 1];
        double vb = b.R / b.q;
        if (p <= vb) return b.q;
        double s = seg_slope(a, b);
        double intercept = a.R - s * a.q;  // V(q) = intercept/q + s on segment
        double va = (a.q > 0.0) ? a.R / a.q
                                : (intercept > kTol
                                       ? std::numeric_limits<double>::infinity()
                                       : s);
        if (p <= va) {
            if (intercept <= kTol) return b.q;  // flat value segment
            double q = intercept / (p - s);
            return std::clamp(q, a.q, b.q);
        }
    }
    return 0.0;  // price above support
}

double Curve::price_posting_revenue(double p) const {
    return p * quantile_at_price(p);
}

double Curve::monopoly_quantile() const {
    double mx = 0.0;
    for (const auto& v : v_) mx = std::max(mx, v.R);
    for (const auto& v : v_)
        if (v.R >= mx - kTol) return v.q;
    return v_.back().q;
}

double Curve::area() const {
    double a = 0.0;
    for (std::size_t i = 0; i + 1 < v_.size(); ++i)
        a += (v_[i + 1].q - v_[i].q) * (v_[i].R + v_[i + 1].R) * 0.5;
    return a;
}

Curve Curve::truncate() const {
    require_distribution("truncate_curve");
    if (!normalized()) throw constraint_error("truncate_curve requires a normalized curve");
    double qb = monopoly_quantile();
    std::vector<Vertex> out;
    out.push_back({0.0, 0.0});
    out.push_back({qb, revenue_at(qb)});
    for (const auto& v : v_)
        if (v.q > qb + kTol) out.push_back(v);
    return Curve::distribution(std::move(out));
}

TriangleDist Curve::triangulation() const {
    require_distribution("triangulation");
    if (!normalized()) throw constraint_error("triangulation requires a normalized curve");
    return TriangleDist{monopoly_quantile()};
}

double Curve::sample_value(double u) const {
    require_distribution("sample_value");
    if (u <= 0.0 || u > 1.0)
        throw domain_error("sample_value requires u in (0,1]");
    return value_at(u);
}

std::string Curve::to_json() const {
    nlohmann::json j;
    j["kind"] = (kind_ == CurveKind::distribution) ? "distribution" : "envelope";
    auto& verts = j["vertices"] = nlohmann::json::array();
    for (const auto& v : v_) verts.push_back({v.q, v.R});
    return j.dump();
}

Curve triangle_curve(double qbar) {
    if (!(qbar > 0.0) || qbar > 1.0)
        throw domain_error("triangle_curve requires monopoly quantile in (0,1]");
    if (qbar >= 1.0 - kTol)
        return Curve::distribution({{0.0, 0.0}, {1.0, 1.0}});
    return Curve::distribution({{0.0, 0.0}, {qbar, 1.0}, {1.0, 0.0}});
}

Curve quadrilateral_curve(const QuadrilateralDist& d) {
    if (d.r < 1.0) throw domain_error("quadrilateral requires markup r >= 1");
    if (!(d.qbar > 0.0) || d.qbar >= 1.0)
        throw constraint_error("quadrilateral requires monopoly quantile in (0,1)");
    double lo = d.qbar * d.r / (d.qbar * d.r + 1.0 - d.qbar);
    double hi = std::min(d.r * d.qbar, 1.0);
    if (d.qprime < lo - kTol || d.qprime > hi + kTol)
        throw constraint_error(
            "quadrilateral second quantile outside [q r/(q r+1-q), min(r q, 1)]");
    double qp = std::clamp(d.qprime, lo, hi);
    if (qp >= 1.0 - kTol)
        return Curve::distribution({{0.0, 0.0}, {d.qbar, 1.0}, {1.0, 1.0 / (d.r * d.qbar)}});
    if (qp <= d.qbar + kTol) return triangle_curve(d.qbar);
    return Curve::distribution(
        {{0.0, 0.0}, {d.qbar, 1.0}, {qp, qp / (d.r * d.qbar)}, {1.0, 0.0}});
}

Curve fbar_curve(const FbarParams& p) {
    if (!(p.q1 > 0.0 && p.q1 < p.q2 && p.q2 < 1.0))
        throw constraint_error("fbar requires 0 < q1 < q2 < 1");
    if (!(p.d1 > 0.0 && p.d1 < 1.0 && p.d2 > 0.0 && p.d2 < 1.0))
        throw constraint_error("fbar requires deltas in (0,1)");
    return Curve::envelope({{0.0, p.d1}, {p.q1, 1.0}, {p.q2, 1.0}, {1.0, p.d2}});
}

double triangle_value(double qbar, double q) {
    if (qbar < 0.0 || qbar > 1.0) throw domain_error("monopoly quantile outside [0,1]");
    if (q <= 0.0 || q > 1.0) throw domain_error("quantile outside (0,1]");
    if (qbar >= 1.0 - kTol) return 1.0;
    if (q <= qbar) return 1.0 / qbar;  // qbar = 0 never reaches this branch
    return (1.0 - q) / ((1.0 - qbar) * q);
}

double opt_revenue_curve(const Curve& f) {
    if (f.kind() != CurveKind::distribution)
        throw domain_error("opt_revenue_curve requires a distribution curve");
    double qb = f.monopoly_quantile();
    double total = 0.0;
    const auto& vs = f.vertices();
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        double a = vs[i].q;
        double b = std::min(vs[i + 1].q, qb);
        if (b <= a) break;
        double s = seg_slope(vs[i], vs[i + 1]);
        total += s * (2.0 * (b - a) - (b * b - a * a));
    }
    return total;
}

}  // namespace piopt
