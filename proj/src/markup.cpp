#include "piopt/markup.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "json.hpp"
#include "piopt/detail/quad.hpp"
#include "piopt/parallel.hpp"
#include "piopt/rng.hpp"

namespace piopt {

namespace {

struct Segment {
    double q0, q1;   // quantile span
    double slope;    // R' on the segment
    double icept;    // R(q) = icept + slope*q; V(q) = icept/q + slope
};

std::vector<Segment> segments_of(const Curve& f) {
    const auto& vs = f.vertices();
    std::vector<Segment> out;
    out.reserve(vs.size() - 1);
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        double s = (vs[i + 1].R - vs[i].R) / (vs[i + 1].q - vs[i].q);
        out.push_back({vs[i].q, vs[i + 1].q, s, vs[i].R - s * vs[i].q});
    }
    return out;
}

using detail::integrate;

// Breakpoints of q -> revbar(r V(q)): segment ends plus quantiles where the
// marked-up value crosses a vertex price.
std::vector<double> markup_breakpoints(double r, const Curve& f) {
    std::vector<double> bps;
    for (const auto& v : f.vertices()) bps.push_back(v.q);
    for (const auto& v : f.vertices()) {
        if (v.q <= 0.0) continue;
        double price = v.R / v.q;
        double cross = f.quantile_at_price(price / r);
        if (cross > 0.0 && cross < 1.0) bps.push_back(cross);
    }
    // The top of the support is the first-segment value.
    const auto& vs = f.vertices();
    double top = (vs[1].R - vs[0].R) / (vs[1].q - vs[0].q);
    if (vs[0].R <= kTol && top > 0.0) {
        double cross = f.quantile_at_price(top / r);
        if (cross > 0.0 && cross < 1.0) bps.push_back(cross);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end(),
                          [](double a, double b) { return b - a <= 1e-15; }),
              bps.end());
    if (bps.front() > 0.0) bps.insert(bps.begin(), 0.0);
    if (bps.back() < 1.0) bps.push_back(1.0);
    return bps;
}

// Exact integral of revbar(r V(q)) over one breakpoint interval: there the
// integrand is a Moebius function of q (rational of degree 1/1).
double piece_exact(double r, const std::vector<Segment>& segs, double lo,
                   double hi, const Curve& f) {
    double qm = 0.5 * (lo + hi);
    const Segment* vi = nullptr;
    for (const auto& s : segs)
        if (qm >= s.q0 && qm <= s.q1) { vi = &s; break; }
    if (!vi) return 0.0;
    if (std::fabs(vi->icept) <= kTol) {
        // Flat value on the interval: constant integrand.
        return (hi - lo) * f.price_posting_revenue(r * vi->slope);
    }
    double pm = r * (vi->icept / qm + vi->slope);
    // Locate the price segment serving pm.
    double floor_value = f.vertices().back().R;
    if (pm <= floor_value) {
        // Everyone buys: integrand is r V(q) itself.
        return r * (vi->icept * std::log(hi / lo) + vi->slope * (hi - lo));
    }
    const Segment* pk = nullptr;
    for (const auto& s : segs) {
        double vhi = (s.q0 > 0.0) ? (s.icept / s.q0 + s.slope)
                                  : (s.icept > kTol
                                         ? std::numeric_limits<double>::infinity()
                                         : s.slope);
        double vlo = s.icept / s.q1 + s.slope;
        if (pm > vlo && pm <= vhi) { pk = &s; break; }
    }
    if (!pk) return 0.0;  // price above the support: no sale
    if (pk->icept <= kTol) {
        // Flat-value price segment can only be hit at a single price point;
        // fall back to quadrature for robustness.
        auto g = [&](double q) {
            return f.price_posting_revenue(r * (vi->icept / q + vi->slope));
        };
        return integrate(g, lo, hi, 1e-13);
    }
    // revbar(p) = p * icept_k/(p - slope_k) with p = r(icept_i/q + slope_i):
    // (A + Bq)/(C + Dq) in q.
    double A = r * pk->icept * vi->icept;
    double B = r * pk->icept * vi->slope;
    double C = r * vi->icept;
    double D = r * vi->slope - pk->slope;
    double scale = std::max({std::fabs(C), std::fabs(D), 1e-300});
    if (std::fabs(D) <= 1e-14 * scale)
        return (A * (hi - lo) + 0.5 * B * (hi * hi - lo * lo)) / C;
    return (B / D) * (hi - lo) +
           (A - B * C / D) / D * std::log((C + D * hi) / (C + D * lo));
}

double mc_run(const Mechanism& m, const std::function<double(double)>& value,
              std::uint64_t samples, std::uint64_t seed, McEstimate* out) {
    const auto& atoms = m.atoms();
    std::uint64_t nshards = (samples + kMcShardSize - 1) / kMcShardSize;
    std::vector<double> sums(nshards, 0.0), sqs(nshards, 0.0);
    parallel_chunks(nshards, [&](std::size_t b, std::size_t e) {
        for (std::size_t sh = b; sh < e; ++sh) {
            std::uint64_t stream = shard_stream(seed, sh);
            std::uint64_t count =
                std::min<std::uint64_t>(kMcShardSize, samples - sh * kMcShardSize);
            double sum = 0.0, sq = 0.0;
            for (std::uint64_t i = 0; i < count; ++i) {
                double u1 = counter_uniform(stream, 3 * i);
                double u2 = counter_uniform(stream, 3 * i + 1);
                double w = counter_uniform(stream, 3 * i + 2);
                double r = atoms.back().r;
                double acc = 0.0;
                for (const auto& a : atoms) {
                    acc += a.weight;
                    if (w <= acc) { r = a.r; break; }
                }
                double v1 = value(u1), v2 = value(u2);
                double hi = std::max(v1, v2), lo = std::min(v1, v2);
                double pay = (hi >= r * lo) ? r * lo : 0.0;
                sum += pay;
                sq += pay * pay;
            }
            sums[sh] = sum;
            sqs[sh] = sq;
        }
    });
    double sum = 0.0, sq = 0.0;
    for (std::uint64_t sh = 0; sh < nshards; ++sh) {
        sum += sums[sh];
        sq += sqs[sh];
    }
    double n = static_cast<double>(samples);
    double mean = sum / n;
    double var = (samples > 1) ? std::max(0.0, (sq - n * mean * mean) / (n - 1.0))
                               : 0.0;
    *out = {mean, std::sqrt(var / n), samples, seed, "splitmix64-counter"};
    return mean;
}

}  // namespace

Mechanism::Mechanism(std::vector<MarkupAtom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw constraint_error("mechanism needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (a.weight < -kTol) throw constraint_error("atom weights must be non-negative");
        if (a.r < 1.0) throw constraint_error("markups must be at least 1");
        total += a.weight;
    }
    if (std::fabs(total - 1.0) > kTol)
        throw constraint_error("atom weights must sum to 1");
}

std::string Mechanism::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : atoms_) j.push_back({{"weight", a.weight}, {"r", a.r}});
    return j.dump();
}

std::string RevenueReport::to_json() const {
    nlohmann::json j{{"mechanism_revenue", mechanism_revenue},
                     {"optimal_revenue", optimal_revenue},
                     {"ratio", ratio}};
    return j.dump();
}

std::string McEstimate::to_json() const {
    nlohmann::json j{{"mean", mean},
                     {"stderr", stderr_},
                     {"samples", samples},
                     {"seed", seed},
                     {"generator", generator}};
    return j.dump();
}

double opt_revenue_truncated(double qbar) {
    if (qbar < 0.0 || qbar > 1.0)
        throw domain_error("monopoly quantile outside [0,1]");
    return 2.0 - qbar;
}

double spa_revenue(const Curve& f) {
    if (f.kind() != CurveKind::distribution)
        throw domain_error("spa_revenue requires a distribution curve");
    if (!f.normalized()) throw constraint_error("spa_revenue requires a normalized curve");
    return 2.0 * f.area();
}

double spa_revenue_quad(double qbar, double qprime, double r) {
    quadrilateral_curve({qbar, qprime, r});  // validates the parameters
    return qprime + (1.0 - qbar) * qprime / (r * qbar);
}

double hat_quantile(double q, double r) {
    if (q < 0.0 || q > 1.0) throw domain_error("quantile outside [0,1]");
    if (r <= 0.0) throw domain_error("markup must be positive");
    return q / (r - q * r + q);
}

double markup_revenue_triangle(double r, double qbar) {
    if (r < 1.0 + kRMinGap)
        throw domain_error("closed form needs r >= 1 + 1e-9; use spa_revenue at r = 1");
    if (qbar < 0.0 || qbar > 1.0)
        throw domain_error("closed form needs monopoly quantile in [0,1]");
    if (qbar >= 1.0 - kTol) return 0.0;  // point mass: marked-up price never sells
    double d = r - 1.0;
    if (d < 1e-4) {
        // Near r = 1 the direct form cancels catastrophically; use the series
        // W = sum_k d^k [ (1-q)(-q)^k - (-1)^k (1-q^{k+1})/(k+1) ].
        double sum = 0.0, dk = 1.0, mq = -qbar, mqk = mq, qk1 = qbar * qbar;
        double sign = -1.0;
        for (int k = 1; k <= 8; ++k) {
            double wk = (1.0 - qbar) * mqk - sign * (1.0 - qk1) / (k + 1);
            sum += wk * dk;
            dk *= d;
            mqk *= mq;
            qk1 *= qbar;
            sign = -sign;
        }
        return 2.0 * r * sum / (1.0 - qbar);
    }
    double u = 1.0 + qbar * d;  // = 1 - qbar + qbar r
    double L = std::log1p(d) - std::log1p(qbar * d);  // = log(r/u)
    double W = (1.0 - qbar) / u - L / d;
    return 2.0 * r * W / ((1.0 - qbar) * d);
}

double markup_revenue_curve(double r, const Curve& f, Integration mode) {
    if (f.kind() != CurveKind::distribution)
        throw domain_error("markup_revenue_curve requires a distribution curve");
    if (r < 1.0) throw domain_error("markup must be at least 1");
    if (r <= 1.0 + kRMinGap) return 2.0 * f.area();
    auto segs = segments_of(f);
    auto bps = markup_breakpoints(r, f);
    double total = 0.0;
    if (mode == Integration::analytic) {
        for (std::size_t i = 0; i + 1 < bps.size(); ++i)
            total += piece_exact(r, segs, bps[i], bps[i + 1], f);
    } else {
        auto g = [&](double q) {
            if (q <= 0.0) q = 1e-300;
            return f.price_posting_revenue(r * f.revenue_at(std::min(q, 1.0)) / q);
        };
        for (std::size_t i = 0; i + 1 < bps.size(); ++i)
            total += integrate(g, bps[i], bps[i + 1], 1e-12);
    }
    return 2.0 * total;
}

double stochastic_markup_revenue(const Mechanism& m, const Curve& f) {
    double rev = 0.0;
    for (const auto& a : m.atoms()) {
        if (a.weight == 0.0) continue;
        rev += a.weight * markup_revenue_curve(a.r, f);
    }
    return rev;
}

double stochastic_markup_revenue(const Mechanism& m, double qbar) {
    if (qbar < 0.0 || qbar > 1.0)
        throw domain_error("monopoly quantile outside [0,1]");
    double rev = 0.0;
    for (const auto& a : m.atoms()) {
        if (a.weight == 0.0) continue;
        if (a.r <= 1.0 + kRMinGap)
            rev += a.weight;  // SPA earns 1 on every triangle
        else if (qbar >= 1.0 - kTol)
            rev += 0.0;  // point mass: marked-up price never sells
        else
            rev += a.weight * markup_revenue_triangle(a.r, qbar);
    }
    return rev;
}

namespace {

RevenueReport make_report(double mech, double opt) {
    double ratio = (mech > 0.0) ? opt / mech
                                : std::numeric_limits<double>::infinity();
    return {mech, opt, ratio};
}

}  // namespace

RevenueReport approximation_ratio(const Mechanism& m, double qbar) {
    return make_report(stochastic_markup_revenue(m, qbar),
                       opt_revenue_truncated(qbar));
}

RevenueReport approximation_ratio(const Mechanism& m, const Curve& f) {
    return make_report(stochastic_markup_revenue(m, f), opt_revenue_curve(f));
}

McEstimate mc_simulate(const Mechanism& m, const Curve& f,
                       std::uint64_t samples, std::uint64_t seed) {
    if (samples < 1) throw domain_error("mc_simulate needs at least one sample");
    McEstimate est;
    mc_run(m, [&](double u) { return f.sample_value(u); }, samples, seed, &est);
    return est;
}

McEstimate mc_simulate_triangle(const Mechanism& m, double qbar,
                                std::uint64_t samples, std::uint64_t seed) {
    if (samples < 1) throw domain_error("mc_simulate needs at least one sample");
    McEstimate est;
    mc_run(m, [&](double u) { return triangle_value(qbar, u); }, samples, seed,
           &est);
    return est;
}

}  // namespace piopt
