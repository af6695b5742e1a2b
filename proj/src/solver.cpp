#include "piopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"

namespace piopt {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

struct Peak {
    double x;
    double fx;
};

// Golden-section maximum of a unimodal function on [a,b].
Peak golden_max(const std::function<double(double)>& f, double a, double b,
                double xtol) {
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return (fc > fd) ? Peak{c, fc} : Peak{d, fd};
}

double mtri(double r, double qbar) {
    return markup_revenue_triangle(std::max(r, 1.0 + 2e-9), qbar);
}

// Non-certified estimate of sup over r in (1, r_hi] of M_r(Tr_qbar).
Peak approx_peak(double qbar, double r_hi) {
    auto f = [&](double r) { return mtri(r, qbar); };
    double lo = 1.0 + 1e-6, hi = r_hi;
    int n = 160;
    double best_r = lo, best_m = -1.0;
    double lr0 = std::log(lo), lr1 = std::log(hi);
    for (int i = 0; i <= n; ++i) {
        double r = std::exp(lr0 + (lr1 - lr0) * i / n);
        double m = f(r);
        if (m > best_m) {
            best_m = m;
            best_r = r;
        }
    }
    double step = (lr1 - lr0) / n;
    double a = std::max(lo, best_r * std::exp(-step));
    double b = std::min(hi, best_r * std::exp(step));
    Peak p = golden_max(f, a, b, 1e-12);
    if (best_m > p.fx) return {best_r, best_m};
    return p;
}

// Certified upper bound of max over r in [r_lo, r_hi] of M_r(Tr_qbar) via the
// in-r continuity lift M_rho <= (rho/r) M_r for rho >= r; `cap` only steers
// the adaptive step, soundness does not depend on it.
Peak maxr_grid_upper(double qbar, double r_lo, double r_hi, double cap,
                     double slack) {
    double bound = 0.0, witness = r_lo;
    double r = r_lo;
    while (r < r_hi) {
        double m = mtri(r, qbar);
        double gap = 1e-9;
        if (m > 0.0) {
            if (cap > m)
                gap = std::max(gap, 0.45 * (cap / m - 1.0));
            else
                gap = std::max(gap, 0.1 * std::max(cap, 1e-9) / m);
        } else {
            gap = 0.5;
        }
        double cell = m * (1.0 + gap) + slack;
        if (cell > bound) {
            bound = cell;
            witness = r;
        }
        r *= (1.0 + gap);
    }
    return {witness, bound};
}

// Certified upper bound of sup over all r > 1 of M_r(Tr_qbar); numeric up to
// r_hi, beyond that the recorded analytic tail assumption applies. target_m
// steers adaptivity: the bound aims to land below it when the truth allows.
Peak maxr_upper(double qbar, double r_hi, double target_m, double slack) {
    if (qbar >= 1.0 - 1e-12) return {r_hi, slack};
    double trivial = r_hi * (1.0 - qbar);  // M_r <= r(1-qbar) for every r > 1
    if (trivial + slack < target_m) return {r_hi, trivial + slack};
    Peak pk = approx_peak(qbar, r_hi);
    double headroom = std::max(2.0 * slack, 0.5 * (target_m - pk.fx));
    double cap = pk.fx + 0.5 * headroom;
    double r_s = cap / (1.0 - qbar);
    if (r_s >= r_hi) return {pk.x, trivial + slack};
    r_s = std::max(r_s, 1.0 + 2e-9);
    double analytic = r_s * (1.0 - qbar) + slack;  // covers (1, r_s]
    Peak grid = maxr_grid_upper(qbar, r_s, r_hi, cap, slack);
    if (grid.fx > analytic) return grid;
    return {pk.x, analytic};
}

}  // namespace

std::string CertifiedBound::to_json() const {
    nlohmann::json j{{"value", value},
                     {"kind", kind == Kind::lower ? "lower" : "upper"},
                     {"grid_eps", grid_eps},
                     {"slack", slack},
                     {"witness_q", witness_q},
                     {"witness_r", witness_r},
                     {"name", name},
                     {"note", note}};
    return j.dump();
}

std::string EquilibriumSolution::to_json() const {
    nlohmann::json j{{"qbar_star", qbar_star},
                     {"r_star", r_star},
                     {"alpha_star", alpha_star},
                     {"beta", beta}};
    auto& certs = j["certificates"] = nlohmann::json::array();
    for (const auto& c : certificates)
        certs.push_back(nlohmann::json::parse(c.to_json()));
    return j.dump();
}

double apx_spa(double qbar) {
    if (qbar < 0.0 || qbar > 1.0)
        throw domain_error("monopoly quantile outside [0,1]");
    return 2.0 - qbar;
}

ApxMarkupOpt apx_markup_opt(double qbar, double r_max, double r_grid_eps) {
    if (qbar < 0.0 || qbar >= 1.0)
        throw domain_error("apx_markup_opt needs monopoly quantile in [0,1)");
    if (r_max < 11.0) throw domain_error("apx_markup_opt needs r_max >= 11");
    (void)r_grid_eps;  // the golden refinement already resolves r to ~1e-12
    Peak pk = approx_peak(qbar, r_max);
    double opt = 2.0 - qbar;
    bool boundary = pk.x >= r_max * (1.0 - 1e-6);
    Peak up = maxr_upper(qbar, r_max, pk.fx * (1.0 + 1e-7) + 1e-12, 1e-12);
    // Certified revenue upper bound -> certified ratio lower bound on the
    // continuum (1, r_max], extended by the tail assumption.
    return {opt / pk.fx, pk.x, boundary, opt / up.fx};
}

CertifiedBound certify_markup_min_in_q(double r, double q_lo, double q_hi,
                                       double grid_eps, double target,
                                       double slack) {
    if (q_lo > q_hi || q_lo < 0.0 || q_hi >= 1.0)
        throw domain_error("bad sweep interval");
    double floor_step = std::max(grid_eps, 1e-14);
    double minb = mtri(r, q_hi) - slack;
    double witness = q_hi;
    if (minb < target)
        throw certification_error("left sweep fails at the right endpoint");
    double q = q_lo;
    double step = floor_step;
    while (q < q_hi - 1e-16) {
        double q2 = std::min(q_hi, q + step);
        // In-q lift: M(q') >= M(q2)(1-q2)/(1-q) for every q' in [q, q2].
        double cell = mtri(r, q2) * (1.0 - q2) / (1.0 - q) - slack;
        if (cell < target) {
            if (step <= floor_step * (1.0 + 1e-12))
                throw certification_error(
                    "left sweep cell at q=" + std::to_string(q) +
                    " cannot certify the target");
            step = std::max(floor_step, 0.25 * step);
            continue;
        }
        if (cell < minb) {
            minb = cell;
            witness = q2;
        }
        q = q2;
        step = std::max(floor_step, 0.5 * (cell - target) * (1.0 - q));
    }
    return {minb,     CertifiedBound::Kind::lower,
            grid_eps, slack,
            witness,  r,
            "min M_r over quantile interval",
            ""};
}

CertifiedBound certify_markup_max_in_qr(double q_lo, double q_hi,
                                        double grid_eps, double target,
                                        double r_hi, double slack) {
    if (q_lo > q_hi || q_lo < 0.0 || q_hi > 1.0)
        throw domain_error("bad sweep interval");
    double floor_step = std::max(grid_eps, 1e-14);
    double maxb = 0.0;
    double witness_q = q_lo, witness_r = 2.0;
    double q = q_lo;
    while (q < q_hi - 1e-16) {
        // Cap: M_r(Tr_q') <= 2(1-q') for every r (no sale below quantile q',
        // pointwise posted-price revenue at most the monopoly revenue).
        double triv = 2.0 * (1.0 - q) + slack;
        if (triv < target) {
            if (triv > maxb) {
                maxb = triv;
                witness_q = q;
            }
            break;  // covers the whole remaining interval [q, q_hi]
        }
        Peak up = maxr_upper(q, r_hi, target, slack);
        double point = up.fx;  // certified sup over r at the left endpoint
        if (point >= target)
            throw certification_error(
                "right sweep cannot certify the target at q=" +
                std::to_string(q));
        // In-q lift from the left endpoint: M(q') <= M(q)(1-q)/(1-q') on
        // [q, q2]; pick q2 so the lifted bound stays strictly below target.
        double q2max = 1.0 - point * (1.0 - q) / target;
        double q2 = std::min(q_hi, q + std::max(floor_step,
                                                0.9 * (q2max - q)));
        double cell = (q2 < 1.0 - 1e-12)
                          ? std::min(triv, point * (1.0 - q) / (1.0 - q2))
                          : triv;
        if (cell >= target)
            throw certification_error(
                "right sweep cell at q=" + std::to_string(q) +
                " cannot certify the target");
        if (cell > maxb) {
            maxb = cell;
            witness_q = q2;
            witness_r = up.x;
        }
        q = q2;
    }
    return {maxb,      CertifiedBound::Kind::upper,
            grid_eps,  slack,
            witness_q, witness_r,
            "max over (q, r) of M_r(Tr_q)",
            "r-range (1," + std::to_string(r_hi) +
                "] certified numerically; larger r by the analytic tail "
                "assumption"};
}

CrossingResult find_crossing(const SolverConfig& cfg) {
    double eps = cfg.grid_eps;
    if (!(eps > 0.0) || eps > 1e-5)
        throw domain_error("find_crossing needs grid_eps in (0, 1e-5]");
    auto g = [&](double q) { return approx_peak(q, cfg.r_max).fx - 1.0; };
    double qa = 0.01, qb = 0.3;
    if (g(qa) <= 0.0 || g(qb) >= 0.0)
        throw bracket_error("crossing bracket failed");
    while (qb - qa > 0.25 * eps) {
        double m = 0.5 * (qa + qb);
        if (g(m) > 0.0)
            qa = m;
        else
            qb = m;
    }
    double lo = std::max(0.0, qa - 0.75 * eps);
    double hi = std::min(1.0, qb + 0.75 * eps);
    double rhat = approx_peak(lo, cfg.r_max).x;
    double off = std::max(10.0 * cfg.slack, 0.4 * eps);
    CertifiedBound left = certify_markup_min_in_q(rhat, 0.0, lo, eps / 100.0,
                                                  1.0 + off, cfg.slack);
    left.name = "sweep 1: min M_rhat(Tr_q) on [0, lo]";
    CertifiedBound right = certify_markup_max_in_qr(
        hi, 1.0, eps / 100.0, 1.0 - off, cfg.r_tail_hi, cfg.slack);
    right.name = "sweep 2: max M_r(Tr_q) on [hi, 1)";
    return {lo, hi, left, right, rhat};
}

double adversary_best_response(double alpha, double r, double grid_eps) {
    if (alpha < 0.5 || alpha > 1.0)
        throw domain_error("adversary_best_response needs alpha in [0.5, 1]");
    if (r <= 1.0) throw domain_error("adversary_best_response needs r > 1");
    auto obj = [&](double q) {
        double m = (q >= 1.0 - 1e-12) ? 0.0 : mtri(r, q);
        return (2.0 - q) / (alpha + (1.0 - alpha) * m);
    };
    double best_q = 0.0, best_v = obj(0.0);
    for (double q = 0.005; q < 0.995; q += 0.005) {
        double v = obj(q);
        if (v > best_v) {
            best_v = v;
            best_q = q;
        }
    }
    double a = std::max(0.0, best_q - 0.01);
    double b = std::min(0.999999, best_q + 0.01);
    Peak p = golden_max(obj, a, b, std::min(grid_eps, 1e-9));
    return (p.fx >= best_v) ? p.x : best_q;
}

double solve_alpha(double r_star, double qbar_star, double tol) {
    double lo = 0.8, hi = 0.81;
    double b_lo = adversary_best_response(lo, r_star);
    double b_hi = adversary_best_response(hi, r_star);
    // Best response decreases in alpha: more SPA weight favors smaller qbar.
    if (!(b_lo >= qbar_star && b_hi <= qbar_star))
        throw bracket_error("best responses do not straddle qbar*");
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        double b = adversary_best_response(mid, r_star);
        if (std::fabs(b - qbar_star) <= tol) return mid;
        if (b > qbar_star)
            lo = mid;
        else
            hi = mid;
    }
    throw certification_error("solve_alpha failed to reach tolerance");
}

EquilibriumSolution solve_equilibrium(const SolverConfig& cfg) {
    CrossingResult cr = find_crossing(cfg);
    double qstar = 0.5 * (cr.lo + cr.hi);
    ApxMarkupOpt ao = apx_markup_opt(qstar, cfg.r_max, 1e-10);
    double rstar = ao.r_star;
    double astar = solve_alpha(rstar, qstar, cfg.alpha_tol);
    double beta = 2.0 - qstar;
    if (std::fabs(markup_revenue_triangle(rstar, qstar) - 1.0) > 1e-6)
        throw certification_error("fixed point check failed: M_r*(Tr_q*) != 1");
    double mixrev = stochastic_markup_revenue(Mechanism::mix(astar, rstar), qstar);
    if (std::fabs(mixrev - 1.0) > 1e-6)
        throw certification_error("fixed point check failed: mixture revenue != 1");
    EquilibriumSolution sol{qstar, rstar, astar, beta, {}};
    sol.certificates.push_back(cr.left);
    sol.certificates.push_back(cr.right);
    sol.certificates.push_back(
        {ao.ratio_lower, CertifiedBound::Kind::lower, 1e-10, cfg.slack, qstar,
         rstar, "ratio of the optimal markup at qbar*",
         ao.boundary ? "supremum at the r_max boundary" : "interior supremum"});
    sol.certificates.push_back(
        {1.0, CertifiedBound::Kind::upper, 0.0, 0.0, 0.093, cfg.r_tail_hi,
         "analytic tail assumption",
         "M_r(Tr_q) < 1 for q >= 0.093 and r > " +
             std::to_string(cfg.r_tail_hi) +
             " by the virtual-value argument (recorded, not numerically "
             "certified)"});
    return sol;
}

double second_derivative_inv_apx(double alpha, double r, double qbar) {
    if (!(qbar > 0.0 && qbar < 1.0) || !(r > 1.0))
        throw domain_error("second_derivative_inv_apx parameter outside domain");
    double d = r - 1.0;
    double w = 1.0 - qbar;
    double u = 1.0 + qbar * d;
    double L = std::log1p(d) - std::log1p(qbar * d);
    double W = 1.0 / u - L / (d * w);
    double Wp = -d / (u * u) + 1.0 / (w * u) - L / (d * w * w);
    double Wpp = 2.0 * d * d / (u * u * u) - d / (w * u * u) +
                 2.0 / (w * w * u) - 2.0 * L / (d * w * w * w);
    double s = 2.0 - qbar;
    double t1 = 4.0 * (1.0 - alpha) * r * Wp / (d * s * s);
    double t2 = 2.0 * (1.0 - alpha) * r * Wpp / (d * s);
    double t3 = (4.0 * (1.0 - alpha) * r * W + 2.0 * alpha * d) / (d * s * s * s);
    return t1 + t2 + t3;
}

bool r_tail_check(double qbar_min, double r_lo, double r_hi) {
    if (qbar_min < 0.093) throw domain_error("r_tail_check needs qbar_min >= 0.093");
    if (r_lo < 11.0) throw domain_error("r_tail_check needs r_lo >= 11");
    if (r_hi < r_lo) throw domain_error("r_tail_check needs r_hi >= r_lo");
    double target = 1.0 - 1e-9;
    double slack = 1e-12;
    double q = qbar_min;
    while (q < 1.0 - 1e-16) {
        // Cap M_r(Tr_q') <= 2(1-q') certifies the whole remaining interval.
        if (2.0 * (1.0 - q) + slack < target) return true;
        double bound;  // certified sup over r in [r_lo, r_hi] at q itself
        double analytic_all = r_hi * (1.0 - q);
        if (analytic_all + slack < target) {
            bound = analytic_all + slack;
        } else {
            double m0 = mtri(r_lo, q);
            double cap = m0 + 0.5 * std::max(1e-9, target - m0);
            bound = maxr_grid_upper(q, r_lo, r_hi, cap, slack).fx;
        }
        if (bound >= target) return false;
        // In-q lift from the left endpoint, as in the right crossing sweep.
        double q2max = 1.0 - bound * (1.0 - q) / target;
        q = std::min(1.0, q + std::max(1e-9, 0.9 * (q2max - q)));
    }
    return true;
}

}  // namespace piopt
