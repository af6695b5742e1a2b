#include "piopt.h"

#include <cmath>
#include <cstring>
#include <string>

#include "json.hpp"
#include "piopt/benchmark.hpp"
#include "piopt/experts.hpp"
#include "piopt/parallel.hpp"
#include "piopt/pricing.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class F>
piopt_status guard(F&& f) {
    try {
        f();
        return PIOPT_OK;
    } catch (const piopt::domain_error& e) {
        g_last_error = e.what();
        return PIOPT_ERR_DOMAIN;
    } catch (const piopt::constraint_error& e) {
        g_last_error = e.what();
        return PIOPT_ERR_CONSTRAINT;
    } catch (const piopt::certification_error& e) {
        g_last_error = e.what();
        return PIOPT_ERR_CERTIFICATION;
    } catch (const piopt::bracket_error& e) {
        g_last_error = e.what();
        return PIOPT_ERR_BRACKET;
    } catch (const piopt::size_error& e) {
        g_last_error = e.what();
        return PIOPT_ERR_SIZE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PIOPT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return PIOPT_ERR_INTERNAL;
    }
}

piopt_status invalid(const char* msg) {
    g_last_error = msg;
    return PIOPT_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct piopt_curve {
    piopt::Curve c;
};
struct piopt_mech {
    piopt::Mechanism m;
};

extern "C" {

const char* piopt_last_error(void) { return g_last_error.c_str(); }

void piopt_string_free(char* s) { delete[] s; }

void piopt_set_threads(int n) { piopt::set_num_threads(n); }

piopt_status piopt_curve_triangle(double qbar, piopt_curve** out) {
    if (!out) return invalid("null output pointer");
    return guard([&] { *out = new piopt_curve{piopt::triangle_curve(qbar)}; });
}

piopt_status piopt_curve_quadrilateral(double qbar, double qprime, double r,
                                       piopt_curve** out) {
    if (!out) return invalid("null output pointer");
    return guard([&] {
        *out = new piopt_curve{piopt::quadrilateral_curve({qbar, qprime, r})};
    });
}

piopt_status piopt_curve_fbar(double q1, double q2, double d1, double d2,
                              piopt_curve** out) {
    if (!out) return invalid("null output pointer");
    return guard(
        [&] { *out = new piopt_curve{piopt::fbar_curve({q1, q2, d1, d2})}; });
}

void piopt_curve_free(piopt_curve* c) { delete c; }

piopt_status piopt_curve_revenue_at(const piopt_curve* c, double q,
                                    double* out) {
    if (!c || !out) return invalid("null pointer");
    return guard([&] { *out = c->c.revenue_at(q); });
}

piopt_status piopt_curve_value_at(const piopt_curve* c, double q, double* out) {
    if (!c || !out) return invalid("null pointer");
    return guard([&] { *out = c->c.value_at(q); });
}

piopt_status piopt_curve_quantile_at_price(const piopt_curve* c, double p,
                                           double* out) {
    if (!c || !out) return invalid("null pointer");
    return guard([&] { *out = c->c.quantile_at_price(p); });
}

piopt_status piopt_curve_opt_revenue(const piopt_curve* c, double* out) {
    if (!c || !out) return invalid("null pointer");
    return guard([&] { *out = piopt::opt_revenue_curve(c->c); });
}

piopt_status piopt_curve_json(const piopt_curve* c, char** json_out) {
    if (!c || !json_out) return invalid("null pointer");
    return guard([&] { *json_out = dup_string(c->c.to_json()); });
}

piopt_status piopt_mech_spa(piopt_mech** out) {
    if (!out) return invalid("null output pointer");
    return guard([&] { *out = new piopt_mech{piopt::Mechanism::spa()}; });
}

piopt_status piopt_mech_markup(double r, piopt_mech** out) {
    if (!out) return invalid("null output pointer");
    return guard([&] { *out = new piopt_mech{piopt::Mechanism::markup(r)}; });
}

piopt_status piopt_mech_mix(double alpha, double r, piopt_mech** out) {
    if (!out) return invalid("null output pointer");
    return guard(
        [&] { *out = new piopt_mech{piopt::Mechanism::mix(alpha, r)}; });
}

piopt_status piopt_mech_atoms(const double* weights, const double* rs, int n,
                              piopt_mech** out) {
    if (!weights || !rs || !out) return invalid("null pointer");
    if (n <= 0) return invalid("atom count must be positive");
    return guard([&] {
        std::vector<piopt::MarkupAtom> atoms;
        atoms.reserve(n);
        for (int i = 0; i < n; ++i) atoms.push_back({weights[i], rs[i]});
        *out = new piopt_mech{piopt::Mechanism(std::move(atoms))};
    });
}

void piopt_mech_free(piopt_mech* m) { delete m; }

piopt_status piopt_markup_revenue_triangle(double r, double qbar, double* out) {
    if (!out) return invalid("null output pointer");
    return guard([&] { *out = piopt::markup_revenue_triangle(r, qbar); });
}

piopt_status piopt_markup_revenue(double r, const piopt_curve* c,
                                  int use_quadrature, double* out) {
    if (!c || !out) return invalid("null pointer");
    return guard([&] {
        *out = piopt::markup_revenue_curve(
            r, c->c,
            use_quadrature ? piopt::Integration::quadrature
                           : piopt::Integration::analytic);
    });
}

piopt_status piopt_mech_revenue(const piopt_mech* m, const piopt_curve* c,
                                double* out) {
    if (!m || !c || !out) return invalid("null pointer");
    return guard([&] { *out = piopt::stochastic_markup_revenue(m->m, c->c); });
}

piopt_status piopt_mech_revenue_triangle(const piopt_mech* m, double qbar,
                                         double* out) {
    if (!m || !out) return invalid("null pointer");
    return guard([&] { *out = piopt::stochastic_markup_revenue(m->m, qbar); });
}

piopt_status piopt_opt_revenue_truncated(double qbar, double* out) {
    if (!out) return invalid("null output pointer");
    return guard([&] { *out = piopt::opt_revenue_truncated(qbar); });
}

piopt_status piopt_revenue_report(const piopt_mech* m, const piopt_curve* c,
                                  uint64_t mc_samples, uint64_t seed,
                                  char** json_out) {
    if (!m || !c || !json_out) return invalid("null pointer");
    return guard([&] {
        nlohmann::json j;
        double analytic = piopt::stochastic_markup_revenue(m->m, c->c);
        double quad = 0.0;
        for (const auto& a : m->m.atoms()) {
            if (a.r <= 1.0 + piopt::kRMinGap)
                quad += a.weight * piopt::spa_revenue(c->c);
            else
                quad += a.weight *
                        piopt::markup_revenue_curve(
                            a.r, c->c, piopt::Integration::quadrature);
        }
        j["closed_form"] = analytic;
        j["quadrature"] = quad;
        double opt = piopt::opt_revenue_curve(c->c);
        j["optimal_revenue"] = opt;
        j["ratio"] = opt / analytic;
        if (mc_samples > 0) {
            auto mc = piopt::mc_simulate(m->m, c->c, mc_samples, seed);
            j["mc"] = nlohmann::json::parse(mc.to_json());
        }
        j["mechanism"] = nlohmann::json::parse(m->m.to_json());
        j["curve"] = nlohmann::json::parse(c->c.to_json());
        *json_out = dup_string(j.dump(2));
    });
}

piopt_status piopt_solve(double grid_eps, double r_max, char** json_out) {
    if (!json_out) return invalid("null output pointer");
    if (!(grid_eps > 0.0)) return invalid("grid_eps must be positive");
    if (!(r_max > 1.0)) return invalid("r_max must exceed 1");
    return guard([&] {
        piopt::SolverConfig cfg{};
        cfg.grid_eps = grid_eps;
        cfg.r_max = r_max;
        *json_out = dup_string(piopt::solve_equilibrium(cfg).to_json());
    });
}

piopt_status piopt_gap(const char* mode, double delta, int* established,
                       char** json_out) {
    if (!mode || !established || !json_out) return invalid("null pointer");
    std::string m = mode;
    if (m != "triangle" && m != "regular")
        return invalid("mode must be 'triangle' or 'regular'");
    return guard([&] {
        piopt::GapReport rep = m == "triangle"
                                   ? piopt::verify_gap_triangle(delta)
                                   : piopt::verify_gap_regular();
        *established = rep.established ? 1 : 0;
        *json_out = dup_string(rep.to_json());
    });
}

piopt_status piopt_dominated_bound(double r, double q1, double q2, double d1,
                                   double d2, double* out) {
    if (!out) return invalid("null output pointer");
    return guard([&] {
        *out = piopt::markup_rev_upper_bound_dominated(r, {q1, q2, d1, d2});
    });
}

piopt_status piopt_second_derivative_inv_apx(double r, double alpha,
                                             double qbar, double* out) {
    if (!out) return invalid("null output pointer");
    return guard(
        [&] { *out = piopt::second_derivative_inv_apx(alpha, r, qbar); });
}

piopt_status piopt_experts_alternating(int n, int k, const char* algo,
                                       double eta, double* payoff, double* bih,
                                       double* regret) {
    if (!algo || !payoff || !bih || !regret) return invalid("null pointer");
    std::string a = algo;
    if (a != "ftl" && a != "rwm") return invalid("algo must be 'ftl' or 'rwm'");
    return guard([&] {
        piopt::RewardMatrix m = piopt::alternating_instance(n, k);
        piopt::OnlinePolicy pol;
        if (a == "ftl")
            pol = [k](int t, const std::vector<std::vector<int>>& h) {
                return piopt::ftl_policy(t, h, k);
            };
        else
            pol = piopt::rwm_policy(eta);
        *payoff = piopt::run_policy(pol, m);
        *bih = static_cast<double>(piopt::bih(m));
        *regret = *bih - *payoff;
    });
}

piopt_status piopt_explore(const char* target, char** json_out) {
    if (!target || !json_out) return invalid("null pointer");
    std::string t = target;
    return guard([&] {
        nlohmann::json j;
        if (t == "quad-maxmin") {
            auto res = piopt::quad_pricing_maxmin();
            j = {{"beta", res.beta}, {"alpha", res.alpha}, {"q", res.q}};
        } else if (t == "anonymous") {
            auto p = piopt::anon_truncation_params();
            j = {{"gamma", p.gamma}, {"beta", p.beta}, {"alpha", p.alpha}};
        } else if (t == "indifference") {
            std::vector<double> grid;
            for (int i = 0; i <= 60; ++i)
                grid.push_back(std::pow(10.0, i / 10.0));
            auto rep = piopt::verify_indifference(grid);
            j = nlohmann::json::parse(rep.to_json());
        } else {
            throw piopt::domain_error(
                "target must be one of quad-maxmin, anonymous, indifference");
        }
        *json_out = dup_string(j.dump(2));
    });
}

}  // extern "C"
