// Command-line front end; all computation goes through the C API in piopt.h.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "piopt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

int status_exit(piopt_status st) {
    switch (st) {
        case PIOPT_OK:
            return kExitOk;
        case PIOPT_ERR_CERTIFICATION:
            return kExitVerification;
        default:
            return kExitUsage;
    }
}

int fail(piopt_status st) {
    std::cerr << "error: " << piopt_last_error() << "\n";
    return status_exit(st);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    out << text << "\n";
}

struct CurveHandle {
    piopt_curve* c = nullptr;
    ~CurveHandle() { piopt_curve_free(c); }
};

struct MechHandle {
    piopt_mech* m = nullptr;
    ~MechHandle() { piopt_mech_free(m); }
};

struct StringHandle {
    char* s = nullptr;
    ~StringHandle() { piopt_string_free(s); }
};

piopt_status build_curve(const std::vector<double>& tri,
                         const std::vector<double>& quad,
                         const std::vector<double>& fbar, CurveHandle& out) {
    if (!tri.empty()) return piopt_curve_triangle(tri[0], &out.c);
    if (!quad.empty())
        return piopt_curve_quadrilateral(quad[0], quad[1], quad[2], &out.c);
    return piopt_curve_fbar(fbar[0], fbar[1], fbar[2], fbar[3], &out.c);
}

piopt_status build_mech(bool spa, const std::vector<double>& markup,
                        const std::vector<double>& mix,
                        const std::vector<std::string>& atoms,
                        MechHandle& out) {
    if (spa) return piopt_mech_spa(&out.m);
    if (!markup.empty()) return piopt_mech_markup(markup[0], &out.m);
    if (!mix.empty()) return piopt_mech_mix(mix[0], mix[1], &out.m);
    std::vector<double> ws, rs;
    for (const auto& a : atoms) {
        auto sep = a.find(':');
        if (sep == std::string::npos) return PIOPT_ERR_INVALID_ARGUMENT;
        ws.push_back(std::stod(a.substr(0, sep)));
        rs.push_back(std::stod(a.substr(sep + 1)));
    }
    return piopt_mech_atoms(ws.data(), rs.data(), static_cast<int>(ws.size()),
                            &out.m);
}

int write_apx_csv(const std::string& path, double alpha, double r_star) {
    MechHandle spa, mix;
    if (piopt_mech_spa(&spa.m) != PIOPT_OK) return kExitUsage;
    if (piopt_mech_mix(alpha, r_star, &mix.m) != PIOPT_OK) return kExitUsage;
    std::ofstream out(path);
    out << "qbar,apx_spa,apx_mix\r\n";
    char buf[128];
    for (int i = 0; i <= 990; ++i) {
        double q = i / 1000.0;
        double opt = 0.0, rev_spa = 0.0, rev_mix = 0.0;
        if (piopt_opt_revenue_truncated(q, &opt) != PIOPT_OK ||
            piopt_mech_revenue_triangle(spa.m, q, &rev_spa) != PIOPT_OK ||
            piopt_mech_revenue_triangle(mix.m, q, &rev_mix) != PIOPT_OK)
            return kExitUsage;
        std::snprintf(buf, sizeof buf, "%.6f,%.12g,%.12g\r\n", q,
                      opt / rev_spa, opt / rev_mix);
        out << buf;
    }
    return kExitOk;
}

int write_markup_csv(const std::string& path, double qbar) {
    std::ofstream out(path);
    out << "r,markup_revenue\r\n";
    char buf[128];
    for (int i = 1; i <= 1000; ++i) {
        double r = 1.0 + i / 100.0;
        double rev = 0.0;
        if (piopt_markup_revenue_triangle(r, qbar, &rev) != PIOPT_OK)
            return kExitUsage;
        std::snprintf(buf, sizeof buf, "%.6f,%.12g\r\n", r, rev);
        out << buf;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prior-independent auction toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads");

    // solve
    auto* solve = app.add_subcommand("solve", "solve the zero-sum equilibrium");
    double grid_eps = 1e-6, r_max = 11.0;
    std::string solve_out;
    solve->add_option("--grid-eps", grid_eps, "crossing localization width");
    solve->add_option("--r-max", r_max, "markup search ceiling");
    solve->add_option("--out", solve_out, "output path (default stdout)");

    // revenue
    auto* revenue = app.add_subcommand("revenue", "evaluate mechanism revenue");
    std::vector<double> tri, quad, fbar, markup, mix;
    bool spa = false;
    std::vector<std::string> atoms;
    std::uint64_t mc_samples = 0, seed = 1;
    std::string rev_out;
    auto* tri_opt = revenue->add_option("--triangle", tri, "triangle qbar")
                        ->expected(1);
    auto* quad_opt =
        revenue->add_option("--quad", quad, "quadrilateral qbar,qprime,r")
            ->expected(3)
            ->delimiter(',');
    auto* fbar_opt = revenue->add_option("--fbar", fbar, "envelope q1,q2,d1,d2")
                         ->expected(4)
                         ->delimiter(',');
    tri_opt->excludes(quad_opt)->excludes(fbar_opt);
    quad_opt->excludes(fbar_opt);
    auto* spa_opt = revenue->add_flag("--spa", spa, "second-price auction");
    auto* markup_opt =
        revenue->add_option("--markup", markup, "r-markup")->expected(1);
    auto* mix_opt = revenue->add_option("--mix", mix, "mixture alpha,r")
                        ->expected(2)
                        ->delimiter(',');
    auto* atoms_opt = revenue->add_option("--atoms", atoms,
                                          "atom list weight:r[,weight:r...]")
                          ->delimiter(',');
    spa_opt->excludes(markup_opt)->excludes(mix_opt)->excludes(atoms_opt);
    markup_opt->excludes(mix_opt)->excludes(atoms_opt);
    mix_opt->excludes(atoms_opt);
    revenue->add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
    revenue->add_option("--seed", seed, "Monte Carlo seed");
    revenue->add_option("--out", rev_out, "output path (default stdout)");

    // gap
    auto* gap = app.add_subcommand("gap", "run a gap verification ledger");
    std::string mode = "triangle", gap_out, csv_apx, csv_markup;
    double delta = 0.00154;
    gap->add_option("--mode", mode, "triangle or regular")
        ->check(CLI::IsMember({"triangle", "regular"}));
    gap->add_option("--delta", delta, "benchmark perturbation (triangle mode)");
    gap->add_option("--out", gap_out, "output path (default stdout)");
    gap->add_option("--csv-apx", csv_apx,
                    "also write qbar,apx_spa,apx_mix plot data");
    gap->add_option("--csv-markup", csv_markup,
                    "also write r,markup_revenue plot data at qbar*");

    // experts
    auto* experts = app.add_subcommand("experts", "online learning runs");
    std::string instance = "alternating", algo = "ftl", exp_out;
    int rounds = 100, nexperts = 4;
    double eta = 0.5;
    experts->add_option("--instance", instance, "instance family")
        ->check(CLI::IsMember({"alternating"}));
    experts->add_option("--rounds", rounds, "number of rounds (even)");
    experts->add_option("--experts", nexperts, "number of experts");
    experts->add_option("--algo", algo, "ftl or rwm")
        ->check(CLI::IsMember({"ftl", "rwm"}));
    experts->add_option("--eta", eta, "rwm learning rate");
    experts->add_option("--out", exp_out, "output path (default stdout)");

    // explore
    auto* explore = app.add_subcommand("explore", "pricing explorations");
    std::string target = "anonymous", expl_out;
    explore->add_option("--target", target,
                        "quad-maxmin, anonymous, or indifference")
        ->check(CLI::IsMember({"quad-maxmin", "anonymous", "indifference"}));
    explore->add_option("--out", expl_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (threads > 0) piopt_set_threads(threads);

    if (solve->parsed()) {
        if (!(grid_eps > 0.0) || !(r_max > 1.0)) {
            std::cerr << "error: grid-eps must be > 0 and r-max > 1\n";
            return kExitUsage;
        }
        StringHandle json;
        piopt_status st = piopt_solve(grid_eps, r_max, &json.s);
        if (st != PIOPT_OK) return fail(st);
        emit(json.s, solve_out);
        return kExitOk;
    }

    if (revenue->parsed()) {
        if (tri.empty() && quad.empty() && fbar.empty()) {
            std::cerr << "error: pick a curve (--triangle/--quad/--fbar)\n";
            return kExitUsage;
        }
        if (!spa && markup.empty() && mix.empty() && atoms.empty()) {
            std::cerr << "error: pick a mechanism "
                         "(--spa/--markup/--mix/--atoms)\n";
            return kExitUsage;
        }
        CurveHandle curve;
        piopt_status st = build_curve(tri, quad, fbar, curve);
        if (st != PIOPT_OK) return fail(st);
        MechHandle mech;
        st = build_mech(spa, markup, mix, atoms, mech);
        if (st != PIOPT_OK) return fail(st);
        StringHandle json;
        st = piopt_revenue_report(mech.m, curve.c, mc_samples, seed, &json.s);
        if (st != PIOPT_OK) return fail(st);
        emit(json.s, rev_out);
        return kExitOk;
    }

    if (gap->parsed()) {
        int established = 0;
        StringHandle json;
        piopt_status st = piopt_gap(mode.c_str(), delta, &established, &json.s);
        if (st != PIOPT_OK) return fail(st);
        emit(json.s, gap_out);
        if (!csv_apx.empty() || !csv_markup.empty()) {
            StringHandle sol;
            st = piopt_solve(1e-6, 11.0, &sol.s);
            if (st != PIOPT_OK) return fail(st);
            auto j = nlohmann::json::parse(std::string(sol.s));
            if (!csv_apx.empty()) {
                int rc = write_apx_csv(csv_apx, j["alpha_star"].get<double>(),
                                       j["r_star"].get<double>());
                if (rc != kExitOk) return fail(PIOPT_ERR_INTERNAL);
            }
            if (!csv_markup.empty()) {
                int rc =
                    write_markup_csv(csv_markup, j["qbar_star"].get<double>());
                if (rc != kExitOk) return fail(PIOPT_ERR_INTERNAL);
            }
        }
        return established ? kExitOk : kExitVerification;
    }

    if (experts->parsed()) {
        double payoff = 0.0, bench = 0.0, regret = 0.0;
        piopt_status st = piopt_experts_alternating(
            rounds, nexperts, algo.c_str(), eta, &payoff, &bench, &regret);
        if (st != PIOPT_OK) return fail(st);
        nlohmann::json j{{"instance", instance}, {"rounds", rounds},
                         {"experts", nexperts},  {"algo", algo},
                         {"payoff", payoff},     {"best_in_hindsight", bench},
                         {"regret", regret}};
        if (algo == "rwm") j["eta"] = eta;
        emit(j.dump(2), exp_out);
        return kExitOk;
    }

    if (explore->parsed()) {
        StringHandle json;
        piopt_status st = piopt_explore(target.c_str(), &json.s);
        if (st != PIOPT_OK) return fail(st);
        emit(json.s, expl_out);
        return kExitOk;
    }

    return kExitUsage;
}
