#include "piopt/experts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "piopt/rng.hpp"

namespace piopt {

namespace {

void check_means(const BernoulliMeans& means) {
    if (means.f.empty()) throw domain_error("means must be non-empty");
    for (double v : means.f)
        if (!(v >= 0.0 && v <= 1.0))
            throw domain_error("Bernoulli means must lie in [0,1]");
}

void check_matrix(const RewardMatrix& m) {
    if (m.n < 0 || m.k <= 0 ||
        m.rewards.size() != static_cast<std::size_t>(m.n))
        throw domain_error("malformed reward matrix");
    for (const auto& row : m.rewards) {
        if (row.size() != static_cast<std::size_t>(m.k))
            throw domain_error("malformed reward matrix row");
        for (int v : row)
            if (v != 0 && v != 1)
                throw domain_error("reward entries must be binary");
    }
}

std::vector<long long> column_sums(
    const std::vector<std::vector<int>>& history, int k) {
    std::vector<long long> v(k, 0);
    for (const auto& row : history)
        for (int j = 0; j < k; ++j) v[j] += row[j];
    return v;
}

// pow with the 0^0 := 1 convention used for impossible-but-unseen outcomes
double bpow(double base, long long e) {
    if (e == 0) return 1.0;
    return std::pow(base, static_cast<double>(e));
}

}  // namespace

bool BernoulliMeans::non_degenerate() const {
    if (f.empty()) return false;
    auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    if (!(*hi > *lo)) return false;
    for (double v : f)
        if (v > 0.0 && v < 1.0) return true;
    return false;
}

std::vector<double> ftl_policy(int t,
                               const std::vector<std::vector<int>>& history,
                               int k) {
    if (t < 1 || history.size() != static_cast<std::size_t>(t - 1))
        throw domain_error("ftl_policy: history must have t-1 rows");
    if (history.empty()) {
        if (k <= 0) throw domain_error("ftl_policy: round 1 needs k > 0");
        return std::vector<double>(k, 1.0 / k);
    }
    k = static_cast<int>(history[0].size());
    auto v = column_sums(history, k);
    long long best = *std::max_element(v.begin(), v.end());
    std::vector<double> p(k, 0.0);
    int ties = 0;
    for (int j = 0; j < k; ++j)
        if (v[j] == best) ++ties;
    for (int j = 0; j < k; ++j)
        if (v[j] == best) p[j] = 1.0 / ties;
    return p;
}

OnlinePolicy rwm_policy(double eta) {
    if (!(eta > 0.0)) throw domain_error("rwm_policy needs eta > 0");
    return [eta](int t, const std::vector<std::vector<int>>& history) {
        if (t < 1 || history.size() != static_cast<std::size_t>(t - 1))
            throw domain_error("rwm_policy: history must have t-1 rows");
        if (history.empty()) return std::vector<double>{};
        int k = static_cast<int>(history[0].size());
        auto v = column_sums(history, k);
        long long best = *std::max_element(v.begin(), v.end());
        std::vector<double> w(k);
        double tot = 0.0;
        for (int j = 0; j < k; ++j) {
            w[j] = std::exp(eta * static_cast<double>(v[j] - best));
            tot += w[j];
        }
        for (double& x : w) x /= tot;
        return w;
    };
}

double run_policy(const OnlinePolicy& policy, const RewardMatrix& m) {
    check_matrix(m);
    double total = 0.0;
    std::vector<std::vector<int>> history;
    history.reserve(m.n);
    for (int t = 1; t <= m.n; ++t) {
        std::vector<double> p = policy(t, history);
        if (p.empty()) p.assign(m.k, 1.0 / m.k);
        if (p.size() != static_cast<std::size_t>(m.k))
            throw domain_error("policy returned a vector of the wrong size");
        const auto& row = m.rewards[t - 1];
        for (int j = 0; j < m.k; ++j) total += p[j] * row[j];
        history.push_back(row);
    }
    return total;
}

int bih(const RewardMatrix& m) {
    check_matrix(m);
    if (m.n == 0) return 0;
    long long best = 0;
    for (int j = 0; j < m.k; ++j) {
        long long s = 0;
        for (int t = 0; t < m.n; ++t) s += m.rewards[t][j];
        best = std::max(best, s);
    }
    return static_cast<int>(best);
}

RewardMatrix alternating_instance(int n, int k) {
    if (n <= 0 || n % 2 != 0) throw domain_error("alternating_instance needs even n > 0");
    if (k < 2) throw domain_error("alternating_instance needs k >= 2");
    RewardMatrix m{n, k, {}};
    m.rewards.reserve(n);
    for (int t = 1; t <= n; ++t) {
        std::vector<int> row(k, t % 2 == 1 ? 0 : 1);
        row[0] = t % 2 == 1 ? 1 : 0;
        m.rewards.push_back(std::move(row));
    }
    return m;
}

namespace {

double expected_exact(const OnlinePolicy& policy, const BernoulliMeans& f,
                      int n) {
    int k = static_cast<int>(f.f.size());
    double total = 0.0;
    std::vector<std::vector<int>> history;
    // Row t's reward is independent of the history, so the round-t payoff is
    // <policy, f> averaged over histories of length t-1.
    std::function<void(int, double)> rec = [&](int t, double prob) {
        std::vector<double> p = policy(t, history);
        if (p.empty()) p.assign(k, 1.0 / k);
        double dot = 0.0;
        for (int j = 0; j < k; ++j) dot += p[j] * f.f[j];
        total += prob * dot;
        if (t == n) return;
        std::vector<int> row(k, 0);
        std::function<void(int, double)> fill = [&](int j, double pr) {
            if (pr == 0.0) return;
            if (j == k) {
                history.push_back(row);
                rec(t + 1, pr);
                history.pop_back();
                return;
            }
            row[j] = 1;
            fill(j + 1, pr * f.f[j]);
            row[j] = 0;
            fill(j + 1, pr * (1.0 - f.f[j]));
        };
        fill(0, prob);
    };
    rec(1, 1.0);
    return total;
}

double expected_mc(const OnlinePolicy& policy, const BernoulliMeans& f, int n,
                   const McOptions& opts) {
    int k = static_cast<int>(f.f.size());
    double sum = 0.0;
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        std::uint64_t stream = shard_stream(opts.seed, s);
        std::vector<std::vector<int>> history;
        std::uint64_t ctr = 0;
        for (int t = 1; t <= n; ++t) {
            std::vector<double> p = policy(t, history);
            if (p.empty()) p.assign(k, 1.0 / k);
            for (int j = 0; j < k; ++j) sum += p[j] * f.f[j];
            std::vector<int> row(k);
            for (int j = 0; j < k; ++j)
                row[j] = counter_uniform(stream, ctr++) <= f.f[j] ? 1 : 0;
            history.push_back(std::move(row));
        }
    }
    return sum / static_cast<double>(opts.samples);
}

}  // namespace

double expected_performance(const OnlinePolicy& policy,
                            const BernoulliMeans& means, int n,
                            const McOptions& opts) {
    check_means(means);
    if (n < 1) throw domain_error("expected_performance needs n >= 1");
    long long bits = static_cast<long long>(n) * means.f.size();
    if (bits <= 24) return expected_exact(policy, means, n);
    if (!opts.monte_carlo)
        throw size_error("exact mode needs n*k <= 24; enable Monte Carlo");
    return expected_mc(policy, means, n, opts);
}

bool posterior_leader_check(const BernoulliMeans& pool,
                            const std::vector<std::vector<int>>& history) {
    check_means(pool);
    int k = static_cast<int>(pool.f.size());
    if (k > 8) throw size_error("posterior_leader_check needs k <= 8");
    for (const auto& row : history)
        if (row.size() != static_cast<std::size_t>(k))
            throw domain_error("history row has the wrong width");
    auto v = column_sums(history, k);
    long long t1 = static_cast<long long>(history.size());

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> post(k, 0.0);
    double total = 0.0;
    do {
        double w = 1.0;
        for (int j = 0; j < k; ++j)
            w *= bpow(pool.f[perm[j]], v[j]) *
                 bpow(1.0 - pool.f[perm[j]], t1 - v[j]);
        total += w;
        for (int j = 0; j < k; ++j) post[j] += w * pool.f[perm[j]];
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (total <= 0.0) return true;  // history impossible under every labeling
    for (double& x : post) x /= total;

    long long vbest = *std::max_element(v.begin(), v.end());
    double pbest = *std::max_element(post.begin(), post.end());
    double tol = 1e-12 * std::max(1.0, std::fabs(pbest));
    for (int j = 0; j < k; ++j) {
        bool lead_v = v[j] == vbest;
        bool lead_p = post[j] >= pbest - tol;
        if (lead_v != lead_p) return false;
    }
    return true;
}

std::vector<double> ftl_round_payoffs(const BernoulliMeans& means, int n) {
    check_means(means);
    if (n < 1) throw domain_error("ftl_round_payoffs needs n >= 1");
    int k = static_cast<int>(means.f.size());
    if (k > 8 || std::pow(static_cast<double>(n), k) > (1 << 24))
        throw size_error("ftl_round_payoffs: count-vector enumeration too large");
    std::vector<double> out;
    out.reserve(n);
    for (int t = 1; t <= n; ++t) {
        // V_j ~ independent Binomial(t-1, f_j); enumerate the count vector.
        int trials = t - 1;
        std::vector<std::vector<double>> pmf(k,
                                             std::vector<double>(trials + 1));
        for (int j = 0; j < k; ++j) {
            pmf[j][0] = bpow(1.0 - means.f[j], trials);
            for (int c = 1; c <= trials; ++c) {
                double binom = 1.0;
                for (int i = 0; i < c; ++i)
                    binom *= static_cast<double>(trials - i) / (c - i);
                pmf[j][c] = binom * bpow(means.f[j], c) *
                            bpow(1.0 - means.f[j], trials - c);
            }
        }
        double e = 0.0;
        std::vector<int> c(k, 0);
        std::function<void(int, double)> rec = [&](int j, double w) {
            if (w == 0.0) return;
            if (j == k) {
                int best = *std::max_element(c.begin(), c.end());
                double s = 0.0;
                int ties = 0;
                for (int i = 0; i < k; ++i)
                    if (c[i] == best) {
                        s += means.f[i];
                        ++ties;
                    }
                e += w * s / ties;
                return;
            }
            for (int cc = 0; cc <= trials; ++cc) {
                c[j] = cc;
                rec(j + 1, w * pmf[j][cc]);
            }
        };
        rec(0, 1.0);
        out.push_back(e);
    }
    return out;
}

std::string LearningGapReport::to_json() const {
    return nlohmann::json{{"ftl_value", ftl_value},
                          {"scaled_bench", scaled_bench},
                          {"opt", opt},
                          {"strict", strict}}
        .dump();
}

LearningGapReport gap_learning_check(const BernoulliMeans& means, int n) {
    check_means(means);
    if (!means.non_degenerate())
        throw constraint_error("gap_learning_check needs non-degenerate means");
    auto rounds = ftl_round_payoffs(means, n);
    double ftl = std::accumulate(rounds.begin(), rounds.end(), 0.0);
    double scaled = n * rounds.back();
    double opt = n * *std::max_element(means.f.begin(), means.f.end());
    LearningGapReport rep{ftl, scaled, opt,
                          ftl < scaled && scaled <= opt + 1e-12};
    return rep;
}

}  // namespace piopt
