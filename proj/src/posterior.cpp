#include "calf/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace calf {

RelabeledDraws relabel(const ChainDraws& draws) {
    if (draws.states.empty()) throw std::invalid_argument("no draws to relabel");
    RelabeledDraws out;
    out.draws = draws;
    out.permutations.reserve(draws.states.size());
    for (auto& state : out.draws.states) {
        const int K = state.K;
        std::vector<int> perm(K);
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
            return state.coefficients(a, a) < state.coefficients(b, b);
        });
        // rank[old] = new position
        std::vector<int> rank(K);
        for (int k = 0; k < K; ++k) rank[perm[k]] = k;

        BlockCoefficients beta(K);
        beta.beta0 = state.coefficients.beta0;
        for (int k = 0; k < K; ++k)
            for (int l = k; l < K; ++l)
                beta.ref(k, l) = state.coefficients(perm[k], perm[l]);
        state.coefficients = std::move(beta);

        for (int& lab : state.membership) lab = rank[lab];

        std::vector<double> alpha(state.alpha.size());
        for (int i = 0; i < state.n(); ++i)
            for (int k = 0; k < K; ++k)
                alpha[std::size_t(i) * K + k] = state.alpha_at(i, perm[k]);
        state.alpha = std::move(alpha);

        out.permutations.push_back(std::move(perm));
    }
    return out;
}

std::vector<int> hard_membership(std::span<const ChainDraws> relabeled) {
    if (relabeled.empty() || relabeled[0].states.empty())
        throw std::invalid_argument("no draws");
    const int n = relabeled[0].states[0].n();
    const int K = relabeled[0].states[0].K;
    std::vector<long long> tally(std::size_t(n) * K, 0);
    for (const auto& chain : relabeled)
        for (const auto& state : chain.states)
            for (int i = 0; i < n; ++i) ++tally[std::size_t(i) * K + state.membership[i]];
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int k = 1; k < K; ++k)
            if (tally[std::size_t(i) * K + k] > tally[std::size_t(i) * K + best]) best = k;
        labels[i] = best;
    }
    return labels;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
    const std::size_t J = chains.size();
    if (J < 2) throw std::invalid_argument("need at least two chains");
    const std::size_t m = chains[0].size();
    if (m < 2) throw std::invalid_argument("chains too short");
    for (const auto& c : chains)
        if (c.size() != m) throw std::invalid_argument("unequal chain lengths");

    std::vector<double> means(J);
    double grand = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        means[j] = std::accumulate(chains[j].begin(), chains[j].end(), 0.0) / m;
        grand += means[j];
    }
    grand /= J;

    double B = 0.0;
    for (double mj : means) B += (mj - grand) * (mj - grand);
    B *= double(m) / (J - 1);

    double W = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        double s2 = 0.0;
        for (double x : chains[j]) s2 += (x - means[j]) * (x - means[j]);
        W += s2 / (m - 1);
    }
    W /= J;
    if (!(W > 0.0)) throw std::invalid_argument("zero within-chain variance");

    const double vhat = (double(m - 1) / m) * W + B / m;
    return std::sqrt(vhat / W);
}

WaicResult waic(std::span<const double> pointwise_ll, std::size_t n_draws,
                std::size_t n_dyads) {
    if (n_draws == 0 || n_dyads == 0) throw std::invalid_argument("empty table");
    if (pointwise_ll.size() != n_draws * n_dyads)
        throw std::invalid_argument("table size mismatch");
    WaicResult res;
    for (std::size_t d = 0; d < n_dyads; ++d) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n_draws; ++s)
            mx = std::max(mx, pointwise_ll[s * n_dyads + d]);
        double sum_exp = 0.0, mean = 0.0;
        for (std::size_t s = 0; s < n_draws; ++s) {
            const double v = pointwise_ll[s * n_dyads + d];
            sum_exp += std::exp(v - mx);
            mean += v;
        }
        mean /= n_draws;
        res.lppd += mx + std::log(sum_exp / n_draws);
        if (n_draws > 1) {
            double ss = 0.0;
            for (std::size_t s = 0; s < n_draws; ++s) {
                const double d2 = pointwise_ll[s * n_dyads + d] - mean;
                ss += d2 * d2;
            }
            res.p_waic += ss / (n_draws - 1);
        }
    }
    res.waic = -2.0 * (res.lppd - res.p_waic);
    return res;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * (values.size() - 1);
    const std::size_t lo = std::size_t(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - double(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

namespace {

ScalarSummary summarize_scalar(const std::vector<std::vector<double>>& per_chain) {
    ScalarSummary s;
    std::vector<double> pooled;
    for (const auto& c : per_chain) pooled.insert(pooled.end(), c.begin(), c.end());
    s.mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / pooled.size();
    s.median = quantile(pooled, 0.5);
    s.lower = quantile(pooled, 0.025);
    s.upper = quantile(pooled, 0.975);
    if (per_chain.size() >= 2) {
        try {
            s.rhat = gelman_rubin(per_chain);
        } catch (const std::invalid_argument&) {
            s.rhat = std::numeric_limits<double>::quiet_NaN();
        }
    } else {
        s.rhat = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
}

}  // namespace

FitReport summarize(std::span<const ChainDraws> chains, int K) {
    if (chains.empty() || chains[0].states.empty())
        throw std::invalid_argument("no draws to summarize");

    std::vector<ChainDraws> rel;
    rel.reserve(chains.size());
    for (const auto& c : chains) rel.push_back(relabel(c).draws);

    FitReport rep;
    rep.K = K;
    rep.n_chains = int(rel.size());
    rep.draws_per_chain = int(rel[0].states.size());
    const int n = rel[0].states[0].n();
    const int tri = BlockCoefficients::tri_size(K);

    auto collect = [&](auto&& getter) {
        std::vector<std::vector<double>> per_chain;
        for (const auto& c : rel) {
            std::vector<double> seq;
            seq.reserve(c.states.size());
            for (const auto& st : c.states) seq.push_back(getter(st));
            per_chain.push_back(std::move(seq));
        }
        return per_chain;
    };

    rep.beta0 = summarize_scalar(collect([](const ModelState& st) {
        return st.coefficients.beta0;
    }));
    rep.beta_upper.resize(tri);
    for (int t = 0; t < tri; ++t)
        rep.beta_upper[t] = summarize_scalar(collect([t](const ModelState& st) {
            return st.coefficients.upper[t];
        }));
    rep.sigma2 = summarize_scalar(collect([](const ModelState& st) {
        return st.sigma2;
    }));
    {
        double acc = 0.0;
        std::size_t cnt = 0;
        for (const auto& c : rel)
            for (const auto& st : c.states) {
                acc += std::sqrt(st.sigma2);
                ++cnt;
            }
        rep.sigma_mean = acc / cnt;
    }

    rep.theta_mean.resize(n);
    rep.theta_lower.resize(n);
    rep.theta_upper.resize(n);
    std::vector<double> node_draws;
    for (int i = 0; i < n; ++i) {
        node_draws.clear();
        for (const auto& c : rel)
            for (const auto& st : c.states) node_draws.push_back(st.theta[i]);
        rep.theta_mean[i] =
            std::accumulate(node_draws.begin(), node_draws.end(), 0.0) / node_draws.size();
        rep.theta_lower[i] = quantile(node_draws, 0.025);
        rep.theta_upper[i] = quantile(node_draws, 0.975);
    }

    rep.hard_labels = hard_membership(rel);

    // pooled WAIC over post-relabeling chains (relabeling leaves pointwise
    // terms unchanged)
    std::vector<double> pooled;
    std::size_t total_draws = 0;
    const std::size_t nd = rel[0].n_dyads;
    for (const auto& c : rel) {
        pooled.insert(pooled.end(), c.pointwise_ll.begin(), c.pointwise_ll.end());
        total_draws += c.states.size();
    }
    rep.waic = waic(pooled, total_draws, nd);

    double ab = 0.0, at = 0.0;
    for (const auto& c : rel) {
        ab += c.accept_rate_beta;
        at += c.accept_rate_theta;
    }
    rep.accept_rate_beta = ab / rel.size();
    rep.accept_rate_theta = at / rel.size();
    return rep;
}

KSelection select_K(const Network& net, const NodeData& nd,
                    std::span<const int> K_range, const PriorConfig& prior,
                    const McmcConfig& mcmc_cfg, const InitConfig& init_cfg) {
    if (K_range.empty()) throw std::invalid_argument("empty K range");
    KSelection sel;
    double best_waic = std::numeric_limits<double>::infinity();
    for (int K : K_range) {
        try {
            if (K > net.n) throw std::invalid_argument("K exceeds n");
            McmcConfig cfg_k = mcmc_cfg;
            cfg_k.seed = Rng(mcmc_cfg.seed, std::uint64_t(K)).next_u64();
            auto chains = run_chains(net, nd, K, prior, cfg_k, init_cfg);
            FitReport rep = summarize(chains, K);
            if (!std::isfinite(rep.waic.waic)) throw std::runtime_error("non-finite WAIC");
            sel.ks.push_back(K);
            sel.reports.push_back(std::move(rep));
            if (sel.reports.back().waic.waic < best_waic) {
                best_waic = sel.reports.back().waic.waic;
                sel.best_K = K;
            }
        } catch (const std::exception&) {
            sel.failed.push_back(K);
        }
    }
    if (sel.ks.empty()) throw std::runtime_error("every K in the range failed");
    return sel;
}

}  // namespace calf
