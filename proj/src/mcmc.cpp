#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "calf/inference.hpp"

namespace calf {

void McmcConfig::validate() const {
    if (burn_in < 0) throw std::invalid_argument("negative burn-in");
    if (iterations <= 0) throw std::invalid_argument("iterations must be positive");
    if (thin < 1) throw std::invalid_argument("thin must be >= 1");
    if (n_chains < 1) throw std::invalid_argument("need at least one chain");
    if (!(target_accept > 0.0 && target_accept < 1.0))
        throw std::invalid_argument("target_accept outside (0,1)");
}

double sample_sigma2(std::span<const double> theta, double a, double b, Rng& rng) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("IG parameters must be positive");
    double ss = 0.0;
    for (double t : theta) ss += t * t;
    return rng.inverse_gamma(a + theta.size() / 2.0, b + ss / 2.0);
}

namespace {

double prior_mean(const PriorConfig& prior, int component) {
    if (prior.mu.empty()) return 0.0;
    return prior.mu[component];
}

// log N(x; m, s^2) up to the additive constant shared by both proposal states
double log_normal_kernel(double x, double m, double var) {
    const double d = x - m;
    return -0.5 * d * d / var;
}

}  // namespace

void update_beta(ModelState& state, const Network& net, const NodeData& nd,
                 const PriorConfig& prior, std::span<const double> proposal_sd,
                 Rng& rng, std::span<std::uint8_t> accepted) {
    const int n = net.n;
    const int K = state.K;
    const int tri = BlockCoefficients::tri_size(K);

    // bucket dyads by unordered block pair
    std::vector<std::vector<int>> pair_dyads(tri);
    std::vector<double> dyad_s(net.num_dyads());
    std::vector<std::uint8_t> dyad_y(net.num_dyads());
    {
        int d = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++d) {
                pair_dyads[state.coefficients.index(state.membership[i],
                                                    state.membership[j])]
                    .push_back(d);
                dyad_s[d] = nd.s(i, j);
                dyad_y[d] = net.at(i, j);
            }
    }

    std::vector<double> base_logits(net.num_dyads());
    fill_dyad_logits(nd, state, base_logits);

    std::vector<double> old_l, new_l;
    std::vector<std::uint8_t> yy;

    for (int c = 0; c < state.coefficients.num_free(); ++c) {
        const double cur = (c == 0) ? state.coefficients.beta0
                                    : state.coefficients.upper[c - 1];
        const double prop = cur + proposal_sd[c] * rng.normal();

        double delta_ll;
        if (c == 0) {
            const double shift = prop - cur;
            new_l.resize(base_logits.size());
            for (std::size_t d = 0; d < base_logits.size(); ++d)
                new_l[d] = base_logits[d] + shift;
            delta_ll = kernels::bernoulli_loglik_sum(new_l, dyad_y) -
                       kernels::bernoulli_loglik_sum(base_logits, dyad_y);
        } else {
            const auto& dyads = pair_dyads[c - 1];
            old_l.resize(dyads.size());
            new_l.resize(dyads.size());
            yy.resize(dyads.size());
            const double diff = prop - cur;
            for (std::size_t t = 0; t < dyads.size(); ++t) {
                const int d = dyads[t];
                old_l[t] = base_logits[d];
                new_l[t] = base_logits[d] + diff * dyad_s[d];
                yy[t] = dyad_y[d];
            }
            delta_ll = kernels::bernoulli_loglik_sum(new_l, yy) -
                       kernels::bernoulli_loglik_sum(old_l, yy);
        }

        const double mu_c = prior_mean(prior, c);
        const double delta_prior = log_normal_kernel(prop, mu_c, prior.Sigma_scale) -
                                   log_normal_kernel(cur, mu_c, prior.Sigma_scale);
        const double log_ratio = delta_ll + delta_prior;
        const bool accept = log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio;
        accepted[c] = accept ? 1 : 0;
        if (accept) {
            if (c == 0) {
                state.coefficients.beta0 = prop;
                const double shift = prop - cur;
                for (double& l : base_logits) l += shift;
            } else {
                state.coefficients.upper[c - 1] = prop;
                const double diff = prop - cur;
                for (int d : pair_dyads[c - 1]) base_logits[d] += diff * dyad_s[d];
            }
        }
    }
}

int update_theta(ModelState& state, const Network& net, const NodeData& nd,
                 double proposal_sd, Rng& rng) {
    const int n = net.n;
    std::vector<double> old_l(n - 1), new_l(n - 1);
    std::vector<std::uint8_t> yy(n - 1);
    int accepted = 0;
    for (int i = 0; i < n; ++i) {
        const double cur = state.theta[i];
        const double prop = cur + proposal_sd * rng.normal();
        const int k = state.membership[i];
        int t = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double base = state.coefficients.beta0 +
                                state.coefficients(k, state.membership[j]) * nd.s(i, j) +
                                state.theta[j];
            old_l[t] = base + cur;
            new_l[t] = base + prop;
            yy[t] = net.at(i, j);
            ++t;
        }
        const double delta_ll = kernels::bernoulli_loglik_sum(new_l, yy) -
                                kernels::bernoulli_loglik_sum(old_l, yy);
        const double delta_prior = log_normal_kernel(prop, 0.0, state.sigma2) -
                                   log_normal_kernel(cur, 0.0, state.sigma2);
        const double log_ratio = delta_ll + delta_prior;
        if (log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio) {
            state.theta[i] = prop;
            ++accepted;
        }
    }
    return accepted;
}

void update_membership(ModelState& state, const Network& net, const NodeData& nd,
                       Rng& rng) {
    const int n = net.n;
    const int K = state.K;
    std::vector<double> logits(n - 1);
    std::vector<std::uint8_t> yy(n - 1);
    std::vector<double> logmass(K), w(K);
    for (int i = 0; i < n; ++i) {
        int t = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            yy[t++] = net.at(i, j);
        }
        for (int k = 0; k < K; ++k) {
            t = 0;
            const double base = state.coefficients.beta0 + state.theta[i];
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                logits[t++] = base +
                              state.coefficients(k, state.membership[j]) * nd.s(i, j) +
                              state.theta[j];
            }
            const double a = state.alpha_at(i, k);
            logmass[k] = (a > 0.0 ? std::log(a) : -1e300) +
                         kernels::bernoulli_loglik_sum(logits, yy);
        }
        const double m = *std::max_element(logmass.begin(), logmass.end());
        for (int k = 0; k < K; ++k) w[k] = std::exp(logmass[k] - m);
        state.membership[i] = int(rng.categorical(w));
    }
}

void update_alpha(ModelState& state, std::span<const double> gamma, Rng& rng) {
    const int K = state.K;
    std::vector<double> conc(K), row(K);
    for (int i = 0; i < state.n(); ++i) {
        for (int k = 0; k < K; ++k) conc[k] = gamma[k] + (state.membership[i] == k);
        rng.dirichlet(conc, row);
        std::copy(row.begin(), row.end(),
                  state.alpha.begin() + std::size_t(i) * K);
    }
}

ChainDraws run_chain(const Network& net, const NodeData& nd, int K,
                     const PriorConfig& prior, const McmcConfig& cfg,
                     const ModelState& init_state, Rng rng) {
    cfg.validate();
    if (int(prior.gamma.size()) != K)
        throw std::invalid_argument("prior.gamma must have length K");
    ModelState state = init_state;
    check_dimensions(net, nd, state);

    const int nfree = state.coefficients.num_free();
    std::vector<double> sd_beta(nfree, cfg.proposal_sd_beta);
    double sd_theta = cfg.proposal_sd_theta;
    std::vector<std::uint8_t> beta_flags(nfree, 0);

    // batched Robbins-Monro adaptation, burn-in only
    constexpr int kBatch = 50;
    std::vector<int> batch_beta_acc(nfree, 0);
    int batch_theta_acc = 0, batch_count = 0, batch_number = 0;

    long long post_beta_acc = 0, post_beta_tot = 0;
    long long post_theta_acc = 0, post_theta_tot = 0;

    ChainDraws draws;
    draws.n_dyads = std::size_t(net.num_dyads());
    const int total = cfg.burn_in + cfg.iterations;
    std::vector<double> full_logits(draws.n_dyads);
    std::vector<std::uint8_t> full_y(draws.n_dyads);
    fill_dyad_responses(net, full_y);

    for (int sweep = 0; sweep < total; ++sweep) {
        int theta_acc = 0;
        if (!cfg.freeze_continuous) {
            update_beta(state, net, nd, prior, sd_beta, rng, beta_flags);
            theta_acc = update_theta(state, net, nd, sd_theta, rng);
            state.sigma2 = sample_sigma2(state.theta, prior.a, prior.b, rng);
        }
        update_membership(state, net, nd, rng);
        update_alpha(state, prior.gamma, rng);

        const bool in_burn = sweep < cfg.burn_in;
        if (in_burn && cfg.adapt) {
            for (int c = 0; c < nfree; ++c) batch_beta_acc[c] += beta_flags[c];
            batch_theta_acc += theta_acc;
            if (++batch_count == kBatch) {
                ++batch_number;
                const double step = 1.0 / std::sqrt(double(batch_number));
                for (int c = 0; c < nfree; ++c) {
                    const double frac = double(batch_beta_acc[c]) / kBatch;
                    sd_beta[c] *= std::exp(step * (frac - cfg.target_accept));
                    batch_beta_acc[c] = 0;
                }
                const double tfrac = double(batch_theta_acc) / (kBatch * net.n);
                sd_theta *= std::exp(step * (tfrac - cfg.target_accept));
                batch_theta_acc = 0;
                batch_count = 0;
            }
        }
        if (!in_burn) {
            for (int c = 0; c < nfree; ++c) post_beta_acc += beta_flags[c];
            post_beta_tot += nfree;
            post_theta_acc += theta_acc;
            post_theta_tot += net.n;
            const int post = sweep - cfg.burn_in + 1;
            if (post % cfg.thin == 0) {
                draws.states.push_back(state);
                fill_dyad_logits(nd, state, full_logits);
                const std::size_t row = draws.pointwise_ll.size();
                draws.pointwise_ll.resize(row + draws.n_dyads);
                kernels::bernoulli_loglik(
                    full_logits, full_y,
                    std::span<double>(draws.pointwise_ll.data() + row, draws.n_dyads));
            }
        }
    }
    draws.accept_rate_beta =
        post_beta_tot ? double(post_beta_acc) / post_beta_tot : 0.0;
    draws.accept_rate_theta =
        post_theta_tot ? double(post_theta_acc) / post_theta_tot : 0.0;
    return draws;
}

std::vector<ChainDraws> run_chains(const Network& net, const NodeData& nd, int K,
                                   PriorConfig prior, const McmcConfig& cfg,
                                   const InitConfig& init_cfg) {
    cfg.validate();
    Rng root(cfg.seed);
    Rng init_rng = root.split(1);
    Rng gamma_rng = root.split(2);

    if (prior.gamma.empty()) {
        // one draw per fit, shared across sweeps and chains
        prior.gamma.resize(K);
        for (int k = 0; k < K; ++k) prior.gamma[k] = gamma_rng.beta(1.0, double(K));
    }

    const InitResult init = initialize(net, nd, K, init_cfg, init_rng);
    std::vector<ChainDraws> out;
    out.reserve(cfg.n_chains);
    for (int c = 0; c < cfg.n_chains; ++c)
        out.push_back(run_chain(net, nd, K, prior, cfg, init.state, root.split(10 + c)));
    return out;
}

}  // namespace calf
