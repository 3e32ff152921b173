#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "calf/model.hpp"
#include "calf/network.hpp"
#include "calf/rng.hpp"

namespace calf {

struct InitConfig {
    double offset_c = 1e-4;
    int kmedians_restarts = 10;
    int irls_max_iter = 50;
    double irls_tol = 1e-8;
};

struct McmcConfig {
    int burn_in = 1000;
    int iterations = 2000;
    int thin = 5;
    int n_chains = 2;
    double proposal_sd_beta = 0.1;
    double proposal_sd_theta = 0.3;
    bool adapt = true;
    double target_accept = 0.35;
    // keep beta, theta, sigma2 fixed and sweep only Z and alpha (exact
    // enumeration comparisons)
    bool freeze_continuous = false;
    std::uint64_t seed = 0;

    // Table-2 style full-scale configuration
    static McmcConfig paper_preset() {
        McmcConfig c;
        c.burn_in = 5000;
        c.iterations = 10000;
        c.thin = 10;
        c.n_chains = 3;
        return c;
    }
    static McmcConfig desk_preset() { return McmcConfig{}; }

    int stored_draws() const { return iterations / thin; }
    void validate() const;
};

struct ChainDraws {
    std::vector<ModelState> states;
    std::vector<double> pointwise_ll;  // states.size() x n_dyads, row-major
    std::size_t n_dyads = 0;
    double accept_rate_beta = 0.0;   // post-burn-in
    double accept_rate_theta = 0.0;

    std::span<const double> pointwise_row(std::size_t s) const {
        return {pointwise_ll.data() + s * n_dyads, n_dyads};
    }
};

struct InitResult {
    ModelState state;
    bool beta_converged = true;
    bool separation = false;
};

// k-medians on the covariates, best of cfg.kmedians_restarts runs
std::vector<int> init_membership(const NodeData& nd, int K, const InitConfig& cfg,
                                 Rng& rng);

// theta_i = log(d_i / mean_degree + c)
std::vector<double> init_theta(std::span<const int> degrees, double mean_degree,
                               double c);

// dyad-level logistic regression by IRLS: intercept, per-block-pair
// similarity slopes, and a free coefficient on theta_i + theta_j
BlockCoefficients init_beta(const Network& net, const NodeData& nd,
                            std::span<const int> labels,
                            std::span<const double> theta_init,
                            const InitConfig& cfg, bool* converged = nullptr,
                            bool* separation = nullptr);

InitResult initialize(const Network& net, const NodeData& nd, int K,
                      const InitConfig& cfg, Rng& rng);

// one draw from IG(a + n/2, b + sum(theta^2)/2)
double sample_sigma2(std::span<const double> theta, double a, double b, Rng& rng);

// component-wise random-walk Metropolis over beta0 and the upper triangle;
// returns per-component accept flags via `accepted`
void update_beta(ModelState& state, const Network& net, const NodeData& nd,
                 const PriorConfig& prior, std::span<const double> proposal_sd,
                 Rng& rng, std::span<std::uint8_t> accepted);

// per-node random-walk Metropolis on theta; returns accept count
int update_theta(ModelState& state, const Network& net, const NodeData& nd,
                 double proposal_sd, Rng& rng);

// exact categorical Gibbs draw of each membership in sequence
void update_membership(ModelState& state, const Network& net, const NodeData& nd,
                       Rng& rng);

// alpha_i ~ Dir(gamma + Z_i)
void update_alpha(ModelState& state, std::span<const double> gamma, Rng& rng);

ChainDraws run_chain(const Network& net, const NodeData& nd, int K,
                     const PriorConfig& prior, const McmcConfig& cfg,
                     const ModelState& init_state, Rng rng);

// independent chains with deterministically split seeds; the Dirichlet
// hyperparameter is drawn once per fit (Beta(1, K) per coordinate) when the
// prior leaves it empty
std::vector<ChainDraws> run_chains(const Network& net, const NodeData& nd, int K,
                                   PriorConfig prior, const McmcConfig& cfg,
                                   const InitConfig& init_cfg);

}  // namespace calf
