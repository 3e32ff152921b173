#pragma once

#include <span>
#include <vector>

#include "calf/inference.hpp"

namespace calf {

struct RelabeledDraws {
    ChainDraws draws;
    // permutations[s][k'] = original label occupying sorted position k'
    std::vector<std::vector<int>> permutations;
};

// artificial identifiability constraint: per draw, permute labels so the
// block-coefficient diagonal is ascending
RelabeledDraws relabel(const ChainDraws& draws);

// per-node most frequent label across pooled relabeled chains, ties low
std::vector<int> hard_membership(std::span<const ChainDraws> relabeled);

// potential scale reduction factor over >= 2 equal-length scalar chains
double gelman_rubin(const std::vector<std::vector<double>>& chains);

struct WaicResult {
    double lppd = 0.0;
    double p_waic = 0.0;
    double waic = 0.0;
};

// table is draws x dyads row-major
WaicResult waic(std::span<const double> pointwise_ll, std::size_t n_draws,
                std::size_t n_dyads);

struct ScalarSummary {
    double mean = 0.0;
    double median = 0.0;
    double lower = 0.0;   // central 95% interval
    double upper = 0.0;
    double rhat = 0.0;    // NaN when < 2 chains
};

struct FitReport {
    int K = 0;
    int n_chains = 0;
    int draws_per_chain = 0;
    ScalarSummary beta0;
    std::vector<ScalarSummary> beta_upper;  // canonical upper-triangle order
    ScalarSummary sigma2;
    double sigma_mean = 0.0;  // posterior mean of sigma, not sigma^2
    std::vector<double> theta_mean, theta_lower, theta_upper;
    std::vector<int> hard_labels;  // 0-based
    WaicResult waic;
    double accept_rate_beta = 0.0;
    double accept_rate_theta = 0.0;
};

// relabels each chain, pools, and summarizes
FitReport summarize(std::span<const ChainDraws> chains, int K);

struct KSelection {
    int best_K = 0;
    std::vector<int> ks;                // successfully fitted K values
    std::vector<FitReport> reports;     // parallel to ks
    std::vector<int> failed;            // K values whose fit threw
};

KSelection select_K(const Network& net, const NodeData& nd,
                    std::span<const int> K_range, const PriorConfig& prior,
                    const McmcConfig& mcmc_cfg, const InitConfig& init_cfg);

double quantile(std::vector<double> values, double q);

}  // namespace calf
