#include "calf/datagen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "calf/similarity.hpp"

namespace calf {

void GenConfig::validate() const {
    if (n < 1 || K < 1 || n < K) throw std::invalid_argument("need n >= K >= 1");
    if (p < 1) throw std::invalid_argument("need p >= 1");
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
    if (theta_variance < 0.0) throw std::invalid_argument("negative theta variance");
    if (beta_within_range.first > beta_within_range.second)
        throw std::invalid_argument("empty beta_within_range");
}

std::vector<int> sample_membership(int n, int K, Rng& rng) {
    // P(label = k) proportional to (K, K-1, ..., 1)
    std::vector<double> w(K);
    for (int k = 0; k < K; ++k) w[k] = double(K - k);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = int(rng.categorical(w));
    return labels;
}

std::vector<double> cluster_centers(int K, int p, double omega) {
    if (p < 1) throw std::invalid_argument("need p >= 1");
    const double r = std::sqrt(2.0 * omega);
    std::vector<double> centers(std::size_t(K) * p, 0.0);
    for (int k = 0; k < K; ++k) {
        const double angle = 2.0 * std::numbers::pi * (k + 1) / K;
        if (p == 1) {
            // degenerate: alternate signs on the line, norm preserved
            centers[k] = (k % 2 == 0) ? r : -r;
        } else {
            centers[std::size_t(k) * p + 0] = r * std::cos(angle);
            centers[std::size_t(k) * p + 1] = r * std::sin(angle);
        }
    }
    return centers;
}

std::vector<double> sample_covariates(const std::vector<int>& membership,
                                      const std::vector<double>& centers, int K,
                                      int p, Rng& rng) {
    const int n = int(membership.size());
    std::vector<double> X(std::size_t(n) * p);
    for (int i = 0; i < n; ++i) {
        const int k = membership[i];
        if (k < 0 || k >= K) throw std::invalid_argument("membership out of range");
        for (int c = 0; c < p; ++c)
            X[std::size_t(i) * p + c] = centers[std::size_t(k) * p + c] + rng.normal();
    }
    return X;
}

std::vector<double> within_coefficients(int K, double lo, double hi) {
    std::vector<double> beta(K, lo);
    if (K > 1)
        for (int k = 0; k < K; ++k) beta[k] = lo + (hi - lo) * k / (K - 1);
    return beta;
}

SyntheticNetwork generate(const GenConfig& config) {
    config.validate();
    Rng root(config.seed);
    Rng rng_membership = root.split(1);
    Rng rng_covariates = root.split(2);
    Rng rng_theta = root.split(3);
    Rng rng_edges = root.split(4);

    SyntheticNetwork out;
    out.true_membership = sample_membership(config.n, config.K, rng_membership);
    const auto centers = cluster_centers(config.K, config.p, config.omega);
    auto X = sample_covariates(out.true_membership, centers, config.K, config.p,
                               rng_covariates);

    out.true_theta.resize(config.n);
    const double theta_sd = std::sqrt(config.theta_variance);
    for (int i = 0; i < config.n; ++i) out.true_theta[i] = rng_theta.normal(0.0, theta_sd);

    BlockCoefficients coeffs(config.K);
    coeffs.beta0 = config.beta0;
    const auto within = within_coefficients(config.K, config.beta_within_range.first,
                                            config.beta_within_range.second);
    for (int k = 0; k < config.K; ++k)
        for (int l = k; l < config.K; ++l)
            coeffs.ref(k, l) = (k == l) ? within[k] : config.beta_between;

    auto S = euclidean_similarity(X, config.n, config.p);
    out.node_data = make_node_data(std::move(X), config.n, config.p, std::move(S),
                                   SimilarityKind::euclidean);

    out.network = Network(config.n);
    for (int i = 0; i < config.n; ++i) {
        for (int j = i + 1; j < config.n; ++j) {
            const double eta_ij =
                eta(coeffs, out.node_data.s(i, j), out.true_theta[i],
                    out.true_theta[j], out.true_membership[i], out.true_membership[j]);
            if (rng_edges.bernoulli(eta_ij)) out.network.set_edge(i, j, true);
        }
    }

    out.true_state.coefficients = coeffs;
    out.true_state.theta = out.true_theta;
    out.true_state.sigma2 = config.theta_variance > 0.0 ? config.theta_variance : 1.0;
    out.true_state.membership = out.true_membership;
    out.true_state.K = config.K;
    out.true_state.alpha.assign(std::size_t(config.n) * config.K, 0.0);
    for (int i = 0; i < config.n; ++i)
        out.true_state.alpha[std::size_t(i) * config.K + out.true_membership[i]] = 1.0;
    return out;
}

}  // namespace calf
