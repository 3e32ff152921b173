#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "calf/kernels.hpp"
#include "calf/network.hpp"

namespace calf {

// Symmetric K x K block coefficient table stored as its upper triangle
// (row-major: b_11, b_12, ..., b_1K, b_22, ..., b_KK) plus an intercept.
struct BlockCoefficients {
    int K = 0;
    double beta0 = 0.0;
    std::vector<double> upper;  // K(K+1)/2 entries

    BlockCoefficients() = default;
    explicit BlockCoefficients(int K_) : K(K_), upper(std::size_t(K_) * (K_ + 1) / 2, 0.0) {}

    static int tri_size(int K) { return K * (K + 1) / 2; }

    int index(int k, int l) const {
        if (k > l) std::swap(k, l);
        return k * K - k * (k - 1) / 2 + (l - k);
    }

    double operator()(int k, int l) const { return upper[index(k, l)]; }
    double& ref(int k, int l) { return upper[index(k, l)]; }

    int num_free() const { return tri_size(K) + 1; }  // + intercept
};

// One full parameter configuration. Membership labels are 0-based in [0, K).
struct ModelState {
    BlockCoefficients coefficients;
    std::vector<double> theta;
    double sigma2 = 1.0;
    std::vector<int> membership;
    std::vector<double> alpha;  // n x K row-stochastic
    int K = 0;

    int n() const { return int(theta.size()); }
    double alpha_at(int i, int k) const { return alpha[std::size_t(i) * K + k]; }
};

struct PriorConfig {
    std::vector<double> mu;     // empty = zero vector of matching dimension
    double Sigma_scale = 100.0; // prior covariance s * I
    double a = 1.0;
    double b = 1.0;
    std::vector<double> gamma;  // Dirichlet concentration, length K
};

// logit of the dyad connection probability, Eq.-(1)-style link
inline double dyad_logit(const BlockCoefficients& c, double S_ij, double theta_i,
                         double theta_j, int k, int l) {
    return c.beta0 + c(k, l) * S_ij + theta_i + theta_j;
}

// inverse-logit connection probability
inline double eta(const BlockCoefficients& c, double S_ij, double theta_i,
                  double theta_j, int k, int l) {
    return kernels::logistic1(dyad_logit(c, S_ij, theta_i, theta_j, k, l));
}

void check_dimensions(const Network& net, const NodeData& nd, const ModelState& state);

// logits for all dyads in canonical order (row-major over i < j)
void fill_dyad_logits(const NodeData& nd, const ModelState& state,
                      std::span<double> logits);

// responses A_ij for all dyads in the same canonical order
void fill_dyad_responses(const Network& net, std::span<std::uint8_t> y);

double log_likelihood(const Network& net, const NodeData& nd, const ModelState& state);

std::vector<double> dyad_log_likelihoods(const Network& net, const NodeData& nd,
                                         const ModelState& state);

}  // namespace calf
