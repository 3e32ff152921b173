#pragma once

#include <utility>
#include <vector>

#include "calf/model.hpp"
#include "calf/network.hpp"
#include "calf/rng.hpp"

namespace calf {

struct GenConfig {
    int n = 200;
    int K = 2;
    int p = 2;
    double omega = 1.5;
    double beta0 = 1.0;
    std::pair<double, double> beta_within_range{-1.6, -1.0};
    double beta_between = -3.0;
    double theta_variance = 0.3;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticNetwork {
    Network network;
    NodeData node_data;
    std::vector<int> true_membership;  // 0-based
    std::vector<double> true_theta;
    ModelState true_state;
};

// unbalanced multinomial: P(label = k) proportional to K - k for 0-based k
std::vector<int> sample_membership(int n, int K, Rng& rng);

// K equally spaced points of norm sqrt(2*omega) on a circle embedded in the
// first two coordinates of p-space
std::vector<double> cluster_centers(int K, int p, double omega);

// X_i ~ N(center[membership_i], I_p), row-major n x p
std::vector<double> sample_covariates(const std::vector<int>& membership,
                                      const std::vector<double>& centers, int K,
                                      int p, Rng& rng);

// within-block coefficients equally spaced over [lo, hi]; K = 1 uses lo
std::vector<double> within_coefficients(int K, double lo, double hi);

SyntheticNetwork generate(const GenConfig& config);

}  // namespace calf
