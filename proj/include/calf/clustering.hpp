#pragma once

#include <span>
#include <vector>

#include "calf/network.hpp"
#include "calf/rng.hpp"

namespace calf {

struct LloydResult {
    std::vector<int> labels;
    std::vector<double> centers;  // K x p row-major
    double objective = 0.0;
};

// Lloyd iteration with squared-L2 cost and mean centers; k-means++ seeding,
// best of `restarts` runs
LloydResult kmeans(std::span<const double> X, int n, int p, int K, Rng& rng,
                   int restarts = 10, int max_iter = 100);

// L1 cost, coordinate-wise median centers
LloydResult kmedians(std::span<const double> X, int n, int p, int K, Rng& rng,
                     int restarts = 10, int max_iter = 100);

// K leading eigenvectors of the regularized symmetric normalized Laplacian,
// row-normalized, clustered by kmeans
std::vector<int> spectral_clustering(const Network& net, int K, Rng& rng);

}  // namespace calf
