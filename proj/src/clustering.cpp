#include "calf/clustering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace calf {

namespace {

double sq_l2(std::span<const double> X, int p, int i, const double* center) {
    double acc = 0.0;
    for (int c = 0; c < p; ++c) {
        const double d = X[std::size_t(i) * p + c] - center[c];
        acc += d * d;
    }
    return acc;
}

double l1(std::span<const double> X, int p, int i, const double* center) {
    double acc = 0.0;
    for (int c = 0; c < p; ++c)
        acc += std::abs(X[std::size_t(i) * p + c] - center[c]);
    return acc;
}

// k-means++ style seeding under the given point-to-center cost
std::vector<double> seed_centers(std::span<const double> X, int n, int p, int K,
                                 Rng& rng, bool l1_cost) {
    std::vector<double> centers(std::size_t(K) * p);
    const int first = int(rng.uniform_int(n));
    std::copy_n(X.begin() + std::size_t(first) * p, p, centers.begin());
    std::vector<double> dist(n);
    for (int k = 1; k < K; ++k) {
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (int j = 0; j < k; ++j) {
                const double* c = centers.data() + std::size_t(j) * p;
                best = std::min(best, l1_cost ? l1(X, p, i, c) : sq_l2(X, p, i, c));
            }
            dist[i] = best;
        }
        const int pick = int(rng.categorical(dist));
        std::copy_n(X.begin() + std::size_t(pick) * p,
                    p, centers.begin() + std::size_t(k) * p);
    }
    return centers;
}

LloydResult lloyd_once(std::span<const double> X, int n, int p, int K, Rng& rng,
                       int max_iter, bool l1_cost) {
    LloydResult res;
    res.centers = seed_centers(X, n, p, K, rng, l1_cost);
    res.labels.assign(n, 0);
    std::vector<int> counts(K);
    std::vector<double> member_vals;
    for (int iter = 0; iter < max_iter; ++iter) {
        // assignment
        bool changed = false;
        res.objective = 0.0;
        for (int i = 0; i < n; ++i) {
            int best_k = 0;
            double best = std::numeric_limits<double>::max();
            for (int k = 0; k < K; ++k) {
                const double* c = res.centers.data() + std::size_t(k) * p;
                const double d = l1_cost ? l1(X, p, i, c) : sq_l2(X, p, i, c);
                if (d < best) {
                    best = d;
                    best_k = k;
                }
            }
            if (res.labels[i] != best_k) changed = true;
            res.labels[i] = best_k;
            res.objective += best;
        }
        if (iter > 0 && !changed) break;
        // update
        std::fill(counts.begin(), counts.end(), 0);
        for (int lab : res.labels) ++counts[lab];
        for (int k = 0; k < K; ++k) {
            if (counts[k] == 0) {
                // reseed an empty cluster at a random point
                const int pick = int(rng.uniform_int(n));
                std::copy_n(X.begin() + std::size_t(pick) * p, p,
                            res.centers.begin() + std::size_t(k) * p);
                continue;
            }
            for (int c = 0; c < p; ++c) {
                if (l1_cost) {
                    member_vals.clear();
                    for (int i = 0; i < n; ++i)
                        if (res.labels[i] == k)
                            member_vals.push_back(X[std::size_t(i) * p + c]);
                    std::sort(member_vals.begin(), member_vals.end());
                    const std::size_t m = member_vals.size();
                    res.centers[std::size_t(k) * p + c] =
                        (m % 2 == 1) ? member_vals[m / 2]
                                     : 0.5 * (member_vals[m / 2 - 1] + member_vals[m / 2]);
                } else {
                    double sum = 0.0;
                    for (int i = 0; i < n; ++i)
                        if (res.labels[i] == k) sum += X[std::size_t(i) * p + c];
                    res.centers[std::size_t(k) * p + c] = sum / counts[k];
                }
            }
        }
    }
    // final objective under the final centers
    res.objective = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* c = res.centers.data() + std::size_t(res.labels[i]) * p;
        res.objective += l1_cost ? l1(X, p, i, c) : sq_l2(X, p, i, c);
    }
    return res;
}

LloydResult lloyd(std::span<const double> X, int n, int p, int K, Rng& rng,
                  int restarts, int max_iter, bool l1_cost) {
    if (K > n) throw std::invalid_argument("K exceeds number of points");
    if (K < 1) throw std::invalid_argument("K must be positive");
    LloydResult best;
    best.objective = std::numeric_limits<double>::max();
    for (int r = 0; r < restarts; ++r) {
        auto res = lloyd_once(X, n, p, K, rng, max_iter, l1_cost);
        if (res.objective < best.objective) best = std::move(res);
    }
    return best;
}

}  // namespace

LloydResult kmeans(std::span<const double> X, int n, int p, int K, Rng& rng,
                   int restarts, int max_iter) {
    return lloyd(X, n, p, K, rng, restarts, max_iter, false);
}

LloydResult kmedians(std::span<const double> X, int n, int p, int K, Rng& rng,
                     int restarts, int max_iter) {
    return lloyd(X, n, p, K, rng, restarts, max_iter, true);
}

std::vector<int> spectral_clustering(const Network& net, int K, Rng& rng) {
    const int n = net.n;
    if (K > n) throw std::invalid_argument("K exceeds number of nodes");
    // degree regularization keeps isolated nodes well-defined
    const double tau = net.mean_degree();
    Eigen::MatrixXd M(n, n);
    std::vector<double> dinv(n);
    for (int i = 0; i < n; ++i) dinv[i] = 1.0 / std::sqrt(net.degrees[i] + tau + 1e-12);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = dinv[i] * net.at(i, j) * dinv[j];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed to converge");

    // K leading eigenvectors of D^-1/2 A D^-1/2 = smallest of L_sym
    std::vector<double> embed(std::size_t(n) * K);
    for (int i = 0; i < n; ++i) {
        double norm = 0.0;
        for (int k = 0; k < K; ++k) {
            const double v = solver.eigenvectors()(i, n - 1 - k);
            embed[std::size_t(i) * K + k] = v;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm > 1e-12)
            for (int k = 0; k < K; ++k) embed[std::size_t(i) * K + k] /= norm;
    }
    return kmeans(embed, n, K, K, rng).labels;
}

}  // namespace calf
