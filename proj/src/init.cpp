#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "calf/clustering.hpp"
#include "calf/inference.hpp"

namespace calf {

std::vector<int> init_membership(const NodeData& nd, int K, const InitConfig& cfg,
                                 Rng& rng) {
    if (K > nd.n) throw std::invalid_argument("K exceeds number of nodes");
    return kmedians(nd.covariates, nd.n, nd.p, K, rng, cfg.kmedians_restarts).labels;
}

std::vector<double> init_theta(std::span<const int> degrees, double mean_degree,
                               double c) {
    if (!(mean_degree > 0.0))
        throw std::invalid_argument("mean degree must be positive");
    std::vector<double> theta(degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i)
        theta[i] = std::log(degrees[i] / mean_degree + c);
    return theta;
}

BlockCoefficients init_beta(const Network& net, const NodeData& nd,
                            std::span<const int> labels,
                            std::span<const double> theta_init,
                            const InitConfig& cfg, bool* converged,
                            bool* separation) {
    const int n = net.n;
    int K = 0;
    for (int lab : labels) K = std::max(K, lab + 1);
    const int tri = BlockCoefficients::tri_size(K);
    const int ncols = 1 + tri + 1;  // intercept, block-pair slopes, theta sum
    const int m = net.num_dyads();

    BlockCoefficients dims(K);  // for pair indexing only
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(m, ncols);
    Eigen::VectorXd y(m);
    {
        int d = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++d) {
                design(d, 0) = 1.0;
                design(d, 1 + dims.index(labels[i], labels[j])) = nd.s(i, j);
                design(d, 1 + tri) = theta_init[i] + theta_init[j];
                y(d) = net.at(i, j);
            }
    }

    Eigen::VectorXd coef = Eigen::VectorXd::Zero(ncols);
    bool ok = false, sep = false;
    for (int iter = 0; iter < cfg.irls_max_iter; ++iter) {
        Eigen::VectorXd etav = design * coef;
        Eigen::VectorXd p(m), w(m);
        for (int d = 0; d < m; ++d) {
            const double pd = 1.0 / (1.0 + std::exp(-std::clamp(etav(d), -35.0, 35.0)));
            p(d) = pd;
            w(d) = std::max(pd * (1.0 - pd), 1e-10);
        }
        // working response solve with a small ridge for rank safety
        Eigen::MatrixXd xtwx = design.transpose() * w.asDiagonal() * design;
        xtwx.diagonal().array() += 1e-8;
        const Eigen::VectorXd xtz = design.transpose() * (y - p);
        const Eigen::VectorXd step = xtwx.ldlt().solve(xtz);
        coef += step;
        if (coef.norm() > 1e3) {
            sep = true;
            break;
        }
        if (step.norm() < cfg.irls_tol) {
            ok = true;
            break;
        }
    }
    if (converged) *converged = ok;
    if (separation) *separation = sep;

    BlockCoefficients out(K);
    if (ok && !sep) {
        out.beta0 = coef(0);
        for (int t = 0; t < tri; ++t) out.upper[t] = coef(1 + t);
    }
    // non-converged or separated fits fall back to zeros
    return out;
}

InitResult initialize(const Network& net, const NodeData& nd, int K,
                      const InitConfig& cfg, Rng& rng) {
    InitResult res;
    res.state.K = K;
    res.state.membership = init_membership(nd, K, cfg, rng);
    res.state.theta = init_theta(net.degrees, net.mean_degree(), cfg.offset_c);
    res.state.coefficients = init_beta(net, nd, res.state.membership, res.state.theta,
                                       cfg, &res.beta_converged, &res.separation);
    // ensure the coefficient table has the requested dimension even if some
    // initial clusters are empty
    if (res.state.coefficients.K != K) {
        BlockCoefficients full(K);
        full.beta0 = res.state.coefficients.beta0;
        for (int k = 0; k < res.state.coefficients.K; ++k)
            for (int l = k; l < res.state.coefficients.K; ++l)
                full.ref(k, l) = res.state.coefficients(k, l);
        res.state.coefficients = std::move(full);
    }
    double var = 0.0;
    for (double t : res.state.theta) var += t * t;
    res.state.sigma2 = std::max(var / std::max<std::size_t>(1, res.state.theta.size()), 0.01);
    res.state.alpha.assign(std::size_t(net.n) * K, 1.0 / K);
    return res;
}

}  // namespace calf
