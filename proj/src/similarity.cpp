#include "calf/similarity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace calf {

std::vector<double> euclidean_similarity(std::span<const double> covariates, int n, int p) {
    std::vector<double> s(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (int c = 0; c < p; ++c) {
                const double d = covariates[std::size_t(i) * p + c] -
                                 covariates[std::size_t(j) * p + c];
                acc += d * d;
            }
            s[std::size_t(i) * n + j] = s[std::size_t(j) * n + i] = std::sqrt(acc);
        }
    }
    return s;
}

std::vector<double> match_average_similarity(std::span<const int> attrs, int n, int m) {
    if (m < 1) throw std::invalid_argument("need at least one attribute");
    std::vector<double> s(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int matches = 0;
            for (int c = 0; c < m; ++c)
                matches += attrs[std::size_t(i) * m + c] == attrs[std::size_t(j) * m + c];
            s[std::size_t(i) * n + j] = s[std::size_t(j) * n + i] =
                double(matches) / m;
        }
    }
    return s;
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
    if (std::abs(lat1) > 90.0 || std::abs(lat2) > 90.0)
        throw std::invalid_argument("latitude out of [-90, 90]");
    constexpr double kEarthRadiusKm = 6371.0;
    constexpr double deg = std::numbers::pi / 180.0;
    const double phi1 = lat1 * deg, phi2 = lat2 * deg;
    const double dphi = (lat2 - lat1) * deg;
    const double dlam = (lon2 - lon1) * deg;
    const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                     std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) * std::sin(dlam / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

std::vector<double> combined_scaled_similarity(
    std::span<const std::vector<double>> components, int n,
    std::span<const double> weights) {
    if (components.empty()) throw std::invalid_argument("no components");
    std::vector<double> w(weights.begin(), weights.end());
    if (w.empty()) w.assign(components.size(), 1.0 / components.size());
    if (w.size() != components.size())
        throw std::invalid_argument("weight count mismatch");

    std::vector<double> out(std::size_t(n) * n, 0.0);
    const int ndyads = n * (n - 1) / 2;
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        if (comp.size() != std::size_t(n) * n)
            throw std::invalid_argument("component size mismatch");
        // sample sd over the strict upper triangle
        double mean = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) mean += comp[std::size_t(i) * n + j];
        mean /= ndyads;
        double ss = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double d = comp[std::size_t(i) * n + j] - mean;
                ss += d * d;
            }
        const double sd = std::sqrt(ss / (ndyads - 1));
        if (!(sd > 0.0))
            throw std::invalid_argument("zero-variance similarity component");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = w[c] * comp[std::size_t(i) * n + j] / sd;
                out[std::size_t(i) * n + j] += v;
                out[std::size_t(j) * n + i] += v;
            }
    }
    return out;
}

NodeData make_node_data(std::vector<double> covariates, int n, int p,
                        std::vector<double> similarity, SimilarityKind kind) {
    NodeData nd;
    nd.n = n;
    nd.p = p;
    nd.covariates = std::move(covariates);
    nd.similarity = std::move(similarity);
    nd.similarity_kind = kind;
    return nd;
}

}  // namespace calf
