#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace calf {

// Undirected binary network: dense adjacency, no self-loops.
struct Network {
    int n = 0;
    std::vector<std::uint8_t> adjacency;  // n*n row-major, symmetric, 0 diag
    std::vector<int> degrees;

    Network() = default;
    explicit Network(int n_) : n(n_), adjacency(std::size_t(n_) * n_, 0), degrees(n_, 0) {}

    std::uint8_t at(int i, int j) const { return adjacency[std::size_t(i) * n + j]; }

    void set_edge(int i, int j, bool present) {
        if (i == j) throw std::invalid_argument("self-loop at node " + std::to_string(i));
        auto& a = adjacency[std::size_t(i) * n + j];
        auto& b = adjacency[std::size_t(j) * n + i];
        if (a != (present ? 1 : 0)) {
            const int delta = present ? 1 : -1;
            degrees[i] += delta;
            degrees[j] += delta;
        }
        a = b = present ? 1 : 0;
    }

    int num_dyads() const { return n * (n - 1) / 2; }

    int num_edges() const {
        int m = 0;
        for (int d : degrees) m += d;
        return m / 2;
    }

    double mean_degree() const {
        if (n == 0) return 0.0;
        return 2.0 * num_edges() / n;
    }

    void validate() const {
        if (std::size_t(n) * n != adjacency.size())
            throw std::invalid_argument("adjacency size mismatch");
        for (int i = 0; i < n; ++i) {
            if (at(i, i) != 0) throw std::invalid_argument("nonzero diagonal");
            int d = 0;
            for (int j = 0; j < n; ++j) {
                const auto a = at(i, j);
                if (a > 1) throw std::invalid_argument("non-binary entry");
                if (a != at(j, i)) throw std::invalid_argument("asymmetric adjacency");
                d += a;
            }
            if (d != degrees[i]) throw std::invalid_argument("degree cache mismatch");
        }
    }
};

enum class SimilarityKind { euclidean, match_average, combined_scaled, custom };

// Node covariates plus the derived pairwise similarity table.
struct NodeData {
    int n = 0;
    int p = 0;
    std::vector<double> covariates;  // n*p row-major
    std::vector<double> similarity;  // n*n, symmetric, 0 diag
    SimilarityKind similarity_kind = SimilarityKind::custom;

    double x(int i, int c) const { return covariates[std::size_t(i) * p + c]; }
    double s(int i, int j) const { return similarity[std::size_t(i) * n + j]; }
};

}  // namespace calf
