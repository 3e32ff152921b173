#pragma once

#include <span>
#include <vector>

#include "calf/network.hpp"

namespace calf {

// S_ij = ||X_i - X_j||_2 over an n*p row-major covariate table
std::vector<double> euclidean_similarity(std::span<const double> covariates, int n, int p);

// S_ij = (#matching attributes) / m over an n*m table of categorical codes;
// diagonal forced to 0
std::vector<double> match_average_similarity(std::span<const int> attrs, int n, int m);

// haversine distance, mean Earth radius 6371 km; coordinates in degrees
double great_circle_km(double lat1, double lon1, double lat2, double lon2);

// each component's strict upper triangle is scaled to unit sample standard
// deviation, then combined as a weighted sum (empty weights = equal)
std::vector<double> combined_scaled_similarity(
    std::span<const std::vector<double>> components, int n,
    std::span<const double> weights = {});

NodeData make_node_data(std::vector<double> covariates, int n, int p,
                        std::vector<double> similarity, SimilarityKind kind);

}  // namespace calf
