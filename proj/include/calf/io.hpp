#pragma once

#include <map>
#include <string>
#include <vector>

#include "calf/inference.hpp"
#include "calf/network.hpp"
#include "calf/posterior.hpp"

namespace calf::io {

// edge-list CSV: header "i,j", 0-based indices, one row per dyad with i < j
void save_edge_list(const std::string& path, const Network& net);

// duplicate and reversed rows are deduplicated; self-loops are rejected.
// With require_mutual an edge needs both directions present (directed input).
Network load_network(const std::string& path, int n_hint = -1,
                     bool require_mutual = false);

enum class ColumnKind { numeric, categorical };

struct CovariateTable {
    int n = 0;
    std::vector<std::string> names;
    std::vector<ColumnKind> kinds;
    std::vector<std::vector<double>> numeric_cols;   // per numeric column
    std::vector<std::vector<int>> categorical_cols;  // level codes per column

    int num_numeric() const { return int(numeric_cols.size()); }
    int num_categorical() const { return int(categorical_cols.size()); }
};

// header tags: "num:name" or "cat:name"; untagged columns default to numeric
CovariateTable load_covariates(const std::string& path);

// numeric-only -> euclidean; categorical-only -> match-average; mixed ->
// unit-variance scaled combination of the two tables
NodeData node_data_from_table(const CovariateTable& table);

void save_covariates(const std::string& path, const NodeData& nd);

// truth CSV: header "membership,theta"; labels written 1-based
void save_truth(const std::string& path, const std::vector<int>& membership,
                const std::vector<double>& theta);
void load_truth(const std::string& path, std::vector<int>& membership,
                std::vector<double>& theta);

void save_config_echo(const std::string& path,
                      const std::map<std::string, std::string>& kv);

// one row per stored sweep: chain, sweep, beta entries in canonical
// upper-triangle order, sigma2, theta vector, 1-based labels
void save_draws_csv(const std::string& path, std::span<const ChainDraws> chains);

std::string fit_report_to_json(const FitReport& rep);
void save_fit_report(const std::string& path, const FitReport& rep);

std::string format_double(double v);

}  // namespace calf::io
