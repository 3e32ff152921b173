#pragma once

#include <span>
#include <vector>

namespace calf {

struct ContingencyTable {
    int r = 0, c = 0;
    std::vector<long long> counts;  // r x c
    std::vector<long long> row_sums, col_sums;
    long long total = 0;

    long long at(int i, int j) const { return counts[std::size_t(i) * c + j]; }
};

// labels may use arbitrary integer names; levels are compacted internally
ContingencyTable contingency(std::span<const int> labels_a, std::span<const int> labels_b);

// adjusted Rand index; can be negative
double ari(std::span<const int> labels_a, std::span<const int> labels_b);

// mutual information normalized by the arithmetic mean of the entropies;
// 1 when both sides are the same single cluster
double nmi(std::span<const int> labels_a, std::span<const int> labels_b);

// sqrt(chi2 / (n * min(r-1, c-1)))
double cramers_v(std::span<const int> labels_a, std::span<const int> labels_b);

}  // namespace calf
