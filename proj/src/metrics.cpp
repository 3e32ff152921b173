#include "calf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace calf {

namespace {

std::vector<int> compact(std::span<const int> labels, int& levels) {
    std::unordered_map<int, int> map;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = map.try_emplace(labels[i], int(map.size()));
        out[i] = it->second;
    }
    levels = int(map.size());
    return out;
}

long long choose2(long long m) { return m * (m - 1) / 2; }

}  // namespace

ContingencyTable contingency(std::span<const int> labels_a, std::span<const int> labels_b) {
    if (labels_a.size() != labels_b.size())
        throw std::invalid_argument("label vectors differ in length");
    ContingencyTable t;
    const auto a = compact(labels_a, t.r);
    const auto b = compact(labels_b, t.c);
    t.counts.assign(std::size_t(t.r) * t.c, 0);
    t.row_sums.assign(t.r, 0);
    t.col_sums.assign(t.c, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++t.counts[std::size_t(a[i]) * t.c + b[i]];
        ++t.row_sums[a[i]];
        ++t.col_sums[b[i]];
        ++t.total;
    }
    return t;
}

double ari(std::span<const int> labels_a, std::span<const int> labels_b) {
    if (labels_a.size() < 2) throw std::invalid_argument("need at least two items");
    const auto t = contingency(labels_a, labels_b);
    long long sum_ij = 0, sum_i = 0, sum_j = 0;
    for (long long c : t.counts) sum_ij += choose2(c);
    for (long long c : t.row_sums) sum_i += choose2(c);
    for (long long c : t.col_sums) sum_j += choose2(c);
    const double pairs = double(choose2(t.total));
    const double expected = double(sum_i) * double(sum_j) / pairs;
    const double max_index = 0.5 * (double(sum_i) + double(sum_j));
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (double(sum_ij) - expected) / (max_index - expected);
}

double nmi(std::span<const int> labels_a, std::span<const int> labels_b) {
    if (labels_a.empty()) throw std::invalid_argument("empty label vectors");
    const auto t = contingency(labels_a, labels_b);
    const double n = double(t.total);
    double h_a = 0.0, h_b = 0.0, mi = 0.0;
    for (long long c : t.row_sums)
        if (c > 0) h_a -= (c / n) * std::log(c / n);
    for (long long c : t.col_sums)
        if (c > 0) h_b -= (c / n) * std::log(c / n);
    for (int i = 0; i < t.r; ++i)
        for (int j = 0; j < t.c; ++j) {
            const long long c = t.at(i, j);
            if (c > 0)
                mi += (c / n) * std::log(c * n / (double(t.row_sums[i]) * t.col_sums[j]));
        }
    const double denom = 0.5 * (h_a + h_b);
    if (denom <= 0.0) return 1.0;  // both sides a single cluster
    return std::clamp(mi / denom, 0.0, 1.0);
}

double cramers_v(std::span<const int> labels_a, std::span<const int> labels_b) {
    const auto t = contingency(labels_a, labels_b);
    if (t.r < 2 || t.c < 2)
        throw std::invalid_argument("need at least two levels on each side");
    double chi2 = 0.0;
    for (int i = 0; i < t.r; ++i)
        for (int j = 0; j < t.c; ++j) {
            const double expected =
                double(t.row_sums[i]) * t.col_sums[j] / double(t.total);
            const double d = t.at(i, j) - expected;
            chi2 += d * d / expected;
        }
    return std::sqrt(chi2 / (double(t.total) * std::min(t.r - 1, t.c - 1)));
}

}  // namespace calf
