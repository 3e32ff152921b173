#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "calf/model.hpp"
#include "calf/rng.hpp"
#include "calf/similarity.hpp"

using namespace calf;

namespace {

ModelState random_state(int n, int K, Rng& rng) {
    ModelState st;
    st.K = K;
    st.coefficients = BlockCoefficients(K);
    st.coefficients.beta0 = rng.normal();
    for (auto& b : st.coefficients.upper) b = rng.normal();
    st.theta.resize(n);
    for (auto& t : st.theta) t = rng.normal(0.0, 0.5);
    st.sigma2 = 0.5;
    st.membership.resize(n);
    for (auto& m : st.membership) m = int(rng.uniform_int(K));
    st.alpha.assign(std::size_t(n) * K, 1.0 / K);
    return st;
}

NodeData random_node_data(int n, int p, Rng& rng) {
    std::vector<double> X(std::size_t(n) * p);
    for (auto& v : X) v = rng.normal();
    auto S = euclidean_similarity(X, n, p);
    return make_node_data(std::move(X), n, p, std::move(S), SimilarityKind::euclidean);
}

}  // namespace

TEST_CASE("eta examples") {
    BlockCoefficients c(1);
    c.beta0 = 0.0;
    CHECK(eta(c, 3.0, 0.0, 0.0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));

    c.beta0 = 1.0;
    c.ref(0, 0) = -1.0;
    CHECK(eta(c, 1.0, 0.0, 0.0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));

    c.ref(0, 0) = -1.6;
    // logit 1 - 1.6*0.5 = 0.2
    CHECK(eta(c, 0.5, 0.0, 0.0, 0, 0) == doctest::Approx(0.549834).epsilon(1e-6));
}

TEST_CASE("eta is symmetric under the (i,k)<->(j,l) swap") {
    Rng rng(11);
    BlockCoefficients c(3);
    c.beta0 = rng.normal();
    for (auto& b : c.upper) b = rng.normal();
    for (int trial = 0; trial < 50; ++trial) {
        const double s = rng.uniform(0.0, 2.0);
        const double ti = rng.normal(), tj = rng.normal();
        const int k = int(rng.uniform_int(3)), l = int(rng.uniform_int(3));
        CHECK(eta(c, s, ti, tj, k, l) == doctest::Approx(eta(c, s, tj, ti, l, k)).epsilon(1e-14));
    }
}

TEST_CASE("log_likelihood single dyad and empty graph") {
    Rng rng(1);
    {
        Network net(2);
        auto nd = random_node_data(2, 2, rng);
        ModelState st = random_state(2, 1, rng);
        st.coefficients.beta0 = 0.0;
        st.coefficients.upper[0] = 0.0;
        st.theta = {0.0, 0.0};
        CHECK(log_likelihood(net, nd, st) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    }
    {
        Network net(1);
        auto nd = random_node_data(1, 2, rng);
        ModelState st = random_state(1, 1, rng);
        CHECK(log_likelihood(net, nd, st) == 0.0);
    }
}

TEST_CASE("likelihood normalizes over all graphs on four nodes") {
    Rng rng(99);
    for (int trial = 0; trial < 3; ++trial) {
        auto nd = random_node_data(4, 2, rng);
        ModelState st = random_state(4, 2, rng);
        double total = 0.0;
        for (int mask = 0; mask < 64; ++mask) {
            Network net(4);
            int bit = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j, ++bit)
                    if (mask & (1 << bit)) net.set_edge(i, j, true);
            total += std::exp(log_likelihood(net, nd, st));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("log_likelihood is invariant under label permutation") {
    Rng rng(5);
    const int n = 8, K = 3;
    auto nd = random_node_data(n, 2, rng);
    Network net(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(0.4)) net.set_edge(i, j, true);
    ModelState st = random_state(n, K, rng);
    const double base = log_likelihood(net, nd, st);

    const int perms[][3] = {{1, 0, 2}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}};
    for (const auto& rho : perms) {
        ModelState permuted = st;
        // rho[old] = new label; permute both memberships and beta
        for (int i = 0; i < n; ++i) permuted.membership[i] = rho[st.membership[i]];
        for (int k = 0; k < K; ++k)
            for (int l = k; l < K; ++l)
                permuted.coefficients.ref(rho[k], rho[l]) = st.coefficients(k, l);
        CHECK(log_likelihood(net, nd, permuted) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("dyad_log_likelihoods sums to log_likelihood") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + int(rng.uniform_int(8));
        auto nd = random_node_data(n, 3, rng);
        Network net(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(0.5)) net.set_edge(i, j, true);
        ModelState st = random_state(n, 2, rng);
        const auto v = dyad_log_likelihoods(net, nd, st);
        CHECK(int(v.size()) == n * (n - 1) / 2);
        const double sum = std::accumulate(v.begin(), v.end(), 0.0);
        CHECK(sum == doctest::Approx(log_likelihood(net, nd, st)).epsilon(1e-10));
    }
}

TEST_CASE("dyad vector for the all-half case") {
    Rng rng(2);
    Network net(3);
    auto nd = random_node_data(3, 2, rng);
    ModelState st = random_state(3, 1, rng);
    st.coefficients.beta0 = 0.0;
    st.coefficients.upper[0] = 0.0;
    st.theta = {0.0, 0.0, 0.0};
    const auto v = dyad_log_likelihoods(net, nd, st);
    REQUIRE(v.size() == 3);
    for (double x : v) CHECK(x == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("euclidean similarity") {
    std::vector<double> X{0, 0, 3, 4};
    const auto S = euclidean_similarity(X, 2, 2);
    CHECK(S[1] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(S[0] == 0.0);
    CHECK(S[3] == 0.0);

    // naive double-loop oracle on a random table
    Rng rng(8);
    const int n = 5, p = 3;
    std::vector<double> Y(n * p);
    for (auto& v : Y) v = rng.normal();
    const auto T = euclidean_similarity(Y, n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int c = 0; c < p; ++c) {
                const double d = Y[i * p + c] - Y[j * p + c];
                acc += d * d;
            }
            CHECK(T[i * n + j] == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
            CHECK(T[i * n + j] == T[j * n + i]);
        }
}

TEST_CASE("match-average similarity") {
    // nodes: (inst, spec) pairs
    std::vector<int> attrs{0, 1,   // node 0
                           0, 2,   // node 1: same institution, different specialty
                           3, 4,   // node 2: all different
                           0, 1};  // node 3: identical to node 0
    const auto S = match_average_similarity(attrs, 4, 2);
    CHECK(S[0 * 4 + 1] == doctest::Approx(0.5));
    CHECK(S[0 * 4 + 2] == 0.0);
    CHECK(S[0 * 4 + 3] == 1.0);
    for (int i = 0; i < 4; ++i) CHECK(S[i * 4 + i] == 0.0);
}

TEST_CASE("great-circle distance") {
    CHECK(great_circle_km(40.0, -75.0, 40.0, -75.0) == 0.0);
    const double half = std::numbers::pi * 6371.0;
    CHECK(great_circle_km(0.0, 0.0, 0.0, 180.0) == doctest::Approx(half).epsilon(1e-9));
    CHECK(great_circle_km(45.0, 10.0, -45.0, -170.0) == doctest::Approx(half).epsilon(1e-9));
    CHECK(great_circle_km(0.0, 0.0, 0.0, 90.0) == doctest::Approx(half / 2).epsilon(1e-9));
    CHECK_THROWS_AS(great_circle_km(91.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("combined scaled similarity") {
    Rng rng(12);
    const int n = 6;
    auto random_table = [&](double scale) {
        std::vector<double> t(n * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                t[i * n + j] = t[j * n + i] = scale * rng.uniform(0.0, 5.0);
        return t;
    };
    const auto A = random_table(1.0);
    const auto B = random_table(1.0);

    // scale invariance per component
    std::vector<std::vector<double>> one{A};
    std::vector<double> Ascaled(A);
    for (auto& v : Ascaled) v *= 7.5;
    std::vector<std::vector<double>> one_scaled{Ascaled};
    const auto S1 = combined_scaled_similarity(one, n);
    const auto S2 = combined_scaled_similarity(one_scaled, n);
    for (int i = 0; i < n * n; ++i) CHECK(S1[i] == doctest::Approx(S2[i]).epsilon(1e-12));

    // two components, equal weights, against a hand loop
    std::vector<std::vector<double>> two{A, B};
    const auto S = combined_scaled_similarity(two, n);
    auto sd_upper = [&](const std::vector<double>& t) {
        std::vector<double> v;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) v.push_back(t[i * n + j]);
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / (v.size() - 1));
    };
    const double sa = sd_upper(A), sb = sd_upper(B);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double expect = 0.5 * (A[i * n + j] / sa + B[i * n + j] / sb);
            CHECK(S[i * n + j] == doctest::Approx(expect).epsilon(1e-12));
        }

    // zero-variance component rejected
    std::vector<std::vector<double>> flat{std::vector<double>(n * n, 0.0)};
    CHECK_THROWS_AS(combined_scaled_similarity(flat, n), std::invalid_argument);
}

TEST_CASE("network invariant checks") {
    Network net(3);
    net.set_edge(0, 1, true);
    CHECK(net.degrees[0] == 1);
    CHECK(net.degrees[1] == 1);
    CHECK_NOTHROW(net.validate());
    CHECK_THROWS_AS(net.set_edge(2, 2, true), std::invalid_argument);
}
