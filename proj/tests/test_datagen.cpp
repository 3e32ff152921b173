#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "calf/datagen.hpp"
#include "calf/model.hpp"

using namespace calf;

TEST_CASE("sample_membership proportions") {
    Rng rng(1);
    {
        auto labels = sample_membership(20, 1, rng);
        for (int lab : labels) CHECK(lab == 0);
    }
    {
        // K=3: probabilities (1/2, 1/3, 1/6)
        const int n = 100000;
        auto labels = sample_membership(n, 3, rng);
        int counts[3] = {0, 0, 0};
        for (int lab : labels) ++counts[lab];
        const double probs[3] = {0.5, 1.0 / 3.0, 1.0 / 6.0};
        for (int k = 0; k < 3; ++k) {
            const double se = std::sqrt(probs[k] * (1 - probs[k]) / n);
            CHECK(std::abs(double(counts[k]) / n - probs[k]) < 3 * se);
        }
    }
}

TEST_CASE("cluster centers lie on the radius-sqrt(2w) circle") {
    {
        auto c = cluster_centers(2, 2, 0.5);  // radius 1
        CHECK(c[0] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(c[1] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(c[2] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c[3] == doctest::Approx(0.0).epsilon(1e-12));
    }
    for (int K : {1, 3, 4, 7}) {
        for (int p : {2, 3, 5}) {
            const double omega = 1.5;
            auto c = cluster_centers(K, p, omega);
            for (int k = 0; k < K; ++k) {
                double norm = 0.0;
                for (int d = 0; d < p; ++d) norm += c[k * p + d] * c[k * p + d];
                CHECK(std::sqrt(norm) == doctest::Approx(std::sqrt(2 * omega)).epsilon(1e-12));
                for (int d = 2; d < p; ++d) CHECK(c[k * p + d] == 0.0);
            }
        }
    }
    {
        // chord length between adjacent centers: sqrt(2*r^2*(1-cos(2pi/K)))
        const double omega = 1.5;
        auto c = cluster_centers(4, 2, omega);
        const double dx = c[0] - c[2], dy = c[1] - c[3];
        const double chord = std::sqrt(dx * dx + dy * dy);
        const double expect = std::sqrt(2.0 * 2.0 * omega * (1.0 - std::cos(std::numbers::pi / 2)));
        CHECK(chord == doctest::Approx(expect).epsilon(1e-9));
        CHECK(chord == doctest::Approx(2.449).epsilon(1e-3));
    }
}

TEST_CASE("covariates center on the cluster means with unit variance") {
    Rng rng(5);
    const int K = 2, p = 2;
    const double omega = 1.5;
    auto centers = cluster_centers(K, p, omega);
    const int n = 20000;
    std::vector<int> membership(n);
    for (int i = 0; i < n; ++i) membership[i] = i % K;
    auto X = sample_covariates(membership, centers, K, p, rng);
    for (int k = 0; k < K; ++k) {
        for (int c = 0; c < p; ++c) {
            double mean = 0.0;
            int nk = 0;
            for (int i = k; i < n; i += K) {
                mean += X[std::size_t(i) * p + c];
                ++nk;
            }
            mean /= nk;
            CHECK(std::abs(mean - centers[k * p + c]) < 4.0 / std::sqrt(double(nk)));
            double var = 0.0;
            for (int i = k; i < n; i += K) {
                const double d = X[std::size_t(i) * p + c] - mean;
                var += d * d;
            }
            var /= nk - 1;
            CHECK(var == doctest::Approx(1.0).epsilon(0.06));
        }
    }
}

TEST_CASE("within-block coefficient grid") {
    {
        auto w = within_coefficients(4, -1.6, -1.0);
        CHECK(w[0] == doctest::Approx(-1.6));
        CHECK(w[1] == doctest::Approx(-1.4));
        CHECK(w[2] == doctest::Approx(-1.2));
        CHECK(w[3] == doctest::Approx(-1.0));
    }
    {
        auto w = within_coefficients(1, -1.6, -1.0);
        REQUIRE(w.size() == 1);
        CHECK(w[0] == doctest::Approx(-1.6));
    }
    for (int K : {2, 3, 5}) {
        auto w = within_coefficients(K, -1.6, -1.0);
        CHECK(w.front() == doctest::Approx(-1.6));
        CHECK(w.back() == doctest::Approx(-1.0));
        for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] >= w[k - 1]);
    }
}

TEST_CASE("generated adjacency is symmetric, binary, no self-loops") {
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        GenConfig cfg;
        cfg.n = 60;
        cfg.K = 3;
        cfg.seed = seed;
        auto syn = generate(cfg);
        CHECK_NOTHROW(syn.network.validate());
        CHECK(int(syn.true_membership.size()) == cfg.n);
        for (int lab : syn.true_membership) {
            CHECK(lab >= 0);
            CHECK(lab < cfg.K);
        }
    }
}

TEST_CASE("fixed seed reproduces the synthetic network exactly") {
    GenConfig cfg;
    cfg.n = 50;
    cfg.K = 2;
    cfg.seed = 1234;
    auto a = generate(cfg);
    auto b = generate(cfg);
    CHECK(a.network.adjacency == b.network.adjacency);
    CHECK(a.node_data.covariates == b.node_data.covariates);
    CHECK(a.true_membership == b.true_membership);
    CHECK(a.true_theta == b.true_theta);
}

TEST_CASE("degenerate zero-coefficient config gives density 1/2") {
    GenConfig cfg;
    cfg.n = 50;
    cfg.K = 2;
    cfg.beta0 = 0.0;
    cfg.beta_within_range = {0.0, 0.0};
    cfg.beta_between = 0.0;
    cfg.theta_variance = 0.0;
    double density = 0.0;
    const int reps = 50;
    for (int r = 0; r < reps; ++r) {
        cfg.seed = 1000 + r;
        auto syn = generate(cfg);
        density += double(syn.network.num_edges()) / syn.network.num_dyads();
    }
    density /= reps;
    CHECK(std::abs(density - 0.5) < 0.03);
}

TEST_CASE("paper-style config lands near 10% density") {
    GenConfig cfg;
    cfg.n = 400;
    cfg.K = 2;
    cfg.omega = 1.5;
    double density = 0.0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        cfg.seed = 42 + r;
        auto syn = generate(cfg);
        density += double(syn.network.num_edges()) / syn.network.num_dyads();
    }
    density /= reps;
    CHECK(std::abs(density - 0.10) < 0.05);
}

TEST_CASE("empirical edge frequencies match eta on a tiny fixed instance") {
    GenConfig cfg;
    cfg.n = 4;
    cfg.K = 2;
    cfg.theta_variance = 0.0;
    cfg.seed = 7;
    // analytic probabilities from the first draw's state
    auto base = generate(cfg);
    const auto& st = base.true_state;
    double freq[4][4] = {};
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) {
        Rng rng(5000 + r);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const double e = eta(st.coefficients, base.node_data.s(i, j),
                                     st.theta[i], st.theta[j], st.membership[i],
                                     st.membership[j]);
                if (rng.bernoulli(e)) freq[i][j] += 1.0;
            }
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double e = eta(st.coefficients, base.node_data.s(i, j), st.theta[i],
                                 st.theta[j], st.membership[i], st.membership[j]);
            const double se = std::sqrt(e * (1 - e) / reps);
            CHECK(std::abs(freq[i][j] / reps - e) < 3 * se + 1e-9);
        }
}

TEST_CASE("config validation") {
    GenConfig cfg;
    cfg.n = 2;
    cfg.K = 5;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    cfg.K = 1;
    cfg.omega = -1.0;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
}
