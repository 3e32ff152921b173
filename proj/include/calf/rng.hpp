#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace calf {

// Splittable counter-based generator (SplitMix64 core, SplittableRandom-style
// stream splitting). All samplers are hand-rolled so that draws are identical
// across standard libraries and platforms for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))),
          gamma_(mix_gamma(mix(state_ + 0xbf58476d1ce4e5b9ULL))) {}

    std::uint64_t next_u64() {
        state_ += gamma_;
        return mix(state_);
    }

    // child generator with an independent stream; parent advances once
    Rng split(std::uint64_t stream) {
        return Rng(next_u64(), stream);
    }

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t uniform_int(std::uint64_t n) {
        // Lemire rejection-free-ish bounded draw with rejection for exactness
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % n;
        } while (x - r > std::uint64_t(-1) - n + 1);
        return r;
    }

    // Marsaglia polar method, cached second deviate
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Marsaglia-Tsang for shape >= 1, boost trick for shape < 1
    double gamma(double shape, double scale = 1.0) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    // IG(a, b): reciprocal of Gamma(shape=a, rate=b)
    double inverse_gamma(double shape, double scale) {
        return scale / gamma(shape, 1.0);
    }

    void dirichlet(std::span<const double> conc, std::span<double> out) {
        double sum = 0.0;
        for (std::size_t k = 0; k < conc.size(); ++k) {
            out[k] = gamma(conc[k]);
            sum += out[k];
        }
        for (std::size_t k = 0; k < conc.size(); ++k) out[k] /= sum;
    }

    // index draw from unnormalized probabilities
    std::size_t categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform() * total;
        for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
            u -= weights[k];
            if (u < 0.0) return k;
        }
        return weights.size() - 1;
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // gammas must be odd; keep them well-mixed
    static std::uint64_t mix_gamma(std::uint64_t z) { return z | 1ULL; }

    std::uint64_t state_;
    std::uint64_t gamma_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace calf
