#include "calf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace calf::kernels {

namespace {

inline double clamp_logit(double x) {
    return std::clamp(x, -kLogitClamp, kLogitClamp);
}

inline double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

Backend detect() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend initial_backend() {
    if (const char* env = std::getenv("CALF_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && detect() == Backend::avx2)
            return Backend::avx2;
    }
    return detect();
}

Backend g_backend = initial_backend();

}  // namespace

Backend active_backend() { return g_backend; }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::avx2: return "avx2";
        default: return "scalar";
    }
}

Backend force_backend(Backend b) {
    if (b == Backend::avx2 && detect() != Backend::avx2) b = Backend::scalar;
    g_backend = b;
    return g_backend;
}

double bernoulli_loglik_sum_scalar(std::span<const double> logits,
                                   std::span<const std::uint8_t> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double x = clamp_logit(logits[i]);
        acc += (y[i] ? x : 0.0) - softplus(x);
    }
    return acc;
}

void bernoulli_loglik_scalar(std::span<const double> logits,
                             std::span<const std::uint8_t> y,
                             std::span<double> out) {
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double x = clamp_logit(logits[i]);
        out[i] = (y[i] ? x : 0.0) - softplus(x);
    }
}

void logistic_scalar(std::span<const double> logits, std::span<double> out) {
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double x = clamp_logit(logits[i]);
        out[i] = 1.0 / (1.0 + std::exp(-x));
    }
}

double logistic1(double logit) {
    const double x = clamp_logit(logit);
    return 1.0 / (1.0 + std::exp(-x));
}

double bernoulli_loglik_sum(std::span<const double> logits,
                            std::span<const std::uint8_t> y) {
#if defined(__x86_64__)
    if (g_backend == Backend::avx2) return avx2::bernoulli_loglik_sum(logits, y);
#endif
    return bernoulli_loglik_sum_scalar(logits, y);
}

void bernoulli_loglik(std::span<const double> logits,
                      std::span<const std::uint8_t> y,
                      std::span<double> out) {
#if defined(__x86_64__)
    if (g_backend == Backend::avx2) return avx2::bernoulli_loglik(logits, y, out);
#endif
    bernoulli_loglik_scalar(logits, y, out);
}

void logistic(std::span<const double> logits, std::span<double> out) {
#if defined(__x86_64__)
    if (g_backend == Backend::avx2) return avx2::logistic(logits, out);
#endif
    logistic_scalar(logits, out);
}

}  // namespace calf::kernels
