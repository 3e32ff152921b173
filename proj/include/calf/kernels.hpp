#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Dyad-level Bernoulli log-likelihood kernels with a logit parameterization.
// Scalar reference implementations are always available; a SIMD variant is
// selected at runtime on CPUs that support it. All variants clamp the logit
// to [-kLogitClamp, kLogitClamp] so probabilities stay inside (0, 1) and logs
// stay finite.
namespace calf::kernels {

inline constexpr double kLogitClamp = 35.0;

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);
// override dispatch (tests, CALF_KERNELS=scalar|avx2 env); returns the
// backend actually in effect
Backend force_backend(Backend b);

// sum over i of y_i * x_i - log(1 + exp(x_i)), x = logit
double bernoulli_loglik_sum_scalar(std::span<const double> logits,
                                   std::span<const std::uint8_t> y);
double bernoulli_loglik_sum(std::span<const double> logits,
                            std::span<const std::uint8_t> y);

// per-element Bernoulli log-likelihood terms
void bernoulli_loglik_scalar(std::span<const double> logits,
                             std::span<const std::uint8_t> y,
                             std::span<double> out);
void bernoulli_loglik(std::span<const double> logits,
                      std::span<const std::uint8_t> y,
                      std::span<double> out);

// inverse-logit, element-wise
void logistic_scalar(std::span<const double> logits, std::span<double> out);
void logistic(std::span<const double> logits, std::span<double> out);

double logistic1(double logit);

#if defined(__x86_64__)
namespace avx2 {
double bernoulli_loglik_sum(std::span<const double> logits,
                            std::span<const std::uint8_t> y);
void bernoulli_loglik(std::span<const double> logits,
                      std::span<const std::uint8_t> y,
                      std::span<double> out);
void logistic(std::span<const double> logits, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace calf::kernels
