// AVX2 kernel variants via std::experimental::simd. This translation unit is
// the only one compiled with -mavx2; callers reach it through the runtime
// dispatch in kernels.cpp.
#if defined(__x86_64__)

#include <experimental/simd>

#include "calf/kernels.hpp"

namespace stdx = std::experimental;

namespace calf::kernels::avx2 {

namespace {

using vd = stdx::native_simd<double>;
constexpr std::size_t W = vd::size();

inline vd clamp_logit(vd x) {
    return stdx::clamp(x, vd(-kLogitClamp), vd(kLogitClamp));
}

// max(x, 0) + log(1 + exp(-|x|)); |x| <= 35 keeps exp in range
inline vd softplus(vd x) {
    const vd e = stdx::exp(-stdx::abs(x));
    return stdx::max(x, vd(0.0)) + stdx::log(vd(1.0) + e);
}

}  // namespace

double bernoulli_loglik_sum(std::span<const double> logits,
                            std::span<const std::uint8_t> y) {
    const std::size_t n = logits.size();
    vd acc(0.0);
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        vd x;
        x.copy_from(logits.data() + i, stdx::element_aligned);
        x = clamp_logit(x);
        vd yx;
        for (std::size_t k = 0; k < W; ++k) yx[k] = y[i + k] ? x[k] : 0.0;
        acc += yx - softplus(x);
    }
    double tail = stdx::reduce(acc);
    if (i < n)
        tail += bernoulli_loglik_sum_scalar(logits.subspan(i), y.subspan(i));
    return tail;
}

void bernoulli_loglik(std::span<const double> logits,
                      std::span<const std::uint8_t> y,
                      std::span<double> out) {
    const std::size_t n = logits.size();
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        vd x;
        x.copy_from(logits.data() + i, stdx::element_aligned);
        x = clamp_logit(x);
        vd r = -softplus(x);
        for (std::size_t k = 0; k < W; ++k)
            if (y[i + k]) r[k] += x[k];
        r.copy_to(out.data() + i, stdx::element_aligned);
    }
    if (i < n)
        bernoulli_loglik_scalar(logits.subspan(i), y.subspan(i), out.subspan(i));
}

void logistic(std::span<const double> logits, std::span<double> out) {
    const std::size_t n = logits.size();
    std::size_t i = 0;
    for (; i + W <= n; i += W) {
        vd x;
        x.copy_from(logits.data() + i, stdx::element_aligned);
        x = clamp_logit(x);
        const vd r = vd(1.0) / (vd(1.0) + stdx::exp(-x));
        r.copy_to(out.data() + i, stdx::element_aligned);
    }
    if (i < n) logistic_scalar(logits.subspan(i), out.subspan(i));
}

}  // namespace calf::kernels::avx2

#endif  // __x86_64__
