#include "calf/model.hpp"

namespace calf {

void check_dimensions(const Network& net, const NodeData& nd, const ModelState& state) {
    if (nd.n != net.n) throw std::invalid_argument("network/node-data size mismatch");
    if (state.n() != net.n) throw std::invalid_argument("state size mismatch");
    if (int(state.membership.size()) != net.n)
        throw std::invalid_argument("membership size mismatch");
    if (state.coefficients.K != state.K)
        throw std::invalid_argument("coefficient dimension mismatch");
    for (int lab : state.membership)
        if (lab < 0 || lab >= state.K) throw std::invalid_argument("label out of range");
}

void fill_dyad_logits(const NodeData& nd, const ModelState& state,
                      std::span<double> logits) {
    const int n = nd.n;
    std::size_t d = 0;
    for (int i = 0; i < n; ++i) {
        const int k = state.membership[i];
        const double ti = state.theta[i];
        for (int j = i + 1; j < n; ++j, ++d)
            logits[d] = dyad_logit(state.coefficients, nd.s(i, j), ti,
                                   state.theta[j], k, state.membership[j]);
    }
}

void fill_dyad_responses(const Network& net, std::span<std::uint8_t> y) {
    const int n = net.n;
    std::size_t d = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++d) y[d] = net.at(i, j);
}

double log_likelihood(const Network& net, const NodeData& nd, const ModelState& state) {
    check_dimensions(net, nd, state);
    const std::size_t m = std::size_t(net.num_dyads());
    std::vector<double> logits(m);
    std::vector<std::uint8_t> y(m);
    fill_dyad_logits(nd, state, logits);
    fill_dyad_responses(net, y);
    return kernels::bernoulli_loglik_sum(logits, y);
}

std::vector<double> dyad_log_likelihoods(const Network& net, const NodeData& nd,
                                         const ModelState& state) {
    check_dimensions(net, nd, state);
    const std::size_t m = std::size_t(net.num_dyads());
    std::vector<double> logits(m);
    std::vector<std::uint8_t> y(m);
    fill_dyad_logits(nd, state, logits);
    fill_dyad_responses(net, y);
    std::vector<double> out(m);
    kernels::bernoulli_loglik(logits, y, out);
    return out;
}

}  // namespace calf
