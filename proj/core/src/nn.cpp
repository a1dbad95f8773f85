// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/nn.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace rsisac {

bool NetworkGradients::is_finite() const {
    for (const auto& w : weights)
        if (!w.is_finite()) return false;
    for (const auto& b : biases)
        if (!b.is_finite()) return false;
    return true;
}

void NetworkGradients::scale(double s) {
    for (auto& w : weights) w *= s;
    for (auto& b : biases) b *= s;
}

void NetworkGradients::accumulate(const NetworkGradients& other) {
    if (other.weights.size() != weights.size())
        throw std::invalid_argument("NetworkGradients: layer count mismatch");
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l] += other.weights[l];
        biases[l] += other.biases[l];
    }
}

DenseNetwork DenseNetwork::create(const std::vector<arma::uword>& sizes, std::uint64_t seed) {
    if (sizes.size() < 2) throw std::invalid_argument("DenseNetwork: need at least two layer sizes");
    for (arma::uword s : sizes)
        if (s == 0) throw std::invalid_argument("DenseNetwork: layer sizes must be positive");
    std::mt19937_64 rng(seed);
    DenseNetwork net;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const double bound = std::sqrt(1.0 / static_cast<double>(sizes[l]));
        std::uniform_real_distribution<double> uni(-bound, bound);
        arma::mat w(sizes[l + 1], sizes[l]);
        w.imbue([&]() { return uni(rng); });
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(sizes[l + 1], arma::fill::zeros);
    }
    return net;
}

std::size_t DenseNetwork::parameter_count() const {
    std::size_t count = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        count += weights[l].n_elem + biases[l].n_elem;
    return count;
}

arma::vec DenseNetwork::forward(const arma::vec& x) const {
    ForwardTrace trace;
    return forward(x, trace);
}

arma::vec DenseNetwork::forward(const arma::vec& x, ForwardTrace& trace) const {
    if (x.n_elem != input_dim())
        throw std::invalid_argument("DenseNetwork::forward: input size mismatch");
    trace.layers.clear();
    trace.layers.reserve(weights.size() + 1);
    trace.layers.push_back(x);
    arma::vec a = x;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        a = weights[l] * a + biases[l];
        if (l + 1 < weights.size()) a = arma::tanh(a);
        trace.layers.push_back(a);
    }
    return a;
}

arma::mat DenseNetwork::forward_batch(const arma::mat& x_columns, BatchTrace& trace) const {
    if (x_columns.n_rows != input_dim())
        throw std::invalid_argument("DenseNetwork::forward_batch: input size mismatch");
    trace.layers.clear();
    trace.layers.reserve(weights.size() + 1);
    trace.layers.push_back(x_columns);
    arma::mat a = x_columns;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        a = weights[l] * a;
        a.each_col() += biases[l];
        if (l + 1 < weights.size()) a = arma::tanh(a);
        trace.layers.push_back(a);
    }
    return a;
}

NetworkGradients DenseNetwork::backward(const ForwardTrace& trace, const arma::vec& upstream,
                                        arma::vec* input_gradient) const {
    if (trace.layers.size() != weights.size() + 1)
        throw std::invalid_argument("DenseNetwork::backward: trace does not match network depth");
    if (upstream.n_elem != output_dim())
        throw std::invalid_argument("DenseNetwork::backward: upstream size mismatch");

    NetworkGradients grads = zero_gradients();
    arma::vec delta = upstream;
    for (std::size_t l = weights.size(); l-- > 0;) {
        // Hidden outputs are tanh(z); the output layer is affine.
        if (l + 1 < weights.size()) delta %= 1.0 - arma::square(trace.layers[l + 1]);
        grads.weights[l] = delta * trace.layers[l].t();
        grads.biases[l] = delta;
        delta = weights[l].t() * delta;
    }
    if (input_gradient) *input_gradient = delta;
    return grads;
}

NetworkGradients DenseNetwork::backward_batch(const BatchTrace& trace,
                                              const arma::mat& upstream) const {
    if (trace.layers.size() != weights.size() + 1)
        throw std::invalid_argument("DenseNetwork::backward_batch: trace does not match network");
    if (upstream.n_rows != output_dim() || upstream.n_cols != trace.layers[0].n_cols)
        throw std::invalid_argument("DenseNetwork::backward_batch: upstream shape mismatch");

    NetworkGradients grads = zero_gradients();
    arma::mat delta = upstream;
    for (std::size_t l = weights.size(); l-- > 0;) {
        if (l + 1 < weights.size()) delta %= 1.0 - arma::square(trace.layers[l + 1]);
        grads.weights[l] = delta * trace.layers[l].t();
        grads.biases[l] = arma::sum(delta, 1);
        delta = weights[l].t() * delta;
    }
    return grads;
}

NetworkGradients DenseNetwork::zero_gradients() const {
    NetworkGradients g;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        g.weights.emplace_back(arma::size(weights[l]), arma::fill::zeros);
        g.biases.emplace_back(arma::size(biases[l]), arma::fill::zeros);
    }
    return g;
}

void DenseNetwork::sgd_step(const NetworkGradients& grads, double learning_rate,
                            StepDirection direction) {
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("DenseNetwork::sgd_step: learning_rate must be > 0");
    if (grads.weights.size() != weights.size())
        throw std::invalid_argument("DenseNetwork::sgd_step: gradient shape mismatch");
    if (!grads.is_finite())
        throw std::runtime_error("DenseNetwork::sgd_step: non-finite gradients");
    const double sign = direction == StepDirection::ascend ? 1.0 : -1.0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l] += sign * learning_rate * grads.weights[l];
        biases[l] += sign * learning_rate * grads.biases[l];
    }
}

void DenseNetwork::save(std::ostream& out) const {
    out.precision(17);
    out << "rsisac-dense 1\n" << weights.size() + 1;
    out << ' ' << input_dim();
    for (const auto& w : weights) out << ' ' << w.n_rows;
    out << '\n';
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (arma::uword i = 0; i < weights[l].n_elem; ++i) out << weights[l](i) << '\n';
        for (arma::uword i = 0; i < biases[l].n_elem; ++i) out << biases[l](i) << '\n';
    }
    if (!out) throw std::runtime_error("DenseNetwork::save: write failed");
}

DenseNetwork DenseNetwork::load(std::istream& in) {
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (!in || magic != "rsisac-dense" || version != 1)
        throw std::runtime_error("DenseNetwork::load: unrecognized header");
    std::size_t layer_count = 0;
    in >> layer_count;
    if (!in || layer_count < 2) throw std::runtime_error("DenseNetwork::load: bad layer count");
    std::vector<arma::uword> sizes(layer_count);
    for (auto& s : sizes) {
        in >> s;
        if (!in || s == 0) throw std::runtime_error("DenseNetwork::load: bad layer size");
    }
    DenseNetwork net;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        arma::mat w(sizes[l + 1], sizes[l]);
        for (arma::uword i = 0; i < w.n_elem; ++i) in >> w(i);
        arma::vec b(sizes[l + 1]);
        for (arma::uword i = 0; i < b.n_elem; ++i) in >> b(i);
        if (!in) throw std::runtime_error("DenseNetwork::load: truncated parameter data");
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
    }
    return net;
}

} // namespace rsisac
