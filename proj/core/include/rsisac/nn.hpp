// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <armadillo>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace rsisac {

struct NetworkGradients {
    std::vector<arma::mat> weights;
    std::vector<arma::vec> biases;

    bool is_finite() const;
    void scale(double s);
    void accumulate(const NetworkGradients& other);
};

// Post-activation values per layer, captured during forward so backward can
// run without replaying the network.  layers[0] is the input, layers.back()
// the output.
struct ForwardTrace {
    std::vector<arma::vec> layers;
};

// Same idea with one sample per column.
struct BatchTrace {
    std::vector<arma::mat> layers;
};

enum class StepDirection { ascend, descend };

// Plain dense feed-forward network: tanh hidden layers, identity output.
// Forward on frozen parameters is safe to call from several threads; updates
// need exclusive access.
struct DenseNetwork {
    std::vector<arma::mat> weights;  // layer l maps sizes[l] -> sizes[l+1]
    std::vector<arma::vec> biases;

    // Uniform fan-in init on [-sqrt(1/fan_in), sqrt(1/fan_in)], zero biases.
    static DenseNetwork create(const std::vector<arma::uword>& sizes, std::uint64_t seed);

    arma::uword input_dim() const { return weights.front().n_cols; }
    arma::uword output_dim() const { return weights.back().n_rows; }
    std::size_t parameter_count() const;

    arma::vec forward(const arma::vec& x) const;
    arma::vec forward(const arma::vec& x, ForwardTrace& trace) const;
    arma::mat forward_batch(const arma::mat& x_columns, BatchTrace& trace) const;

    // Exact gradient of dot(upstream, forward(x)) with respect to every
    // parameter; optionally also with respect to the input.
    NetworkGradients backward(const ForwardTrace& trace, const arma::vec& upstream,
                              arma::vec* input_gradient = nullptr) const;

    // Gradient summed over columns: each column of `upstream` pairs with the
    // matching sample in the trace.
    NetworkGradients backward_batch(const BatchTrace& trace, const arma::mat& upstream) const;

    NetworkGradients zero_gradients() const;

    // In-place parameter step along (ascend) or against (descend) the
    // gradient; the caller averages over its batch first.
    void sgd_step(const NetworkGradients& grads, double learning_rate, StepDirection direction);

    // Whitespace-separated text dump: magic line, layer sizes, then each
    // layer's weights (column-major) and biases at full precision.
    void save(std::ostream& out) const;
    static DenseNetwork load(std::istream& in);
};

} // namespace rsisac
