// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/env.hpp"

#include <exception>
#include <stdexcept>

#include "rsisac/common.hpp"

namespace rsisac {

void EnvConfig::validate() const {
    geometry.validate();
    fading.validate();
    mobility.validate();
    power.validate();
    qos.validate();
    codebook.validate();
    if (!(step_interval > 0.0))
        throw std::invalid_argument("EnvConfig: step_interval must be > 0");
    if (episode_length < 1)
        throw std::invalid_argument("EnvConfig: episode_length must be >= 1");
}

ActionLayout EnvConfig::layout() const {
    ActionLayout l;
    l.users = geometry.user_count;
    l.irs_elements = geometry.irs_elements;
    l.sdma = sdma;
    return l;
}

Environment::Environment(EnvConfig config) : cfg_(std::move(config)), layout_(cfg_.layout()) {
    cfg_.validate();
}

arma::vec Environment::reset(std::uint64_t seed) {
    real_ = realize(cfg_.geometry, cfg_.fading, cfg_.mobility, 0.0, seed);
    step_index_ = 0;
    ready_ = true;
    const arma::vec zero_logits(layout_.dim(), arma::fill::zeros);
    const LinkMetrics m = peek_metrics(zero_logits);
    return encode_state(zero_logits, m, 0.0);
}

StepResult Environment::step(const arma::vec& logits) {
    require_ready();
    if (step_index_ >= cfg_.episode_length)
        throw std::logic_error("Environment::step: episode finished, call reset");

    StepResult out;
    try {
        out.metrics = peek_metrics(logits);
        out.reward = out.metrics.reward;
    } catch (const std::exception& e) {
        warn(std::string("environment: action rejected during assembly (") + e.what() +
             "), reward forced to 0");
        out.fallback = true;
        out.metrics = LinkMetrics{};
        out.metrics.sinr_common.zeros(cfg_.geometry.user_count);
        out.metrics.sinr_private.zeros(cfg_.geometry.user_count);
        out.metrics.user_rates.zeros(cfg_.geometry.user_count);
        out.reward = 0.0;
    }

    real_ = advance(real_, cfg_.geometry, cfg_.fading, cfg_.mobility, cfg_.step_interval);
    ++step_index_;
    out.episode_end = step_index_ >= cfg_.episode_length;
    out.state = encode_state(logits, out.metrics, out.reward);
    return out;
}

LinkMetrics Environment::peek_metrics(const arma::vec& logits) const {
    require_ready();
    const Decision d =
        assemble(logits, layout_, real_, cfg_.codebook, cfg_.power, cfg_.fading, nullptr);
    return evaluate(real_, d, cfg_.power, cfg_.qos, cfg_.fading);
}

double Environment::peek_reward(const arma::vec& logits) const {
    return peek_metrics(logits).reward;
}

const ChannelRealization& Environment::channel() const {
    require_ready();
    return real_;
}

arma::vec Environment::encode_state(const arma::vec& prev_logits, const LinkMetrics& m,
                                    double prev_reward) const {
    // SINRs enter as log2(1 + sinr): nonnegative and on the same few-units
    // scale as the rest of the state instead of spanning orders of magnitude.
    arma::vec state(cfg_.state_dim());
    const int users = cfg_.geometry.user_count;
    state.subvec(0, layout_.dim() - 1) = prev_logits;
    for (int k = 0; k < users; ++k) {
        state(layout_.dim() + k) = std::log2(1.0 + m.sinr_common(k));
        state(layout_.dim() + users + k) = std::log2(1.0 + m.sinr_private(k));
    }
    state(state.n_elem - 1) = prev_reward;
    return state;
}

void Environment::require_ready() const {
    if (!ready_) throw std::logic_error("Environment: reset must be called first");
}

} // namespace rsisac
