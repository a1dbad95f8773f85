// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <armadillo>
#include <cstdint>

#include "rsisac/beamforming.hpp"
#include "rsisac/channel.hpp"
#include "rsisac/geometry.hpp"
#include "rsisac/metrics.hpp"

namespace rsisac {

struct EnvConfig {
    SceneGeometry geometry;
    FadingConfig fading;
    Mobility mobility;
    PowerModel power;
    QosThresholds qos;
    PhaseCodebook codebook;
    double step_interval = 1e-3;  // s between decisions
    int episode_length = 100;     // steps per episode
    bool sdma = false;            // drop the common stream entirely

    void validate() const;
    ActionLayout layout() const;
    int action_dim() const { return layout().dim(); }
    // Encoded state: previous raw action, per-user common and private SINR
    // features, previous reward.
    int state_dim() const { return action_dim() + 2 * geometry.user_count + 1; }
};

struct StepResult {
    arma::vec state;
    double reward = 0.0;
    LinkMetrics metrics;
    bool episode_end = false;
    bool fallback = false;  // assembly rejected the action; reward forced to 0
};

// One episode draws the diffuse channel components once; stepping rotates
// the deterministic parts forward in time.  All randomness comes through the
// reset seed, so a seed pins the whole episode.
class Environment {
  public:
    explicit Environment(EnvConfig config);

    const EnvConfig& config() const { return cfg_; }
    const ActionLayout& layout() const { return layout_; }
    int state_dim() const { return cfg_.state_dim(); }
    int action_dim() const { return layout_.dim(); }

    arma::vec reset(std::uint64_t seed);
    StepResult step(const arma::vec& logits);

    // Evaluate an action against the current channel without advancing it.
    LinkMetrics peek_metrics(const arma::vec& logits) const;
    double peek_reward(const arma::vec& logits) const;

    const ChannelRealization& channel() const;
    int step_index() const { return step_index_; }

  private:
    arma::vec encode_state(const arma::vec& prev_logits, const LinkMetrics& m,
                           double prev_reward) const;
    void require_ready() const;

    EnvConfig cfg_;
    ActionLayout layout_;
    ChannelRealization real_;
    int step_index_ = 0;
    bool ready_ = false;
};

} // namespace rsisac
