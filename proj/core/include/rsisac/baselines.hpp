// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <armadillo>
#include <cstdint>
#include <random>

#include "rsisac/env.hpp"
#include "rsisac/ppo.hpp"

namespace rsisac {

enum class BaselineKind { random, greedy };

struct BaselineConfig {
    BaselineKind kind = BaselineKind::random;
    int greedy_candidates = 32;  // actions tried per step in greedy mode
    int episodes = 500;

    void validate() const;
};

struct BaselineStep {
    arma::vec action;
    StepResult result;
};

// Uniform logits on [-3, 3]; tanh saturates just past 3, so this spans the
// whole decoded range.
arma::vec random_logits(int dim, std::mt19937_64& rng);

BaselineStep random_step(Environment& env, std::mt19937_64& rng);

// Myopic search: drawing `candidates` random actions, scoring each against
// the current channel without advancing it, committing the best (ties keep
// the earliest draw).  One candidate makes this identical to random_step.
BaselineStep greedy_step(Environment& env, std::mt19937_64& rng, int candidates);

// Same schedule and per-episode seeding as PPO training, so every policy
// sees identical channel sequences for a given master seed.
TrainingTrace run_baseline(Environment& env, const BaselineConfig& cfg,
                           std::uint64_t master_seed);

} // namespace rsisac
