// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rsisac/common.hpp"

namespace rsisac {

void BaselineConfig::validate() const {
    if (greedy_candidates < 1)
        throw std::invalid_argument("BaselineConfig: greedy_candidates must be >= 1");
    if (episodes < 1) throw std::invalid_argument("BaselineConfig: episodes must be >= 1");
}

arma::vec random_logits(int dim, std::mt19937_64& rng) {
    if (dim < 1) throw std::invalid_argument("random_logits: dim must be >= 1");
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    arma::vec out(dim);
    for (int i = 0; i < dim; ++i) out(i) = uni(rng);
    return out;
}

BaselineStep random_step(Environment& env, std::mt19937_64& rng) {
    BaselineStep out;
    out.action = random_logits(env.action_dim(), rng);
    out.result = env.step(out.action);
    return out;
}

BaselineStep greedy_step(Environment& env, std::mt19937_64& rng, int candidates) {
    if (candidates < 1) throw std::invalid_argument("greedy_step: candidates must be >= 1");
    arma::vec best_action;
    double best_reward = -std::numeric_limits<double>::infinity();
    for (int q = 0; q < candidates; ++q) {
        arma::vec candidate = random_logits(env.action_dim(), rng);
        const double reward = env.peek_reward(candidate);
        if (reward > best_reward) {
            best_reward = reward;
            best_action = std::move(candidate);
        }
    }
    BaselineStep out;
    out.action = std::move(best_action);
    out.result = env.step(out.action);
    return out;
}

TrainingTrace run_baseline(Environment& env, const BaselineConfig& cfg,
                           std::uint64_t master_seed) {
    cfg.validate();
    std::mt19937_64 rng(mix_seed(master_seed, 0x42415345ULL));
    TrainingTrace trace;
    trace.rows.reserve(cfg.episodes);
    const int steps = env.config().episode_length;

    for (int episode = 0; episode < cfg.episodes; ++episode) {
        try {
            env.reset(episode_seed(master_seed, episode));
            TraceRow row;
            row.episode = episode;
            double echo_sum = 0.0;
            int violations = 0;
            for (int step = 0; step < steps; ++step) {
                const BaselineStep b = cfg.kind == BaselineKind::greedy
                                           ? greedy_step(env, rng, cfg.greedy_candidates)
                                           : random_step(env, rng);
                row.mean_reward += b.result.reward;
                row.mean_ee += b.result.metrics.energy_efficiency;
                row.mean_sum_rate += b.result.metrics.sum_rate;
                echo_sum += b.result.metrics.echo_snr;
                if (!b.result.metrics.flags.all()) ++violations;
            }
            row.mean_reward /= steps;
            row.mean_ee /= steps;
            row.mean_sum_rate /= steps;
            const double mean_echo = echo_sum / steps;
            row.mean_echo_snr_db = mean_echo > 0.0
                                       ? 10.0 * std::log10(mean_echo)
                                       : -std::numeric_limits<double>::infinity();
            row.violation_fraction = static_cast<double>(violations) / steps;
            trace.rows.push_back(row);
        } catch (const std::exception& e) {
            throw std::runtime_error("run_baseline: aborted in episode " +
                                     std::to_string(episode) + ": " + e.what());
        }
    }
    return trace;
}

} // namespace rsisac
