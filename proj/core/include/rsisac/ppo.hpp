// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <armadillo>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "rsisac/env.hpp"
#include "rsisac/nn.hpp"

namespace rsisac {

struct PpoConfig {
    double discount = 0.9;  // one-step TD bootstrap weight
    double clip = 0.2;
    int pool_capacity = 64;  // transitions gathered per update round
    double actor_lr = 3e-4;
    double critic_lr = 1e-3;
    int update_epochs = 10;
    int episodes = 500;
    double log_std_init = std::log(0.5);
    // The learned log-std is clamped into [log_std_floor, 2] after every
    // update; a floor above the numerical guard keeps exploration from
    // annealing away on plateaus.
    double log_std_floor = -7.0;
    // Rewards are scaled down inside the learner only; traces keep raw values.
    double reward_scale = 0.1;
    bool normalize_advantages = true;
    std::vector<arma::uword> hidden = {128, 128};

    void validate() const;
};

struct Transition {
    arma::vec state;
    arma::vec action;  // raw logits as sampled
    double log_density_old = 0.0;
    double reward = 0.0;
    arma::vec next_state;
    bool done = false;
};

// Bounded on-policy buffer; the update consumes and clears it, so no
// transition survives a policy change.
class ExperiencePool {
  public:
    explicit ExperiencePool(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return transitions_.size(); }
    bool full() const { return transitions_.size() >= capacity_; }
    void add(Transition t);
    void clear() { transitions_.clear(); }
    const std::vector<Transition>& transitions() const { return transitions_; }

  private:
    std::size_t capacity_;
    std::vector<Transition> transitions_;
};

double advantage(double reward, double value_next, double value_now, double discount);
double gaussian_log_density(const arma::vec& action, const arma::vec& mean,
                            const arma::vec& log_std);
double probability_ratio(double log_density_new, double log_density_old);
double clipped_objective(double ratio, double advantage, double clip);

// Actor-critic pair with a diagonal Gaussian policy over the raw logits.
// The actor outputs the mean; the per-dimension log standard deviation is a
// separate learnable parameter.  The old-policy snapshot is refreshed at the
// start of every update round.
class PpoLearner {
  public:
    struct ActionSample {
        arma::vec action;
        double log_density = 0.0;
    };

    struct UpdateDiagnostics {
        double mean_objective = 0.0;
        double value_loss = 0.0;
        double mean_ratio = 0.0;
    };

    // Mean clipped objective over a batch, with its exact parameter
    // gradients; ratios come from the stored sampling-time densities.
    struct SurrogateEval {
        double objective = 0.0;
        double mean_ratio = 0.0;
        NetworkGradients actor_gradients;
        arma::vec log_std_gradients;
    };

    struct ValueEval {
        double loss = 0.0;  // mean squared error against the frozen targets
        NetworkGradients gradients;
    };

    PpoLearner(int state_dim, int action_dim, PpoConfig cfg, std::uint64_t seed);

    const PpoConfig& config() const { return cfg_; }
    int state_dim() const { return state_dim_; }
    int action_dim() const { return action_dim_; }
    const arma::vec& log_std() const { return log_std_; }

    ActionSample sample_action(const arma::vec& state);
    arma::vec mean_action(const arma::vec& state) const;
    double value(const arma::vec& state) const;
    double log_density(const arma::vec& state, const arma::vec& action) const;
    double old_log_density(const arma::vec& state, const arma::vec& action) const;

    SurrogateEval evaluate_surrogate(const std::vector<Transition>& batch,
                                     const arma::vec& advantages) const;
    ValueEval evaluate_value(const std::vector<Transition>& batch,
                             const arma::vec& targets) const;

    UpdateDiagnostics update(ExperiencePool& pool);

    DenseNetwork& actor() { return actor_; }
    DenseNetwork& critic() { return critic_; }
    arma::vec& log_std_param() { return log_std_; }

    void save(std::ostream& out) const;
    void load(std::istream& in);

  private:
    arma::vec featurize(const arma::vec& state) const;
    arma::mat featurize_columns(const std::vector<Transition>& batch, bool next) const;

    PpoConfig cfg_;
    int state_dim_;
    int action_dim_;
    int user_count_;
    DenseNetwork actor_;
    DenseNetwork actor_old_;
    DenseNetwork critic_;
    arma::vec log_std_;
    arma::vec log_std_old_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_;
};

struct TraceRow {
    int episode = 0;
    double mean_reward = 0.0;
    double mean_ee = 0.0;
    double mean_sum_rate = 0.0;
    double mean_echo_snr_db = 0.0;  // 10 log10 of the mean linear echo SNR
    double violation_fraction = 0.0;
};

struct TrainingTrace {
    std::vector<TraceRow> rows;
};

// Episode seeds derive from the master seed, so two policies trained with
// the same master seed see identical channel sequences.
TrainingTrace train(Environment& env, PpoLearner& learner, std::uint64_t master_seed);

} // namespace rsisac
