// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/ppo.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rsisac/common.hpp"

namespace rsisac {

namespace {

// Keeps the policy spread away from degenerate extremes; inactive in normal
// training, only binds if the ascent runs away.
constexpr double kLogStdCeil = 2.0;

} // namespace

void PpoConfig::validate() const {
    auto fail = [](const char* what) {
        throw std::invalid_argument(std::string("PpoConfig: ") + what);
    };
    if (discount < 0.0 || discount > 1.0) fail("discount must be in [0, 1]");
    if (!(clip > 0.0) || clip >= 1.0) fail("clip must be in (0, 1)");
    if (pool_capacity < 1) fail("pool_capacity must be >= 1");
    if (!(actor_lr > 0.0)) fail("actor_lr must be > 0");
    if (!(critic_lr > 0.0)) fail("critic_lr must be > 0");
    if (update_epochs < 1) fail("update_epochs must be >= 1");
    if (episodes < 1) fail("episodes must be >= 1");
    if (!(reward_scale > 0.0)) fail("reward_scale must be > 0");
    if (!(log_std_floor < kLogStdCeil)) fail("log_std_floor must be < 2");
    if (!(log_std_init >= log_std_floor) || !(log_std_init <= kLogStdCeil))
        fail("log_std_init must lie in [log_std_floor, 2]");
}

ExperiencePool::ExperiencePool(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 1) throw std::invalid_argument("ExperiencePool: capacity must be >= 1");
    transitions_.reserve(capacity_);
}

void ExperiencePool::add(Transition t) {
    if (full()) throw std::logic_error("ExperiencePool: full, run an update before adding more");
    transitions_.push_back(std::move(t));
}

double advantage(double reward, double value_next, double value_now, double discount) {
    if (discount < 0.0 || discount > 1.0)
        throw std::invalid_argument("advantage: discount must be in [0, 1]");
    return reward + discount * value_next - value_now;
}

double gaussian_log_density(const arma::vec& action, const arma::vec& mean,
                            const arma::vec& log_std) {
    if (action.n_elem != mean.n_elem || action.n_elem != log_std.n_elem)
        throw std::invalid_argument("gaussian_log_density: dimension mismatch");
    const arma::vec z = (action - mean) / arma::exp(log_std);
    const double n = static_cast<double>(action.n_elem);
    return -0.5 * n * std::log(2.0 * arma::datum::pi) - arma::accu(log_std) -
           0.5 * arma::dot(z, z);
}

double probability_ratio(double log_density_new, double log_density_old) {
    if (!std::isfinite(log_density_new) || !std::isfinite(log_density_old))
        throw std::runtime_error("probability_ratio: non-finite log density");
    const double ratio = std::exp(log_density_new - log_density_old);
    if (!std::isfinite(ratio)) throw std::runtime_error("probability_ratio: ratio overflow");
    return ratio;
}

double clipped_objective(double ratio, double advantage, double clip) {
    const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    return std::min(ratio * advantage, clipped * advantage);
}

PpoLearner::PpoLearner(int state_dim, int action_dim, PpoConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), state_dim_(state_dim), action_dim_(action_dim), user_count_(0) {
    cfg_.validate();
    if (state_dim_ < 1 || action_dim_ < 1)
        throw std::invalid_argument("PpoLearner: dimensions must be >= 1");
    const int feature_tail = state_dim_ - action_dim_ - 1;
    if (feature_tail < 2 || feature_tail % 2 != 0)
        throw std::invalid_argument(
            "PpoLearner: state must hold the previous action, paired per-user SINR "
            "features, and the previous reward");
    user_count_ = feature_tail / 2;

    std::vector<arma::uword> actor_sizes;
    actor_sizes.push_back(state_dim_);
    for (arma::uword h : cfg_.hidden) actor_sizes.push_back(h);
    actor_sizes.push_back(action_dim_);
    std::vector<arma::uword> critic_sizes;
    critic_sizes.push_back(state_dim_);
    for (arma::uword h : cfg_.hidden) critic_sizes.push_back(h);
    critic_sizes.push_back(1);

    actor_ = DenseNetwork::create(actor_sizes, mix_seed(seed, 1));
    critic_ = DenseNetwork::create(critic_sizes, mix_seed(seed, 2));
    actor_old_ = actor_;
    log_std_.set_size(action_dim_);
    log_std_.fill(cfg_.log_std_init);
    log_std_old_ = log_std_;
    rng_.seed(mix_seed(seed, 3));
}

arma::vec PpoLearner::featurize(const arma::vec& state) const {
    if (static_cast<int>(state.n_elem) != state_dim_)
        throw std::invalid_argument("PpoLearner: state size mismatch");
    // Blockwise fixed scaling keeps every input near unit range: logits live
    // in a few units, SINR features and rewards in tens.
    arma::vec f = state;
    f.head(action_dim_) /= 3.0;
    f.tail(2 * user_count_ + 1) /= 10.0;
    return f;
}

arma::mat PpoLearner::featurize_columns(const std::vector<Transition>& batch, bool next) const {
    arma::mat out(state_dim_, batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        out.col(i) = featurize(next ? batch[i].next_state : batch[i].state);
    return out;
}

PpoLearner::ActionSample PpoLearner::sample_action(const arma::vec& state) {
    const arma::vec feat = featurize(state);
    const arma::vec mean = actor_.forward(feat);
    arma::vec noise(action_dim_);
    for (int i = 0; i < action_dim_; ++i) noise(i) = gauss_(rng_);
    ActionSample out;
    out.action = mean + arma::exp(log_std_) % noise;
    out.log_density = gaussian_log_density(out.action, mean, log_std_);
    return out;
}

arma::vec PpoLearner::mean_action(const arma::vec& state) const {
    return actor_.forward(featurize(state));
}

double PpoLearner::value(const arma::vec& state) const {
    return critic_.forward(featurize(state))(0);
}

double PpoLearner::log_density(const arma::vec& state, const arma::vec& action) const {
    return gaussian_log_density(action, actor_.forward(featurize(state)), log_std_);
}

double PpoLearner::old_log_density(const arma::vec& state, const arma::vec& action) const {
    return gaussian_log_density(action, actor_old_.forward(featurize(state)), log_std_old_);
}

PpoLearner::SurrogateEval PpoLearner::evaluate_surrogate(const std::vector<Transition>& batch,
                                                         const arma::vec& advantages) const {
    if (batch.empty() || advantages.n_elem != batch.size())
        throw std::invalid_argument("evaluate_surrogate: batch/advantage mismatch");
    const arma::uword n = batch.size();
    const arma::mat feats = featurize_columns(batch, false);
    BatchTrace trace;
    const arma::mat means = actor_.forward_batch(feats, trace);

    const arma::vec sigma = arma::exp(log_std_);
    const arma::vec variance = arma::square(sigma);
    const double base =
        -0.5 * action_dim_ * std::log(2.0 * arma::datum::pi) - arma::accu(log_std_);

    SurrogateEval out;
    out.log_std_gradients.zeros(action_dim_);
    arma::mat upstream(action_dim_, n, arma::fill::zeros);
    for (arma::uword i = 0; i < n; ++i) {
        const arma::vec diff = batch[i].action - means.col(i);
        const arma::vec scaled = arma::square(diff) / variance;
        const double logp = base - 0.5 * arma::accu(scaled);
        const double ratio = probability_ratio(logp, batch[i].log_density_old);
        const double adv = advantages(i);
        out.objective += clipped_objective(ratio, adv, cfg_.clip);
        out.mean_ratio += ratio;
        // Outside the trust region on the worsening side the min() selects
        // the flat clipped branch, so the sample contributes no gradient.
        const bool flat = (adv >= 0.0 && ratio > 1.0 + cfg_.clip) ||
                          (adv <= 0.0 && ratio < 1.0 - cfg_.clip);
        if (!flat) {
            const double coeff = adv * ratio;
            upstream.col(i) = coeff * (diff / variance);
            out.log_std_gradients += coeff * (scaled - 1.0);
        }
    }
    out.actor_gradients = actor_.backward_batch(trace, upstream);
    const double inv_n = 1.0 / static_cast<double>(n);
    out.actor_gradients.scale(inv_n);
    out.log_std_gradients *= inv_n;
    out.objective *= inv_n;
    out.mean_ratio *= inv_n;
    return out;
}

PpoLearner::ValueEval PpoLearner::evaluate_value(const std::vector<Transition>& batch,
                                                 const arma::vec& targets) const {
    if (batch.empty() || targets.n_elem != batch.size())
        throw std::invalid_argument("evaluate_value: batch/target mismatch");
    const arma::uword n = batch.size();
    BatchTrace trace;
    const arma::rowvec values = critic_.forward_batch(featurize_columns(batch, false), trace);
    const arma::rowvec error = values - targets.t();
    ValueEval out;
    out.loss = arma::accu(arma::square(error)) / static_cast<double>(n);
    out.gradients = critic_.backward_batch(trace, arma::mat(2.0 * error));
    out.gradients.scale(1.0 / static_cast<double>(n));
    return out;
}

PpoLearner::UpdateDiagnostics PpoLearner::update(ExperiencePool& pool) {
    if (pool.size() < pool.capacity())
        throw std::logic_error("PpoLearner::update: pool has fewer transitions than its capacity");
    const auto& batch = pool.transitions();
    const arma::uword n = batch.size();

    // Targets and advantages are fixed for the whole round, taken from the
    // critic as it stands before any epoch runs.
    BatchTrace trace_now;
    const arma::rowvec v_now = critic_.forward_batch(featurize_columns(batch, false), trace_now);
    BatchTrace trace_next;
    const arma::rowvec v_next =
        critic_.forward_batch(featurize_columns(batch, true), trace_next);

    arma::vec targets(n);
    arma::vec advantages(n);
    for (arma::uword i = 0; i < n; ++i) {
        const double bootstrap = batch[i].done ? 0.0 : v_next(i);
        targets(i) = advantage(cfg_.reward_scale * batch[i].reward, bootstrap, 0.0, cfg_.discount);
        advantages(i) = targets(i) - v_now(i);
    }
    if (cfg_.normalize_advantages && n > 1) {
        const double center = arma::mean(advantages);
        const double spread = arma::stddev(advantages);
        advantages -= center;
        if (spread > 1e-12) advantages /= spread;
    }

    actor_old_ = actor_;
    log_std_old_ = log_std_;

    UpdateDiagnostics diag;
    for (int epoch = 0; epoch < cfg_.update_epochs; ++epoch) {
        const SurrogateEval surrogate = evaluate_surrogate(batch, advantages);
        const ValueEval value_fit = evaluate_value(batch, targets);

        actor_.sgd_step(surrogate.actor_gradients, cfg_.actor_lr, StepDirection::ascend);
        if (!surrogate.log_std_gradients.is_finite())
            throw std::runtime_error("PpoLearner::update: non-finite log-std gradients");
        log_std_ += cfg_.actor_lr * surrogate.log_std_gradients;
        log_std_ = arma::clamp(log_std_, cfg_.log_std_floor, kLogStdCeil);
        critic_.sgd_step(value_fit.gradients, cfg_.critic_lr, StepDirection::descend);

        diag.mean_objective = surrogate.objective;
        diag.mean_ratio = surrogate.mean_ratio;
        diag.value_loss = value_fit.loss;
    }
    pool.clear();
    return diag;
}

void PpoLearner::save(std::ostream& out) const {
    actor_.save(out);
    out.precision(17);
    out << "rsisac-logstd 1\n" << log_std_.n_elem << '\n';
    for (arma::uword i = 0; i < log_std_.n_elem; ++i) out << log_std_(i) << '\n';
    critic_.save(out);
    if (!out) throw std::runtime_error("PpoLearner::save: write failed");
}

void PpoLearner::load(std::istream& in) {
    DenseNetwork actor = DenseNetwork::load(in);
    std::string magic;
    int version = 0;
    arma::uword count = 0;
    in >> magic >> version >> count;
    if (!in || magic != "rsisac-logstd" || version != 1 ||
        count != static_cast<arma::uword>(action_dim_))
        throw std::runtime_error("PpoLearner::load: unrecognized log-std block");
    arma::vec log_std(count);
    for (arma::uword i = 0; i < count; ++i) in >> log_std(i);
    DenseNetwork critic = DenseNetwork::load(in);
    if (!in) throw std::runtime_error("PpoLearner::load: truncated checkpoint");
    if (actor.input_dim() != static_cast<arma::uword>(state_dim_) ||
        actor.output_dim() != static_cast<arma::uword>(action_dim_) ||
        critic.input_dim() != static_cast<arma::uword>(state_dim_) || critic.output_dim() != 1)
        throw std::runtime_error("PpoLearner::load: checkpoint shapes do not match the learner");
    actor_ = std::move(actor);
    actor_old_ = actor_;
    log_std_ = std::move(log_std);
    log_std_old_ = log_std_;
    critic_ = std::move(critic);
}

TrainingTrace train(Environment& env, PpoLearner& learner, std::uint64_t master_seed) {
    const PpoConfig& cfg = learner.config();
    if (learner.state_dim() != env.state_dim() || learner.action_dim() != env.action_dim())
        throw std::invalid_argument("train: learner and environment dimensions disagree");

    ExperiencePool pool(cfg.pool_capacity);
    TrainingTrace trace;
    trace.rows.reserve(cfg.episodes);
    const int steps = env.config().episode_length;

    for (int episode = 0; episode < cfg.episodes; ++episode) {
        try {
            arma::vec state = env.reset(episode_seed(master_seed, episode));
            TraceRow row;
            row.episode = episode;
            double echo_sum = 0.0;
            int violations = 0;
            for (int step = 0; step < steps; ++step) {
                PpoLearner::ActionSample sample = learner.sample_action(state);
                StepResult res = env.step(sample.action);

                Transition t;
                t.state = std::move(state);
                t.action = sample.action;
                t.log_density_old = sample.log_density;
                t.reward = res.reward;
                t.next_state = res.state;
                t.done = res.episode_end;
                pool.add(std::move(t));

                row.mean_reward += res.reward;
                row.mean_ee += res.metrics.energy_efficiency;
                row.mean_sum_rate += res.metrics.sum_rate;
                echo_sum += res.metrics.echo_snr;
                if (!res.metrics.flags.all()) ++violations;

                state = std::move(res.state);
                if (pool.full()) learner.update(pool);
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
            throw std::runtime_error("train: aborted in episode " + std::to_string(episode) +
                                     ": " + e.what());
        }
    }
    return trace;
}

} // namespace rsisac
