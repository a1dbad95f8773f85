// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <armadillo>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rsisac/env.hpp"
#include "rsisac/ppo.hpp"

namespace {

arma::vec random_vec(arma::uword n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    arma::vec v(n);
    v.imbue([&]() { return u(rng); });
    return v;
}

bool close(double a, double b, double tol, double floor) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + floor;
}

rsisac::PpoConfig small_cfg() {
    rsisac::PpoConfig cfg;
    cfg.hidden = {8};
    return cfg;
}

// 7-dim state = 4 action logits + 2 SINR features + reward slot.
rsisac::PpoLearner small_learner(std::uint64_t seed = 1) {
    return rsisac::PpoLearner(7, 4, small_cfg(), seed);
}

rsisac::Transition on_policy_transition(rsisac::PpoLearner& learner, std::uint64_t seed) {
    rsisac::Transition t;
    t.state = random_vec(7, seed);
    t.action = learner.mean_action(t.state) + arma::vec{0.3, -0.2, 0.1, 0.4};
    t.log_density_old = learner.log_density(t.state, t.action);
    t.reward = 0.3;
    t.next_state = random_vec(7, seed + 1);
    t.done = false;
    return t;
}

} // namespace

TEST_SUITE("ppo") {

TEST_CASE("one-step advantage") {
    CHECK(rsisac::advantage(1.0, 2.0, 0.5, 0.9) == doctest::Approx(2.3).epsilon(1e-15));
    CHECK(rsisac::advantage(1.0, 2.0, 0.5, 0.0) == 0.5);
    CHECK(rsisac::advantage(0.0, 0.0, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(rsisac::advantage(1.0, 2.0, 0.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(rsisac::advantage(1.0, 2.0, 0.5, -0.1), std::invalid_argument);
}

TEST_CASE("clipped objective") {
    // Inside the trust region the raw product wins.
    CHECK(rsisac::clipped_objective(1.0, 0.7, 0.2) == 0.7);
    CHECK(rsisac::clipped_objective(1.1, 2.0, 0.2) == doctest::Approx(2.2).epsilon(1e-15));
    // Overshooting ratio with positive advantage is clipped down.
    CHECK(rsisac::clipped_objective(1.5, 2.0, 0.2) == doctest::Approx(2.4).epsilon(1e-15));
    // Undershooting ratio with negative advantage: the min picks the clipped
    // branch, which is the more pessimistic value.
    CHECK(rsisac::clipped_objective(0.5, -1.0, 0.2) == doctest::Approx(-0.8).epsilon(1e-15));
    CHECK(rsisac::clipped_objective(2.0, -1.0, 0.2) == -2.0);
}

TEST_CASE("probability ratio") {
    CHECK(rsisac::probability_ratio(-1.5, -1.5) == 1.0);
    CHECK(rsisac::probability_ratio(-1.0, -2.0) ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(rsisac::probability_ratio(arma::datum::inf, 0.0), std::runtime_error);
    CHECK_THROWS_AS(rsisac::probability_ratio(1000.0, -1000.0), std::runtime_error);
}

TEST_CASE("diagonal Gaussian log density") {
    const arma::vec a = {1.3};
    const arma::vec m = {0.4};
    const arma::vec ls = {-0.2};
    CHECK(rsisac::gaussian_log_density(a, m, ls) ==
          doctest::Approx(-1.3231275357493875).epsilon(1e-14));

    // Independent dimensions add.
    const arma::vec a2 = {1.3, -0.5};
    const arma::vec m2 = {0.4, 0.1};
    const arma::vec ls2 = {-0.2, 0.3};
    const double joint = rsisac::gaussian_log_density(a2, m2, ls2);
    const double split = rsisac::gaussian_log_density({1.3}, {0.4}, {-0.2}) +
                         rsisac::gaussian_log_density({-0.5}, {0.1}, {0.3});
    CHECK(joint == doctest::Approx(split).epsilon(1e-13));

    CHECK_THROWS_AS(rsisac::gaussian_log_density(a2, m, ls), std::invalid_argument);
}

TEST_CASE("configuration validation") {
    rsisac::PpoConfig cfg;
    cfg.clip = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = rsisac::PpoConfig{};
    cfg.discount = 1.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = rsisac::PpoConfig{};
    cfg.pool_capacity = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = rsisac::PpoConfig{};
    cfg.log_std_floor = 2.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = rsisac::PpoConfig{};
    cfg.log_std_init = std::log(0.5);
    cfg.log_std_floor = std::log(0.6);  // init below the floor
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    // State must decompose into action block, even SINR block, reward.
    CHECK_THROWS_AS(rsisac::PpoLearner(20, 16, rsisac::PpoConfig{}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(rsisac::PpoLearner(18, 16, rsisac::PpoConfig{}, 1),
                    std::invalid_argument);
}

TEST_CASE("experience pool") {
    rsisac::ExperiencePool pool(2);
    CHECK(pool.capacity() == 2);
    CHECK_FALSE(pool.full());
    pool.add(rsisac::Transition{});
    pool.add(rsisac::Transition{});
    CHECK(pool.full());
    CHECK_THROWS_AS(pool.add(rsisac::Transition{}), std::logic_error);
    pool.clear();
    CHECK(pool.size() == 0);
    CHECK_THROWS_AS(rsisac::ExperiencePool{0}, std::invalid_argument);
}

TEST_CASE("action sampling") {
    auto learner = small_learner();
    CHECK(learner.log_std().n_elem == 4);
    CHECK(learner.log_std()(0) == std::log(0.5));

    const arma::vec state = random_vec(7, 2);

    SUBCASE("stored density matches the current policy") {
        const auto sample = learner.sample_action(state);
        CHECK(sample.log_density ==
              doctest::Approx(learner.log_density(state, sample.action)).epsilon(1e-12));
        CHECK(sample.log_density ==
              doctest::Approx(learner.old_log_density(state, sample.action)).epsilon(1e-12));
    }
    SUBCASE("same seed, same stream") {
        auto twin = small_learner();
        const auto s1 = learner.sample_action(state);
        const auto s2 = twin.sample_action(state);
        CHECK(arma::abs(s1.action - s2.action).max() == 0.0);
    }
    SUBCASE("empirical moments match the declared policy") {
        const arma::vec mean = learner.mean_action(state);
        const int n = 2000;
        arma::mat actions(4, n);
        for (int i = 0; i < n; ++i) actions.col(i) = learner.sample_action(state).action;
        for (int d = 0; d < 4; ++d) {
            CHECK(std::abs(arma::mean(actions.row(d)) - mean(d)) < 0.05);
            CHECK(arma::stddev(actions.row(d)) == doctest::Approx(0.5).epsilon(0.1));
        }
    }
}

TEST_CASE("surrogate gradient matches finite differences") {
    auto learner = small_learner();
    std::vector<rsisac::Transition> batch = {on_policy_transition(learner, 5)};
    const arma::vec advantages = {0.7};
    const double h = 1e-6;

    const auto eval = learner.evaluate_surrogate(batch, advantages);
    CHECK(eval.mean_ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(eval.objective == doctest::Approx(0.7).epsilon(1e-9));

    auto objective_at = [&]() { return learner.evaluate_surrogate(batch, advantages).objective; };

    for (std::size_t l = 0; l < learner.actor().weights.size(); ++l) {
        auto& w = learner.actor().weights[l];
        for (arma::uword j = 0; j < w.n_elem; ++j) {
            const double keep = w(j);
            w(j) = keep + h;
            const double hi = objective_at();
            w(j) = keep - h;
            const double lo = objective_at();
            w(j) = keep;
            CHECK(close(eval.actor_gradients.weights[l](j), (hi - lo) / (2.0 * h), 1e-3, 1e-9));
        }
        auto& b = learner.actor().biases[l];
        for (arma::uword j = 0; j < b.n_elem; ++j) {
            const double keep = b(j);
            b(j) = keep + h;
            const double hi = objective_at();
            b(j) = keep - h;
            const double lo = objective_at();
            b(j) = keep;
            CHECK(close(eval.actor_gradients.biases[l](j), (hi - lo) / (2.0 * h), 1e-3, 1e-9));
        }
    }

    SUBCASE("and so does the spread parameter gradient") {
        for (arma::uword j = 0; j < 4; ++j) {
            const double keep = learner.log_std_param()(j);
            learner.log_std_param()(j) = keep + h;
            const double hi = objective_at();
            learner.log_std_param()(j) = keep - h;
            const double lo = objective_at();
            learner.log_std_param()(j) = keep;
            CHECK(close(eval.log_std_gradients(j), (hi - lo) / (2.0 * h), 1e-3, 1e-9));
        }
    }
    SUBCASE("clipped-out samples contribute no gradient") {
        batch[0].log_density_old = batch[0].log_density_old - 5.0;  // ratio e^5
        const auto flat = learner.evaluate_surrogate(batch, advantages);
        for (const auto& w : flat.actor_gradients.weights) CHECK(arma::abs(w).max() == 0.0);
        CHECK(arma::abs(flat.log_std_gradients).max() == 0.0);
    }
    SUBCASE("batch/advantage mismatch is rejected") {
        CHECK_THROWS_AS(learner.evaluate_surrogate(batch, arma::vec{1.0, 2.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("value fit") {
    auto learner = small_learner();
    std::vector<rsisac::Transition> batch = {on_policy_transition(learner, 11),
                                             on_policy_transition(learner, 13)};

    SUBCASE("zero loss against the critic's own outputs") {
        const arma::vec targets = {learner.value(batch[0].state), learner.value(batch[1].state)};
        const auto eval = learner.evaluate_value(batch, targets);
        CHECK(eval.loss < 1e-24);
        for (const auto& w : eval.gradients.weights) CHECK(arma::abs(w).max() < 1e-12);
    }
    SUBCASE("one descent step lowers the loss") {
        const arma::vec targets = {0.8, -0.4};
        const auto before = learner.evaluate_value(batch, targets);
        REQUIRE(before.loss > 0.0);
        learner.critic().sgd_step(before.gradients, 0.05, rsisac::StepDirection::descend);
        const auto after = learner.evaluate_value(batch, targets);
        CHECK(after.loss < before.loss);
    }
}

TEST_CASE("update round mechanics") {
    auto learner = small_learner();

    SUBCASE("requires a full pool") {
        rsisac::ExperiencePool pool(4);
        pool.add(on_policy_transition(learner, 21));
        CHECK_THROWS_AS(learner.update(pool), std::logic_error);
    }
    SUBCASE("identical transitions normalize to zero advantage and freeze the actor") {
        rsisac::ExperiencePool pool(4);
        const auto t = on_policy_transition(learner, 23);
        for (int i = 0; i < 4; ++i) pool.add(t);

        const arma::mat w0 = learner.actor().weights[0];
        const arma::vec ls0 = learner.log_std();
        const double critic0 = learner.value(t.state);

        learner.update(pool);
        CHECK(pool.size() == 0);
        CHECK(arma::abs(learner.actor().weights[0] - w0).max() == 0.0);
        CHECK(arma::abs(learner.log_std() - ls0).max() == 0.0);
        // The critic still moves toward the TD targets.
        CHECK(learner.value(t.state) != critic0);
    }
    SUBCASE("log-std never drops below the configured floor") {
        rsisac::PpoConfig cfg = small_cfg();
        cfg.log_std_init = std::log(0.5);
        cfg.log_std_floor = std::log(0.5);  // any downward pull must clamp back
        cfg.pool_capacity = 4;
        rsisac::PpoLearner floored(7, 4, cfg, 17);
        rsisac::ExperiencePool pool(4);
        for (int round = 0; round < 5; ++round) {
            for (int i = 0; i < 4; ++i)
                pool.add(on_policy_transition(floored, 100 + 10 * round + i));
            floored.update(pool);
            CHECK(floored.log_std().min() >= std::log(0.5) - 1e-15);
        }
    }
    SUBCASE("ratios start at one right after the snapshot") {
        rsisac::PpoConfig cfg = small_cfg();
        cfg.update_epochs = 1;
        cfg.pool_capacity = 4;
        rsisac::PpoLearner single(7, 4, cfg, 3);
        rsisac::ExperiencePool pool(4);
        for (int i = 0; i < 4; ++i) pool.add(on_policy_transition(single, 31 + i));
        const auto diag = single.update(pool);
        CHECK(diag.mean_ratio == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("checkpoint round trip") {
    auto learner = small_learner(5);
    // Move parameters off their init values first.
    rsisac::ExperiencePool pool(4);
    for (int i = 0; i < 4; ++i) pool.add(on_policy_transition(learner, 41 + i));
    learner.update(pool);

    std::stringstream buffer;
    learner.save(buffer);

    auto other = small_learner(99);
    other.load(buffer);
    const arma::vec probe = random_vec(7, 50);
    CHECK(arma::abs(other.mean_action(probe) - learner.mean_action(probe)).max() == 0.0);
    CHECK(arma::abs(other.log_std() - learner.log_std()).max() == 0.0);
    CHECK(other.value(probe) == learner.value(probe));

    SUBCASE("dimension mismatch is rejected") {
        rsisac::PpoConfig cfg = small_cfg();
        rsisac::PpoLearner wrong(9, 6, cfg, 1);
        std::stringstream again;
        learner.save(again);
        CHECK_THROWS_AS(wrong.load(again), std::runtime_error);
    }
}

TEST_CASE("training is reproducible end to end") {
    rsisac::EnvConfig env_cfg;
    env_cfg.episode_length = 8;
    rsisac::PpoConfig cfg;
    cfg.hidden = {16};
    cfg.episodes = 4;
    cfg.pool_capacity = 16;
    cfg.update_epochs = 2;

    auto run = [&]() {
        rsisac::Environment env(env_cfg);
        rsisac::PpoLearner learner(env.state_dim(), env.action_dim(), cfg, 9);
        const auto trace = rsisac::train(env, learner, 123);
        return std::make_pair(trace, learner.actor().weights[0]);
    };

    const auto [trace_a, weights_a] = run();
    const auto [trace_b, weights_b] = run();

    REQUIRE(trace_a.rows.size() == 4);
    REQUIRE(trace_b.rows.size() == 4);
    for (std::size_t i = 0; i < trace_a.rows.size(); ++i) {
        CHECK(trace_a.rows[i].episode == static_cast<int>(i));
        CHECK(trace_a.rows[i].mean_reward == trace_b.rows[i].mean_reward);
        CHECK(trace_a.rows[i].mean_ee == trace_b.rows[i].mean_ee);
        CHECK(trace_a.rows[i].violation_fraction >= 0.0);
        CHECK(trace_a.rows[i].violation_fraction <= 1.0);
        CHECK(trace_a.rows[i].mean_sum_rate >= 0.0);
    }
    CHECK(arma::abs(weights_a - weights_b).max() == 0.0);

    SUBCASE("learner and environment dimensions must agree") {
        rsisac::Environment env(env_cfg);
        rsisac::PpoLearner mismatched(9, 6, small_cfg(), 1);
        CHECK_THROWS_AS(rsisac::train(env, mismatched, 1), std::invalid_argument);
    }
}

} // TEST_SUITE
