// SPDX-License-Identifier: Apache-2.0

#include <armadillo>
#include <benchmark/benchmark.h>
#include <cstdint>

#include "rsisac/beamforming.hpp"
#include "rsisac/channel.hpp"
#include "rsisac/env.hpp"
#include "rsisac/nn.hpp"
#include "rsisac/ppo.hpp"

namespace {

using namespace rsisac;

EnvConfig config_for(int irs_elements) {
    EnvConfig cfg;
    cfg.geometry.irs_elements = irs_elements;
    return cfg;
}

void BM_channel_realize(benchmark::State& state) {
    const auto cfg = config_for(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto real = realize(cfg.geometry, cfg.fading, cfg.mobility, 0.0, ++seed);
        benchmark::DoNotOptimize(real.G(0, 0));
    }
}
BENCHMARK(BM_channel_realize)->Arg(9)->Arg(25)->Arg(100);

void BM_channel_advance(benchmark::State& state) {
    const auto cfg = config_for(static_cast<int>(state.range(0)));
    auto real = realize(cfg.geometry, cfg.fading, cfg.mobility, 0.0, 1);
    for (auto _ : state) {
        real = advance(real, cfg.geometry, cfg.fading, cfg.mobility, 1e-3);
        benchmark::DoNotOptimize(real.h_users(0, 0));
    }
}
BENCHMARK(BM_channel_advance)->Arg(9)->Arg(25)->Arg(100);

void BM_assemble_action(benchmark::State& state) {
    const auto cfg = config_for(static_cast<int>(state.range(0)));
    const auto real = realize(cfg.geometry, cfg.fading, cfg.mobility, 0.0, 2);
    const auto layout = cfg.layout();
    const arma::vec logits(layout.dim(), arma::fill::zeros);
    for (auto _ : state) {
        auto d = assemble(logits, layout, real, cfg.codebook, cfg.power, cfg.fading);
        benchmark::DoNotOptimize(d.phases(0));
    }
}
BENCHMARK(BM_assemble_action)->Arg(9)->Arg(25);

void BM_evaluate_decision(benchmark::State& state) {
    const auto cfg = config_for(static_cast<int>(state.range(0)));
    const auto real = realize(cfg.geometry, cfg.fading, cfg.mobility, 0.0, 2);
    const auto layout = cfg.layout();
    const arma::vec logits(layout.dim(), arma::fill::zeros);
    const auto d = assemble(logits, layout, real, cfg.codebook, cfg.power, cfg.fading);
    for (auto _ : state) {
        auto m = evaluate(real, d, cfg.power, cfg.qos, cfg.fading);
        benchmark::DoNotOptimize(m.reward);
    }
}
BENCHMARK(BM_evaluate_decision)->Arg(9)->Arg(25);

void BM_env_step(benchmark::State& state) {
    auto cfg = config_for(static_cast<int>(state.range(0)));
    cfg.episode_length = 1 << 30;
    Environment env(cfg);
    env.reset(1);
    const arma::vec logits(env.action_dim(), arma::fill::zeros);
    for (auto _ : state) {
        auto out = env.step(logits);
        benchmark::DoNotOptimize(out.reward);
    }
}
BENCHMARK(BM_env_step)->Arg(9)->Arg(25);

void BM_network_forward(benchmark::State& state) {
    const auto net = DenseNetwork::create({21, 64, 64, 16}, 1);
    arma::arma_rng::set_seed(3);
    const arma::vec x(21, arma::fill::randn);
    for (auto _ : state) {
        auto y = net.forward(x);
        benchmark::DoNotOptimize(y(0));
    }
}
BENCHMARK(BM_network_forward);

void BM_network_backward(benchmark::State& state) {
    const auto net = DenseNetwork::create({21, 64, 64, 16}, 1);
    arma::arma_rng::set_seed(3);
    const arma::vec x(21, arma::fill::randn);
    const arma::vec upstream(16, arma::fill::randn);
    ForwardTrace trace;
    net.forward(x, trace);
    for (auto _ : state) {
        auto grads = net.backward(trace, upstream);
        benchmark::DoNotOptimize(grads.biases.back()(0));
    }
}
BENCHMARK(BM_network_backward);

void BM_ppo_surrogate_batch(benchmark::State& state) {
    EnvConfig ec;
    Environment env(ec);
    PpoConfig pc;
    pc.hidden = {64, 64};
    PpoLearner learner(env.state_dim(), env.action_dim(), pc, 7);

    std::vector<Transition> batch;
    arma::vec s = env.reset(1);
    for (int i = 0; i < 64; ++i) {
        auto pick = learner.sample_action(s);
        auto out = env.step(pick.action);
        Transition t;
        t.state = s;
        t.action = pick.action;
        t.log_density_old = pick.log_density;
        t.reward = out.reward;
        t.next_state = out.state;
        t.done = out.episode_end;
        batch.push_back(t);
        s = out.episode_end ? env.reset(2) : out.state;
    }
    arma::arma_rng::set_seed(9);
    const arma::vec advantages(64, arma::fill::randn);
    for (auto _ : state) {
        auto eval = learner.evaluate_surrogate(batch, advantages);
        benchmark::DoNotOptimize(eval.objective);
    }
}
BENCHMARK(BM_ppo_surrogate_batch);

} // namespace

BENCHMARK_MAIN();
