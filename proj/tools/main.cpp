// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization
//
// Command-line front end: train (single PPO run + checkpoint), baseline
// (random/greedy rollout), sweep (full experiment grid), summarize
// (recompute reports from existing traces).

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rsisac/baselines.hpp"
#include "rsisac/common.hpp"
#include "rsisac/config.hpp"
#include "rsisac/experiment.hpp"
#include "rsisac/ppo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCli = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_override;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool sdma = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "Configuration file (key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out_override, "Output directory (overrides the config)");
    cmd->add_option("--seed", opt.seed, "Master seed (overrides the config seed list)")
        ->each([&opt](const std::string&) { opt.seed_given = true; });
    cmd->add_flag("--sdma", opt.sdma, "Run without the common stream");
}

rsisac::ExperimentConfig load(const CommonOptions& opt) {
    rsisac::ExperimentConfig cfg =
        opt.config_path.empty() ? rsisac::default_config() : rsisac::load_config(opt.config_path);
    if (!opt.out_override.empty()) cfg.output_dir = opt.out_override;
    if (opt.seed_given) cfg.seeds = {opt.seed};
    if (opt.sdma) cfg.schemes = {"sdma"};
    cfg.validate();
    return cfg;
}

rsisac::SweepPoint base_point(const rsisac::ExperimentConfig& cfg, bool sdma) {
    rsisac::SweepPoint p;
    p.bs_antennas = cfg.env.geometry.bs_antennas;
    p.irs_elements = cfg.env.geometry.irs_elements;
    p.carrier_hz = cfg.env.fading.carrier_hz;
    p.rcs = cfg.env.fading.rcs;
    p.scheme = sdma ? "sdma" : "rsma";
    return p;
}

void report_converged(const rsisac::TrainingTrace& trace) {
    std::vector<double> ee, rate;
    for (const auto& r : trace.rows) {
        ee.push_back(r.mean_ee);
        rate.push_back(r.mean_sum_rate);
    }
    std::cout << "episodes: " << trace.rows.size()
              << "  converged EE: " << rsisac::converged_mean(ee)
              << " bit/s/Hz/W  converged sum rate: " << rsisac::converged_mean(rate)
              << " bit/s/Hz\n";
}

int cmd_train(const CommonOptions& opt) {
    const rsisac::ExperimentConfig cfg = load(opt);
    const rsisac::SweepPoint point = base_point(cfg, opt.sdma);
    const std::uint64_t seed = cfg.seeds.front();

    rsisac::Environment env(rsisac::resolve_env(cfg, point));
    rsisac::PpoLearner learner(env.state_dim(), env.action_dim(), cfg.ppo,
                               rsisac::learner_seed(seed));
    const rsisac::TrainingTrace trace = rsisac::train(env, learner, seed);

    const std::filesystem::path out_dir(cfg.output_dir);
    std::filesystem::create_directories(out_dir);
    const std::string stem = point.tag() + "_ppo_s" + std::to_string(seed);
    {
        std::ofstream out(out_dir / ("trace_" + stem + ".csv"));
        rsisac::write_trace_csv(trace, "ppo", out);
    }
    {
        std::ofstream out(out_dir / ("checkpoint_" + stem + ".txt"));
        learner.save(out);
    }
    {
        std::ofstream out(out_dir / "manifest.txt");
        rsisac::write_config(cfg, out);
    }
    report_converged(trace);
    std::cout << "outputs in " << out_dir.string() << "\n";
    return kExitOk;
}

int cmd_baseline(const CommonOptions& opt, const std::string& policy) {
    if (policy != "random" && policy != "greedy")
        throw std::invalid_argument("baseline policy must be random or greedy");
    const rsisac::ExperimentConfig cfg = load(opt);
    const rsisac::SweepPoint point = base_point(cfg, opt.sdma);
    const std::uint64_t seed = cfg.seeds.front();

    rsisac::Environment env(rsisac::resolve_env(cfg, point));
    rsisac::BaselineConfig bc = cfg.baseline;
    bc.kind = policy == "greedy" ? rsisac::BaselineKind::greedy : rsisac::BaselineKind::random;
    const rsisac::TrainingTrace trace = rsisac::run_baseline(env, bc, seed);

    const std::filesystem::path out_dir(cfg.output_dir);
    std::filesystem::create_directories(out_dir);
    const std::string stem = point.tag() + "_" + policy + "_s" + std::to_string(seed);
    {
        std::ofstream out(out_dir / ("trace_" + stem + ".csv"));
        rsisac::write_trace_csv(trace, policy, out);
    }
    {
        std::ofstream out(out_dir / "manifest.txt");
        rsisac::write_config(cfg, out);
    }
    report_converged(trace);
    std::cout << "outputs in " << out_dir.string() << "\n";
    return kExitOk;
}

int report_failures(const rsisac::ExperimentResult& result, const std::string& out_dir) {
    std::size_t failed = 0;
    for (const auto& r : result.records)
        if (r.status != "ok") {
            ++failed;
            std::cerr << r.spec.trace_file << ": " << r.status << "\n";
        }
    std::cout << result.records.size() - failed << "/" << result.records.size()
              << " runs ok; reports in " << out_dir << "\n";
    return failed == result.records.size() ? kExitRuntime : kExitOk;
}

int cmd_sweep(const CommonOptions& opt, int jobs) {
    const rsisac::ExperimentConfig cfg = load(opt);
    const rsisac::ExperimentResult result = rsisac::run_experiment(cfg, jobs);
    return report_failures(result, cfg.output_dir);
}

int cmd_summarize(const CommonOptions& opt) {
    const rsisac::ExperimentConfig cfg = load(opt);
    const rsisac::ExperimentResult result = rsisac::summarize_experiment(cfg);
    return report_failures(result, cfg.output_dir);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"IRS-assisted ISAC energy-efficiency simulator"};
    app.require_subcommand(1);

    CommonOptions train_opt, baseline_opt, sweep_opt, summarize_opt;
    std::string policy = "random";
    int jobs = 1;

    CLI::App* train_cmd = app.add_subcommand("train", "Train the PPO policy once");
    add_common(train_cmd, train_opt);

    CLI::App* baseline_cmd =
        app.add_subcommand("baseline", "Roll out a reference policy once");
    add_common(baseline_cmd, baseline_opt);
    baseline_cmd->add_option("--policy", policy, "random or greedy");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run the configured experiment grid");
    add_common(sweep_cmd, sweep_opt);
    sweep_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

    CLI::App* summarize_cmd =
        app.add_subcommand("summarize", "Rebuild reports from existing traces");
    add_common(summarize_cmd, summarize_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitCli;
    }

    try {
        if (train_cmd->parsed()) return cmd_train(train_opt);
        if (baseline_cmd->parsed()) return cmd_baseline(baseline_opt, policy);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opt, jobs);
        if (summarize_cmd->parsed()) return cmd_summarize(summarize_opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        const std::string what = e.what();
        if (what.find("config") != std::string::npos ||
            what.find(".cfg") != std::string::npos) {
            std::cerr << "configuration error: " << what << "\n";
            return kExitConfig;
        }
        std::cerr << "error: " << what << "\n";
        return kExitRuntime;
    }
    return kExitCli;
}
