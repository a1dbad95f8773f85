// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rsisac/config.hpp"

namespace rsisac {

// One grid position of a sweep; axes that are not swept carry the base
// configuration value.
struct SweepPoint {
    int bs_antennas = 4;
    int irs_elements = 9;
    double carrier_hz = 2.4e9;
    double rcs = 20.0;
    std::optional<double> rician;  // joint override of all three hop factors
    std::string scheme = "rsma";

    std::string tag() const;
};

struct RunSpec {
    SweepPoint point;
    std::string policy;
    std::uint64_t seed = 0;
    std::string trace_file;
};

struct RunRecord {
    RunSpec spec;
    std::string status = "ok";  // or the error text
    double converged_ee = 0.0;
    double converged_sum_rate = 0.0;
    double converged_echo_snr_db = 0.0;
    double converged_violation_fraction = 0.0;
};

struct ExperimentResult {
    std::vector<RunRecord> records;
};

// Environment for a sweep point: overrides applied, wavelength-relative
// spacings resolved against the point's carrier.
EnvConfig resolve_env(const ExperimentConfig& cfg, const SweepPoint& p);

// Cartesian product of the sweep axes, schemes, policies, and seeds, in a
// fixed deterministic order.
std::vector<RunSpec> enumerate_runs(const ExperimentConfig& cfg);

TrainingTrace run_single(const ExperimentConfig& cfg, const RunSpec& spec);

void write_trace_csv(const TrainingTrace& trace, const std::string& policy, std::ostream& out);
TrainingTrace read_trace_csv(std::istream& in);

// Mean over the final tenth of a per-episode series (at least one row).
double converged_mean(const std::vector<double>& series);

// Runs everything in `enumerate_runs`, `jobs` runs at a time, writing into
// cfg.output_dir: one trace CSV per run, runs.csv, summary.csv, ratios.csv,
// and manifest.txt with the resolved configuration.  A failed run is
// recorded and skipped; it does not abort the sweep.  Output bytes do not
// depend on the job count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs);

// Rebuilds runs.csv, summary.csv, and ratios.csv from trace files already
// present in cfg.output_dir; absent or unreadable traces are flagged in the
// run records instead of aborting.
ExperimentResult summarize_experiment(const ExperimentConfig& cfg);

} // namespace rsisac
