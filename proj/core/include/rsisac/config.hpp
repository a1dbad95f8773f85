// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsisac/baselines.hpp"
#include "rsisac/env.hpp"
#include "rsisac/ppo.hpp"

namespace rsisac {

// A length that may be quoted in carrier wavelengths (antenna and IRS
// spacings usually are); resolved to meters once the carrier is fixed.
struct Spacing {
    double value = 0.0;
    bool in_wavelengths = false;

    double meters(double carrier_hz) const;
};

// Axes for parameter sweeps; empty axes fall back to the base value.
struct SweepAxes {
    std::vector<int> bs_antennas;
    std::vector<int> irs_elements;
    std::vector<double> carrier_hz;
    std::vector<double> rcs;
    std::vector<double> rician;  // applied to all three hops at once

    bool empty() const;
};

struct ExperimentConfig {
    EnvConfig env;
    PpoConfig ppo;
    BaselineConfig baseline;
    Spacing bs_spacing{0.5, true};
    Spacing irs_spacing{0.2, true};
    Spacing user_spacing{0.5, false};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<std::string> policies{"ppo"};  // subset of ppo, greedy, random
    std::vector<std::string> schemes{"rsma"};  // subset of rsma, sdma
    SweepAxes sweep;
    std::string output_dir = "runs";

    void validate() const;
};

// Reference simulation setup: 4-antenna BS, 2 users, 3x3 IRS, 2.4 GHz
// carrier, Rician factors 10, 20 m^2 target, 2-bit phases, 0.1 W radiated
// budget over 1 W static draw, 4 bit/s/Hz rate floor and 0 dB echo floor.
ExperimentConfig default_config();

// Key = value text format; see README for the schema. Values may carry a
// trailing unit token (GHz, dBm, dB, deg, ms, lambda, ...). Unknown keys,
// duplicate keys, or malformed values raise with file:line context.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name);
ExperimentConfig load_config(const std::string& path);

// Writes the fully resolved configuration (SI units) in the same key=value
// syntax; parsing it back reproduces the config.
void write_config(const ExperimentConfig& cfg, std::ostream& out);

} // namespace rsisac
