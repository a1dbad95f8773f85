// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <cstdint>
#include <iostream>
#include <mutex>
#include <string>

namespace rsisac {

inline constexpr double kSpeedOfLight = 299792458.0; // c0 [m/s]

// Serialized stderr warning, used for rare runtime fallbacks (degenerate
// geometry, ZF rank deficiency). Not a general logging facility.
inline void warn(const std::string& msg) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[rsisac] warning: " << msg << "\n";
}

// splitmix64 finalizer; used to derive independent sub-seeds from a master
// seed so that parallel rollouts own disjoint RNG streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Channel seed for an episode within a run. PPO and the baseline policies
// share this so that identical master seeds see identical channel draws.
inline std::uint64_t episode_seed(std::uint64_t master, int episode) {
    return mix_seed(master, 0x45505300ULL + static_cast<std::uint64_t>(episode));
}

// Seed for the learner's parameter init and action noise, kept distinct
// from the channel stream of the same master seed.
inline std::uint64_t learner_seed(std::uint64_t master) {
    return mix_seed(master, 0x4C524E00ULL);
}

} // namespace rsisac
