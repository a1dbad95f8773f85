// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <armadillo>

#include "rsisac/channel.hpp"
#include "rsisac/metrics.hpp"

namespace rsisac {

// Discrete IRS phase set: 2^bits levels spread uniformly over [0, 2*pi).
struct PhaseCodebook {
    int bits = 2;

    int levels() const { return 1 << bits; }
    double step() const { return 2.0 * arma::datum::pi / levels(); }
    void validate() const;
};

// Layout of the flat policy output.  Blocks in order: per-user common-rate
// logits (dropped when `sdma`), per-user private power logits, one common
// power logit, one radar power logit, per-element phase logits, and one
// trailing logit reserved for the receive side (the combiner is computed in
// closed form, so that slot is carried but ignored).
struct ActionLayout {
    int users = 2;
    int irs_elements = 9;
    bool sdma = false;

    int common_rate_count() const { return sdma ? 0 : users; }
    int common_rate_offset() const { return 0; }
    int private_power_offset() const { return common_rate_count(); }
    int common_power_index() const { return common_rate_count() + users; }
    int radar_power_index() const { return common_power_index() + 1; }
    int phase_offset() const { return radar_power_index() + 1; }
    int receive_index() const { return phase_offset() + irs_elements; }
    int dim() const { return receive_index() + 1; }
    void validate() const;
};

// Set when the closed-form pieces of the assembly had to take a detour.
struct AssemblyReport {
    bool zf_fallback = false;  // zero-forcing was singular, used matched filters
};

// Squashes an unbounded logit onto [0, sqrt(max_power)]; the decision
// vectors carry this value as their norm, so per-stream power tops out at
// the full budget.
double amplitude_from_logit(double logit, double max_power);

// Snaps each logit onto the codebook: the squashed logit picks a fractional
// level index in [0, levels-1], rounded to the nearest integer with exact
// halves rounding down.
arma::vec decode_phases(const arma::vec& phase_logits, const PhaseCodebook& cb);

// Per-user share of the common stream, each squashed onto [0, capacity].
arma::vec decode_common_rates(const arma::vec& rate_logits, double capacity);

// Unit-norm directions.  Zero-forcing inverts the Gram matrix of the user
// cascades; when that is singular the per-user matched filters are used
// instead.  The common stream points at the sum of the user cascades, the
// radar stream at the round-trip steering vector.
arma::cx_mat zf_private_directions(const arma::cx_mat& cascades, bool* fell_back = nullptr);
arma::cx_vec mrt_common_direction(const arma::cx_mat& cascades);
arma::cx_vec mrt_radar_direction(const arma::cx_vec& steering);
arma::cx_vec matched_receive_beamformer(const arma::cx_vec& steering, const arma::cx_vec& radar);

// Full logit vector to transmit decision, in dependency order: phases first,
// then directions on the resulting cascades, then stream powers, and the
// common-rate split last since its ceiling depends on everything else.
Decision assemble(const arma::vec& logits, const ActionLayout& layout,
                  const ChannelRealization& real, const PhaseCodebook& cb, const PowerModel& pm,
                  const FadingConfig& fading, AssemblyReport* report = nullptr);

} // namespace rsisac
