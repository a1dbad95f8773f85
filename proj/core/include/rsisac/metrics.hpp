// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <armadillo>

#include "rsisac/channel.hpp"

namespace rsisac {

// Power accounting for the transmit side.  `radar_weight` scales the radar
// stream both where it interferes at the users and where it burns power;
// the default 0 models user receivers that cancel the known radar waveform
// ahead of data decoding.  With the weight at 1 the sensing beam and the
// rate floor fight over the same budget and the reference scene has no
// feasible action at all, so cancellation is the working default.  The
// budget check covers radiated power only by default; static circuit power
// can exceed the budget on its own, which would otherwise pin the
// constraint shut.  Set `constrain_total_power` to fold it back in.
struct PowerModel {
    double amplifier_efficiency = 1.0;  // mu, scales radiated power
    double radar_weight = 0.0;          // chi
    double static_power = 1.0;          // W
    double max_power = 0.1;             // W, radiated budget
    bool constrain_total_power = false;

    void validate() const;
};

struct QosThresholds {
    double rate_threshold = 4.0;  // bit/s/Hz per user
    double snr_threshold = 1.0;   // linear echo SNR floor

    void validate() const;
};

// One complete transmit/receive configuration: beamforming vectors at the
// base station, the common-rate split across users, and the IRS phases.
struct Decision {
    arma::cx_vec common;     // M, common-stream precoder
    arma::cx_mat privates;   // M x K, column k serves user k
    arma::cx_vec radar;      // M
    arma::cx_vec receive;    // M, echo combining vector
    arma::vec common_rates;  // K, per-user share of the common stream
    arma::vec phases;        // N, radians
};

struct ConstraintFlags {
    bool common_rate = false;  // sum of shares fits the weakest common link
    bool qos = false;          // every user meets the rate threshold
    bool power = false;        // radiated (or total) power within budget
    bool echo = false;         // echo SNR at or above the floor

    bool all() const { return common_rate && qos && power && echo; }
};

struct LinkMetrics {
    arma::vec sinr_common;    // K
    arma::vec sinr_private;   // K
    arma::vec user_rates;     // K, common share + private rate
    double common_capacity = 0.0;  // min over users of log2(1 + sinr_common)
    double sum_rate = 0.0;
    double radiated_power = 0.0;
    double total_power = 0.0;
    double energy_efficiency = 0.0;
    double echo_snr = 0.0;
    ConstraintFlags flags;
    double reward = 0.0;  // energy efficiency gated by the constraint flags
};

// Effective BS-to-user channel through the IRS; row k is user k's 1 x M link.
arma::cx_mat cascade_users(const ChannelRealization& real, const arma::vec& phases);

// Round-trip steering vector of the sensing path.  The echo channel is the
// rank-1 outer product of this vector with itself.
arma::cx_vec echo_steering(const ChannelRealization& real, const arma::vec& phases);
arma::cx_mat cascade_echo(const ChannelRealization& real, const arma::vec& phases);

// Per-user SINRs.  The common stream is decoded first, so every private
// stream (own included) plus the weighted radar stream interferes with it;
// after cancellation the private stream sees all other private streams.
arma::vec common_stream_sinrs(const arma::cx_mat& cascades, const Decision& d,
                              const PowerModel& pm, double noise_user);
arma::vec private_stream_sinrs(const arma::cx_mat& cascades, const Decision& d,
                               const PowerModel& pm, double noise_user);

double echo_snr(const arma::cx_vec& steering, const Decision& d, double noise_radar);

double radiated_power(const Decision& d, const PowerModel& pm);
double total_power(const Decision& d, const PowerModel& pm);
double energy_efficiency(double sum_rate, double total_power);

LinkMetrics evaluate(const ChannelRealization& real, const Decision& d, const PowerModel& pm,
                     const QosThresholds& qos, const FadingConfig& fading);

} // namespace rsisac
