// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <armadillo>
#include <cstdint>
#include <string>

#include "rsisac/geometry.hpp"

namespace rsisac {

// Weight applied to the CN(0,1) diffuse term when composing a Rician entry.
//   verbatim:   LoS + NLoS                 (as the model is printed)
//   normalized: LoS + sqrt(1/(K+1))*NLoS  (unit mean power)
enum class NlosWeight { verbatim, normalized };

// Denominator convention for the communication-link path amplitudes.
//   verbatim_epsilon: lambda / (4 pi eps)        with eps the squared distance
//   distance:         lambda / (4 pi sqrt(eps))  free-space form
// The verbatim form attenuates the cascaded links so strongly that the
// reference QoS/echo thresholds become unreachable at the default scene
// scale; `distance` is the operating default.
enum class PathLossMode { verbatim_epsilon, distance };

struct FadingConfig {
    double carrier_hz = 2.4e9;     // f_c
    double rician_bs_irs = 10.0;   // K_BI (linear)
    double rician_irs_user = 10.0; // K_IU
    double rician_irs_target = 10.0; // K_IR
    double rcs = 20.0;             // sigma [m^2]
    NlosWeight nlos_weight = NlosWeight::verbatim;
    PathLossMode path_loss = PathLossMode::distance;
    // Power of eps inside the radar amplitude sqrt: 4 reproduces the printed
    // model (d^8 in true distance), 2 is the radar-equation d^4.
    int radar_eps_exponent = 2;
    double noise_user = 1e-15;  // delta_k^2 [W]
    double noise_radar = 1e-15; // delta_r^2 [W]

    void validate() const;
    double wavelength() const;
};

double wavelength(double carrier_hz);

// lambda/(4 pi eps) or lambda/(4 pi sqrt(eps)) depending on mode.
double comm_amplitude(double wavelength, double eps, PathLossMode mode);

// sqrt(lambda^2 sigma / ((4 pi)^3 eps^exponent)).
double radar_amplitude(double wavelength, double rcs, double eps, int eps_exponent);

// Deterministic LoS factors, before the path amplitude is applied:
// magnitude sqrt(K/(K+1)), carrier phase exp(-j 2 pi sqrt(eps)/lambda), and
// for the time-varying links the Doppler rotation exp(j 2 pi t f).
struct LosComponents {
    arma::cx_mat bs_irs;     // N x M, indexed (n, m) like G
    arma::cx_mat irs_user;   // N x K
    arma::cx_vec irs_target; // N
};

LosComponents los_components(const SceneGeometry& geom, const FadingConfig& fading,
                             const Mobility& mob, double t);

struct ChannelRealization {
    arma::cx_mat G;        // N x M cascade input, entry (n, m) = g_mn
    arma::cx_mat h_users;  // N x K, column k = h_k(t)
    arma::cx_vec h_target; // N, h_r(t)
    double time = 0.0;

    // Frozen diffuse draws; advance() rebuilds the LoS part at the new time
    // and recombines with these, so only LoS Doppler phases evolve within an
    // episode.
    arma::cx_mat nlos_bs_irs;
    arma::cx_mat nlos_irs_user;
    arma::cx_vec nlos_irs_target;
};

// Draw a full realization at time t. The seed fixes the NLoS draw; identical
// (seed, t) inputs give bit-identical realizations.
ChannelRealization realize(const SceneGeometry& geom, const FadingConfig& fading,
                           const Mobility& mob, double t, std::uint64_t seed);

// Advance by dt holding the NLoS draws fixed. G has no Doppler term and is
// unchanged; user/target LoS phases rotate by exp(j 2 pi dt f).
ChannelRealization advance(const ChannelRealization& real, const SceneGeometry& geom,
                           const FadingConfig& fading, const Mobility& mob, double dt);

// Cross-implementation comparison dump, columns: link,row,col,re,im.
void dump_csv(const ChannelRealization& real, const std::string& path);

} // namespace rsisac
