// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#pragma once

#include <armadillo>
#include <vector>

#include "rsisac/common.hpp"

namespace rsisac {

// Static 3D scene: a BS uniform linear array along the y-axis at height
// bs_height, a square planar IRS centered at (irs_x, irs_y, irs_height),
// a user ULA on the ground at x = user_x, and a single radar target.
// All lengths are meters (wavelength-relative spacings are resolved before
// construction, see config.hpp).
struct SceneGeometry {
    int bs_antennas = 4;    // M
    int user_count = 2;     // K
    int irs_elements = 9;   // N, must be a perfect square
    double bs_spacing = 0.5 * kSpeedOfLight / 2.4e9;   // d_B, half-wave at default carrier
    double irs_spacing = 0.2 * kSpeedOfLight / 2.4e9;  // d_I, fifth-wave at default carrier
    double user_spacing = 0.5;                         // d_U
    double bs_height = 20.0;     // H_B
    double irs_height = 25.0;    // H_I
    double target_height = 25.0; // H_R
    double irs_x = 1.0;
    double irs_y = 2.0;
    double user_x = 2.0;
    double target_x = 1.5;
    double target_y = 1.0;

    // Side length sqrt(N) of the IRS; valid only after validate().
    int irs_side() const;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Linear motion of the users (shared speed/heading) and the target.
struct Mobility {
    double user_speed = 1.0;    // [m/s]
    double user_angle = 0.0;    // [rad]
    double target_speed = 5.0;  // [m/s]
    double target_angle = 0.0;  // [rad]

    void validate() const;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct PositionTable {
    std::vector<Vec3> bs;    // M entries
    std::vector<Vec3> users; // K entries
    std::vector<Vec3> irs;   // N entries
    Vec3 irs_center;
    Vec3 target;
};

// Squared propagation distances (sums of squared coordinate differences).
// These feed the channel amplitudes and, through their square roots, the
// carrier phases. No square root is taken here.
struct SquaredDistances {
    arma::mat bs_irs;     // M x N
    arma::mat irs_user;   // N x K
    arma::vec irs_target; // N
};

// Signed in-plane offset of the n-th IRS element from the array center,
// n is 1-based. Applied to both the x and z coordinates of the element.
double irs_offset(int n, const SceneGeometry& geom);

PositionTable positions(const SceneGeometry& geom);

SquaredDistances squared_distances(const SceneGeometry& geom);

// LoS Doppler shift of the IRS->user link [Hz]. Degenerate planar geometry
// (IRS above the user line, zero horizontal separation) returns 0.
double doppler_user(const SceneGeometry& geom, const Mobility& mob, double wavelength);

// LoS Doppler shift of the IRS->target link [Hz].
double doppler_target(const SceneGeometry& geom, const Mobility& mob, double wavelength);

} // namespace rsisac
