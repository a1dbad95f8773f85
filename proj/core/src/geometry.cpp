// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rsisac/common.hpp"

namespace rsisac {

namespace {

int integer_sqrt(int n) {
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace

int SceneGeometry::irs_side() const {
    return integer_sqrt(irs_elements);
}

void SceneGeometry::validate() const {
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("SceneGeometry: " + what);
    };
    if (bs_antennas < 1) fail("bs_antennas (M) must be >= 1");
    if (user_count < 1) fail("user_count (K) must be >= 1");
    if (irs_elements < 1) fail("irs_elements (N) must be >= 1");
    const int side = integer_sqrt(irs_elements);
    if (side * side != irs_elements) fail("irs_elements (N) must be a perfect square");
    if (!(bs_spacing > 0.0)) fail("bs_spacing (d_B) must be > 0");
    if (!(irs_spacing > 0.0)) fail("irs_spacing (d_I) must be > 0");
    if (!(user_spacing > 0.0)) fail("user_spacing (d_U) must be > 0");
    if (bs_height < 0.0) fail("bs_height (H_B) must be >= 0");
    if (irs_height < 0.0) fail("irs_height (H_I) must be >= 0");
    if (target_height < 0.0) fail("target_height (H_R) must be >= 0");
}

void Mobility::validate() const {
    if (user_speed < 0.0 || target_speed < 0.0)
        throw std::invalid_argument("Mobility: speeds must be >= 0");
}

double irs_offset(int n, const SceneGeometry& geom) {
    if (n < 1 || n > geom.irs_elements)
        throw std::out_of_range("irs_offset: element index " + std::to_string(n) +
                                " outside 1.." + std::to_string(geom.irs_elements));
    const double side = static_cast<double>(geom.irs_side());
    const double centering =
        std::floor((side + 1.0) / 2.0) + 0.5 * std::fmod(side + 1.0, 2.0);
    const double column = n - std::floor((n - 1.0) / side) * side;
    return (column - centering) * geom.irs_spacing;
}

PositionTable positions(const SceneGeometry& geom) {
    geom.validate();
    PositionTable table;
    table.bs.reserve(geom.bs_antennas);
    for (int m = 1; m <= geom.bs_antennas; ++m) {
        const double y = (geom.bs_antennas - 2 * m + 1) * geom.bs_spacing / 2.0;
        table.bs.push_back({0.0, y, geom.bs_height});
    }
    table.users.reserve(geom.user_count);
    for (int k = 1; k <= geom.user_count; ++k) {
        const double y = (geom.user_count - 2 * k + 1) * geom.user_spacing / 2.0;
        table.users.push_back({geom.user_x, y, 0.0});
    }
    table.irs.reserve(geom.irs_elements);
    for (int n = 1; n <= geom.irs_elements; ++n) {
        const double off = irs_offset(n, geom);
        table.irs.push_back({geom.irs_x + off, geom.irs_y, geom.irs_height + off});
    }
    table.irs_center = {geom.irs_x, geom.irs_y, geom.irs_height};
    table.target = {geom.target_x, geom.target_y, geom.target_height};
    return table;
}

SquaredDistances squared_distances(const SceneGeometry& geom) {
    geom.validate();
    SquaredDistances out;
    out.bs_irs.set_size(geom.bs_antennas, geom.irs_elements);
    out.irs_user.set_size(geom.irs_elements, geom.user_count);
    out.irs_target.set_size(geom.irs_elements);

    for (int n = 1; n <= geom.irs_elements; ++n) {
        const double off = irs_offset(n, geom);
        for (int m = 1; m <= geom.bs_antennas; ++m) {
            const double x = geom.irs_x + off;
            const double y = geom.irs_y - (geom.bs_antennas - 2 * m + 1) * geom.bs_spacing / 2.0;
            const double z = geom.irs_height + off - geom.bs_height;
            out.bs_irs(m - 1, n - 1) = x * x + y * y + z * z;
        }
        for (int k = 1; k <= geom.user_count; ++k) {
            const double x = geom.irs_x + off - geom.user_x;
            const double y = geom.irs_y - (geom.user_count - 2 * k + 1) * geom.user_spacing / 2.0;
            const double z = geom.irs_height + off;
            out.irs_user(n - 1, k - 1) = x * x + y * y + z * z;
        }
        const double x = geom.irs_x + off - geom.target_x;
        const double y = geom.irs_y - geom.target_y;
        const double z = geom.irs_height + off - geom.target_height;
        out.irs_target(n - 1) = x * x + y * y + z * z;
    }
    return out;
}

namespace {

double planar_projection(double dx, double dy, double speed, double angle,
                         double wavelength, const char* link) {
    const double denom = std::sqrt(dx * dx + dy * dy);
    if (denom == 0.0) {
        if (speed != 0.0)
            warn(std::string(link) + " Doppler undefined for coincident planar positions, using 0");
        return 0.0;
    }
    return speed / wavelength * (dx * std::cos(angle) + dy * std::sin(angle)) / denom;
}

} // namespace

double doppler_user(const SceneGeometry& geom, const Mobility& mob, double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("doppler_user: wavelength must be > 0");
    if (mob.user_speed == 0.0) return 0.0;
    return planar_projection(geom.irs_x - geom.user_x, geom.irs_y,
                             mob.user_speed, mob.user_angle, wavelength, "IRS-user");
}

double doppler_target(const SceneGeometry& geom, const Mobility& mob, double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("doppler_target: wavelength must be > 0");
    if (mob.target_speed == 0.0) return 0.0;
    return planar_projection(geom.irs_x - geom.target_x, geom.target_y - geom.irs_y,
                             mob.target_speed, mob.target_angle, wavelength, "IRS-target");
}

} // namespace rsisac
