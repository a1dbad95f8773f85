// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/units.hpp"

#include <cmath>
#include <stdexcept>

#include <armadillo>

namespace rsisac {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) {
    if (!(watts > 0.0)) throw std::domain_error("watts_to_dbm: power must be > 0");
    return 10.0 * std::log10(watts) + 30.0;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double value) {
    if (!(value > 0.0)) throw std::domain_error("linear_to_db: value must be > 0");
    return 10.0 * std::log10(value);
}

double deg_to_rad(double degrees) { return degrees * arma::datum::pi / 180.0; }

double rad_to_deg(double radians) { return radians * 180.0 / arma::datum::pi; }

} // namespace rsisac
