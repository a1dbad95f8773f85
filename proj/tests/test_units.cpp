// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <armadillo>
#include <stdexcept>

#include "rsisac/units.hpp"

TEST_SUITE("units") {

TEST_CASE("documented dBm values convert exactly") {
    CHECK(rsisac::dbm_to_watts(30.0) == 1.0);
    CHECK(rsisac::dbm_to_watts(20.0) == 0.1);
    CHECK(rsisac::dbm_to_watts(-120.0) == 1e-15);
    CHECK(rsisac::dbm_to_watts(0.0) == 1e-3);
}

TEST_CASE("dBm round trip") {
    for (double dbm : {-120.0, -30.0, 0.0, 17.0, 20.0, 30.0})
        CHECK(rsisac::watts_to_dbm(rsisac::dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
    CHECK_THROWS_AS(rsisac::watts_to_dbm(0.0), std::domain_error);
    CHECK_THROWS_AS(rsisac::watts_to_dbm(-1.0), std::domain_error);
}

TEST_CASE("dB ratios") {
    CHECK(rsisac::db_to_linear(0.0) == 1.0);
    CHECK(rsisac::db_to_linear(10.0) == 10.0);
    CHECK(rsisac::db_to_linear(-10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(rsisac::linear_to_db(1.0) == 0.0);
    CHECK(rsisac::linear_to_db(100.0) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK_THROWS_AS(rsisac::linear_to_db(0.0), std::domain_error);
}

TEST_CASE("angles") {
    CHECK(rsisac::deg_to_rad(180.0) == doctest::Approx(arma::datum::pi).epsilon(1e-15));
    CHECK(rsisac::deg_to_rad(0.0) == 0.0);
    CHECK(rsisac::rad_to_deg(arma::datum::pi / 2.0) == doctest::Approx(90.0).epsilon(1e-15));
    CHECK(rsisac::rad_to_deg(rsisac::deg_to_rad(37.5)) == doctest::Approx(37.5).epsilon(1e-14));
}

} // TEST_SUITE
