// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "rsisac/channel.hpp"
#include "rsisac/geometry.hpp"

namespace {

rsisac::SceneGeometry reference_scene() {
    rsisac::SceneGeometry g;
    g.bs_spacing = 0.0625;
    g.irs_spacing = 0.025;
    g.user_spacing = 0.5;
    return g;
}

double max_abs_diff(const arma::cx_mat& a, const arma::cx_mat& b) {
    return arma::abs(a - b).max();
}

} // namespace

TEST_SUITE("channel") {

TEST_CASE("wavelength") {
    CHECK(rsisac::wavelength(2.4e9) == doctest::Approx(0.12491352416666666).epsilon(1e-15));
    CHECK(rsisac::wavelength(1.4e9) == doctest::Approx(0.21413747).epsilon(1e-15));
    CHECK_THROWS_AS(rsisac::wavelength(0.0), std::invalid_argument);
    CHECK_THROWS_AS(rsisac::wavelength(-1.0), std::invalid_argument);
}

TEST_CASE("path amplitudes") {
    using rsisac::PathLossMode;
    CHECK(rsisac::comm_amplitude(0.125, 4.0, PathLossMode::verbatim_epsilon) ==
          doctest::Approx(0.0024867959858108648).epsilon(1e-14));
    CHECK(rsisac::comm_amplitude(0.125, 4.0, PathLossMode::distance) ==
          doctest::Approx(0.0049735919716217296).epsilon(1e-14));
    // Linear in wavelength.
    CHECK(rsisac::comm_amplitude(0.25, 4.0, PathLossMode::distance) ==
          doctest::Approx(2.0 * rsisac::comm_amplitude(0.125, 4.0, PathLossMode::distance))
              .epsilon(1e-14));
    CHECK_THROWS_AS(rsisac::comm_amplitude(0.125, 0.0, PathLossMode::distance),
                    std::domain_error);

    CHECK(rsisac::radar_amplitude(0.125, 20.0, 1.25, 2) ==
          doctest::Approx(0.010039225323885724).epsilon(1e-14));
    CHECK(rsisac::radar_amplitude(0.125, 20.0, 1.25, 4) ==
          doctest::Approx(0.00803138025910858).epsilon(1e-14));
    // Raising the exponent divides by the squared distance once more.
    CHECK(rsisac::radar_amplitude(0.125, 20.0, 1.25, 4) /
              rsisac::radar_amplitude(0.125, 20.0, 1.25, 2) ==
          doctest::Approx(1.0 / 1.25).epsilon(1e-14));
    // Amplitude scales with sqrt(cross section) and linearly with wavelength.
    CHECK(rsisac::radar_amplitude(0.125, 80.0, 1.25, 2) ==
          doctest::Approx(2.0 * rsisac::radar_amplitude(0.125, 20.0, 1.25, 2)).epsilon(1e-14));
    CHECK(rsisac::radar_amplitude(0.25, 20.0, 1.25, 2) ==
          doctest::Approx(2.0 * rsisac::radar_amplitude(0.125, 20.0, 1.25, 2)).epsilon(1e-14));
    CHECK_THROWS_AS(rsisac::radar_amplitude(0.125, 20.0, -1.0, 2), std::domain_error);
}

TEST_CASE("line-of-sight components") {
    const rsisac::SceneGeometry g = reference_scene();
    rsisac::FadingConfig fading;
    const rsisac::Mobility mob;
    const double lambda = fading.wavelength();
    const rsisac::SquaredDistances eps = rsisac::squared_distances(g);

    const rsisac::LosComponents at0 = rsisac::los_components(g, fading, mob, 0.0);

    SUBCASE("magnitude is sqrt(K/(K+1)) on every entry") {
        const double mag = std::sqrt(10.0 / 11.0);
        CHECK(arma::abs(arma::abs(at0.bs_irs) - mag).max() < 1e-14);
        CHECK(arma::abs(arma::abs(at0.irs_user) - mag).max() < 1e-14);
        CHECK(arma::abs(arma::abs(arma::cx_mat(at0.irs_target)) - mag).max() < 1e-14);
    }
    SUBCASE("static phase follows the carrier distance") {
        const std::complex<double> expect =
            std::polar(std::sqrt(10.0 / 11.0),
                       -2.0 * arma::datum::pi * std::sqrt(eps.bs_irs(1, 4)) / lambda);
        CHECK(std::abs(at0.bs_irs(4, 1) - expect) < 1e-12);
    }
    SUBCASE("time rotates moving links by a common Doppler phase") {
        const double t = 0.25;
        const rsisac::LosComponents at_t = rsisac::los_components(g, fading, mob, t);
        CHECK(max_abs_diff(at_t.bs_irs, at0.bs_irs) == 0.0);

        const double f_user = rsisac::doppler_user(g, mob, lambda);
        const double f_target = rsisac::doppler_target(g, mob, lambda);
        const std::complex<double> rot_u = std::polar(1.0, 2.0 * arma::datum::pi * t * f_user);
        const std::complex<double> rot_r = std::polar(1.0, 2.0 * arma::datum::pi * t * f_target);
        CHECK(max_abs_diff(at_t.irs_user, at0.irs_user * rot_u) < 1e-12);
        CHECK(max_abs_diff(arma::cx_mat(at_t.irs_target),
                           arma::cx_mat(at0.irs_target * rot_r)) < 1e-12);
    }
}

TEST_CASE("diffuse draws are unit-variance zero-mean") {
    rsisac::SceneGeometry g = reference_scene();
    g.irs_elements = 400;
    g.bs_antennas = 10;
    const rsisac::FadingConfig fading;
    const rsisac::Mobility mob;
    const rsisac::ChannelRealization real = rsisac::realize(g, fading, mob, 0.0, 11);

    arma::cx_vec pool = arma::join_cols(
        arma::vectorise(real.nlos_bs_irs),
        arma::join_cols(arma::vectorise(real.nlos_irs_user), real.nlos_irs_target));
    REQUIRE(pool.n_elem == 400u * 10u + 400u * 2u + 400u);

    const double mean_power = arma::mean(arma::square(arma::abs(pool)));
    CHECK(mean_power == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(arma::mean(pool)) < 0.05);
}

TEST_CASE("moment ratio matches the Rician factor") {
    const rsisac::SceneGeometry g = reference_scene();
    const rsisac::Mobility mob;
    const int n_seeds = 4000;

    auto ratio_at = [&](rsisac::NlosWeight weight) {
        rsisac::FadingConfig fading;
        fading.nlos_weight = weight;
        arma::cx_vec samples(n_seeds);
        for (int s = 0; s < n_seeds; ++s)
            samples(s) = rsisac::realize(g, fading, mob, 0.0, 1000 + s).h_users(0, 0);
        const std::complex<double> mean = arma::mean(samples);
        const double power = arma::mean(arma::square(arma::abs(samples)));
        return std::norm(mean) / (power - std::norm(mean));
    };

    // Specular-to-diffuse power: K when the diffuse term is normalized,
    // K/(K+1) when it enters with unit weight.
    CHECK(ratio_at(rsisac::NlosWeight::normalized) == doctest::Approx(10.0).epsilon(0.07));
    CHECK(ratio_at(rsisac::NlosWeight::verbatim) ==
          doctest::Approx(10.0 / 11.0).epsilon(0.07));
}

TEST_CASE("realization is deterministic in (seed, t)") {
    const rsisac::SceneGeometry g = reference_scene();
    const rsisac::FadingConfig fading;
    const rsisac::Mobility mob;
    const auto a = rsisac::realize(g, fading, mob, 0.25, 42);
    const auto b = rsisac::realize(g, fading, mob, 0.25, 42);
    CHECK(max_abs_diff(a.G, b.G) == 0.0);
    CHECK(max_abs_diff(a.h_users, b.h_users) == 0.0);
    CHECK(max_abs_diff(arma::cx_mat(a.h_target), arma::cx_mat(b.h_target)) == 0.0);

    const auto c = rsisac::realize(g, fading, mob, 0.25, 43);
    CHECK(max_abs_diff(a.h_users, c.h_users) > 0.0);
}

TEST_CASE("advance freezes the diffuse part and rotates only moving links") {
    const rsisac::SceneGeometry g = reference_scene();
    const rsisac::FadingConfig fading;
    const rsisac::Mobility mob;
    const double dt = 1e-3;

    const auto base = rsisac::realize(g, fading, mob, 0.0, 7);
    const auto step = rsisac::advance(base, g, fading, mob, dt);

    CHECK(step.time == dt);
    CHECK(max_abs_diff(step.nlos_bs_irs, base.nlos_bs_irs) == 0.0);
    CHECK(max_abs_diff(step.nlos_irs_user, base.nlos_irs_user) == 0.0);
    CHECK(max_abs_diff(step.G, base.G) == 0.0);
    CHECK(max_abs_diff(step.h_users, base.h_users) > 0.0);

    SUBCASE("two steps reproduce a direct realization at the summed time") {
        const auto two = rsisac::advance(step, g, fading, mob, dt);
        const auto direct = rsisac::realize(g, fading, mob, 2.0 * dt, 7);
        CHECK(max_abs_diff(two.h_users, direct.h_users) == 0.0);
        CHECK(max_abs_diff(arma::cx_mat(two.h_target), arma::cx_mat(direct.h_target)) == 0.0);
    }
    SUBCASE("static scene is bit-stable under advance") {
        rsisac::Mobility frozen;
        frozen.user_speed = 0.0;
        frozen.target_speed = 0.0;
        const auto still = rsisac::realize(g, fading, frozen, 0.0, 7);
        const auto later = rsisac::advance(still, g, fading, frozen, dt);
        CHECK(max_abs_diff(later.h_users, still.h_users) == 0.0);
        CHECK(max_abs_diff(arma::cx_mat(later.h_target), arma::cx_mat(still.h_target)) == 0.0);
    }
    CHECK_THROWS_AS(rsisac::advance(base, g, fading, mob, -1e-3), std::invalid_argument);
}

TEST_CASE("diffuse weight modes share draws and differ as documented") {
    const rsisac::SceneGeometry g = reference_scene();
    const rsisac::Mobility mob;
    rsisac::FadingConfig verbatim;
    verbatim.rician_irs_user = 3.0;
    rsisac::FadingConfig normalized = verbatim;
    normalized.nlos_weight = rsisac::NlosWeight::normalized;

    const auto hv = rsisac::realize(g, verbatim, mob, 0.0, 99);
    const auto hn = rsisac::realize(g, normalized, mob, 0.0, 99);
    CHECK(max_abs_diff(hv.nlos_irs_user, hn.nlos_irs_user) == 0.0);

    // With K = 3 the normalized weight is 1/2, so 2*h_n - h_v recovers the
    // pure specular term of magnitude amp*sqrt(3/4).
    const rsisac::SquaredDistances eps = rsisac::squared_distances(g);
    const double lambda = verbatim.wavelength();
    for (arma::uword n = 0; n < hv.h_users.n_rows; ++n) {
        for (arma::uword k = 0; k < hv.h_users.n_cols; ++k) {
            const double amp =
                rsisac::comm_amplitude(lambda, eps.irs_user(n, k), verbatim.path_loss);
            const std::complex<double> specular = 2.0 * hn.h_users(n, k) - hv.h_users(n, k);
            CHECK(std::abs(specular) ==
                  doctest::Approx(amp * std::sqrt(0.75)).epsilon(1e-10));
        }
    }
}

TEST_CASE("csv dump schema") {
    const rsisac::SceneGeometry g = reference_scene();
    const rsisac::FadingConfig fading;
    const rsisac::Mobility mob;
    const auto real = rsisac::realize(g, fading, mob, 0.0, 5);

    const std::string path = "channel_dump_test.csv";
    rsisac::dump_csv(real, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "link,row,col,re,im");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 9 * 4 + 9 * 2 + 9);
    in.close();
    std::remove(path.c_str());
}

} // TEST_SUITE
