// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rsisac/channel.hpp"
#include "rsisac/config.hpp"

namespace {

rsisac::ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return rsisac::parse_config(in, "test.cfg");
}

std::string parse_error(const std::string& text) {
    try {
        parse(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults resolve wavelength spacings at the reference carrier") {
    const auto cfg = rsisac::default_config();
    const double lambda = rsisac::wavelength(2.4e9);
    CHECK(cfg.env.geometry.bs_spacing == 0.5 * lambda);
    CHECK(cfg.env.geometry.irs_spacing == 0.2 * lambda);
    CHECK(cfg.env.geometry.user_spacing == 0.5);
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.env.action_dim() == 16);

    // An empty file parses to exactly the defaults.
    const auto parsed = parse("");
    CHECK(parsed.env.geometry.bs_spacing == cfg.env.geometry.bs_spacing);
    CHECK(parsed.env.power.max_power == cfg.env.power.max_power);
    CHECK(parsed.seeds == cfg.seeds);
}

TEST_CASE("unit suffixes") {
    SUBCASE("power in dBm and mW") {
        CHECK(parse("P_max = 20 dBm").env.power.max_power ==
              doctest::Approx(0.1).epsilon(1e-14));
        CHECK(parse("P_max = 100 mW").env.power.max_power ==
              doctest::Approx(0.1).epsilon(1e-15));
        CHECK(parse("noise_user = -120 dBm").env.fading.noise_user ==
              doctest::Approx(1e-15).epsilon(1e-12));
    }
    SUBCASE("frequency re-resolves wavelength-relative spacings") {
        const auto cfg = parse("f_c = 1.4 GHz");
        CHECK(cfg.env.fading.carrier_hz == 1.4e9);
        CHECK(cfg.env.geometry.bs_spacing ==
              doctest::Approx(0.5 * rsisac::wavelength(1.4e9)).epsilon(1e-15));
    }
    SUBCASE("SNR levels in dB or linear") {
        CHECK(parse("SNR_th = 10 dB").env.qos.snr_threshold ==
              doctest::Approx(10.0).epsilon(1e-14));
        CHECK(parse("SNR_th = 2").env.qos.snr_threshold == 2.0);
    }
    SUBCASE("bare angles read as degrees") {
        CHECK(parse("gamma = 90").env.mobility.user_angle ==
              doctest::Approx(arma::datum::pi / 2.0).epsilon(1e-15));
        CHECK(parse("gamma = 1.5 rad").env.mobility.user_angle == 1.5);
        CHECK(parse("gamma_r = 45 deg").env.mobility.target_angle ==
              doctest::Approx(arma::datum::pi / 4.0).epsilon(1e-15));
    }
    SUBCASE("time in ms") {
        CHECK(parse("step_interval = 2 ms").env.step_interval ==
              doctest::Approx(2e-3).epsilon(1e-15));
    }
    SUBCASE("spacings in meters or wavelengths") {
        const auto cfg = parse("d_B = 0.3 lambda\nd_U = 0.25 m");
        CHECK(cfg.env.geometry.bs_spacing ==
              doctest::Approx(0.3 * rsisac::wavelength(2.4e9)).epsilon(1e-15));
        CHECK(cfg.env.geometry.user_spacing == 0.25);
    }
}

TEST_CASE("scheme, policy, and model switches") {
    const auto cfg = parse(
        "chi = 1\n"
        "nlos_weight = normalized\n"
        "path_loss = verbatim_epsilon\n"
        "constrain_total_power = true\n"
        "schemes = rsma sdma\n"
        "policies = ppo greedy random\n");
    CHECK(cfg.env.power.radar_weight == 1.0);
    CHECK(cfg.env.fading.nlos_weight == rsisac::NlosWeight::normalized);
    CHECK(cfg.env.fading.path_loss == rsisac::PathLossMode::verbatim_epsilon);
    CHECK(cfg.env.power.constrain_total_power);
    CHECK(cfg.schemes.size() == 2);
    CHECK(cfg.policies.size() == 3);

    // The sensing stream is free by default.
    CHECK(parse("").env.power.radar_weight == 0.0);
}

TEST_CASE("learning settings") {
    const auto cfg = parse(
        "episodes = 7\n"
        "policy_std_init = 0.25\n"
        "hidden = 32 16\n"
        "greedy_candidates = 5\n"
        "pool_capacity = 48\n"
        "seeds = 3 5 9\n");
    CHECK(cfg.ppo.episodes == 7);
    CHECK(cfg.baseline.episodes == 7);
    CHECK(cfg.ppo.log_std_init == doctest::Approx(std::log(0.25)).epsilon(1e-15));
    REQUIRE(cfg.ppo.hidden.size() == 2);
    CHECK(cfg.ppo.hidden[0] == 32);
    CHECK(cfg.ppo.hidden[1] == 16);
    CHECK(cfg.baseline.greedy_candidates == 5);
    CHECK(cfg.ppo.pool_capacity == 48);
    REQUIRE(cfg.seeds.size() == 3);
    CHECK(cfg.seeds[1] == 5);

    CHECK(parse("policy_std_floor = 0.3").ppo.log_std_floor ==
          doctest::Approx(std::log(0.3)).epsilon(1e-15));
    CHECK(contains(parse_error("policy_std_init = 0"), "policy_std_init"));
    CHECK(contains(parse_error("policy_std_floor = -1"), "policy_std_floor"));
    CHECK(contains(parse_error("hidden = 0"), "hidden"));
}

TEST_CASE("sweep axes") {
    const auto cfg = parse(
        "sweep.N = 4 9 16 25\n"
        "sweep.f_c = 1.4 2.4 GHz\n"
        "sweep.rcs = 10 20\n"
        "sweep.K_factors = 0 10\n"
        "sweep.M = 8\n");
    CHECK(cfg.sweep.irs_elements == std::vector<int>{4, 9, 16, 25});
    REQUIRE(cfg.sweep.carrier_hz.size() == 2);
    CHECK(cfg.sweep.carrier_hz[0] == doctest::Approx(1.4e9).epsilon(1e-15));
    CHECK(cfg.sweep.carrier_hz[1] == doctest::Approx(2.4e9).epsilon(1e-15));
    CHECK(cfg.sweep.rician == std::vector<double>{0.0, 10.0});
    CHECK(cfg.sweep.bs_antennas == std::vector<int>{8});

    CHECK(contains(parse_error("sweep.N = 4 10"),
                   "swept N = 10 must be a perfect square"));
}

TEST_CASE("comments and blank lines") {
    const auto cfg = parse(
        "# reference setup\n"
        "\n"
        "M = 8   # more antennas\n"
        "   \t\n"
        "K = 2\n");
    CHECK(cfg.env.geometry.bs_antennas == 8);
    CHECK(cfg.env.geometry.user_count == 2);
}

TEST_CASE("malformed input is reported with file and line") {
    CHECK(contains(parse_error("M = 4\nfoo = 1"), "test.cfg:2: unknown key 'foo'"));
    CHECK(contains(parse_error("M = 4\nM = 8"), "test.cfg:2: duplicate key 'M'"));
    CHECK(contains(parse_error("M = x"), "test.cfg:1: not an integer"));
    CHECK(contains(parse_error("P_max = 1 parsec"), "test.cfg:1: unit 'parsec' not valid here"));
    CHECK(contains(parse_error("M ="), "test.cfg:1: missing value"));
    CHECK(contains(parse_error("just words"), "test.cfg:1: expected 'key = value'"));
    CHECK(contains(parse_error("nlos_weight = sometimes"),
                   "nlos_weight: expected verbatim or normalized"));

    // Semantic errors surface through validation instead.
    CHECK_THROWS_AS(parse("N = 10"), std::invalid_argument);
    CHECK_THROWS_AS(parse("policies = ppo bogus"), std::invalid_argument);
    CHECK_THROWS_AS(parse("schemes = tdma"), std::invalid_argument);

    CHECK_THROWS_WITH_AS(rsisac::load_config("/nonexistent/rsisac.cfg"),
                         "cannot open config file: /nonexistent/rsisac.cfg",
                         std::runtime_error);
}

TEST_CASE("write and reparse round trip") {
    const auto cfg = parse(
        "M = 8\n"
        "f_c = 1.4 GHz\n"
        "P_max = 20 dBm\n"
        "SNR_th = 3 dB\n"
        "gamma = 30 deg\n"
        "policy_std_init = 0.4\n"
        "policy_std_floor = 0.2\n"
        "hidden = 24 12\n"
        "episodes = 9\n"
        "seeds = 2 4\n"
        "schemes = rsma sdma\n"
        "policies = ppo random\n"
        "out = elsewhere\n"
        "sweep.N = 4 9\n"
        "sweep.rcs = 10 20\n");

    std::ostringstream out;
    rsisac::write_config(cfg, out);
    std::istringstream back_in(out.str());
    const auto back = rsisac::parse_config(back_in, "roundtrip.cfg");

    CHECK(back.env.geometry.bs_antennas == 8);
    CHECK(back.env.fading.carrier_hz == cfg.env.fading.carrier_hz);
    CHECK(back.env.geometry.bs_spacing == cfg.env.geometry.bs_spacing);
    CHECK(back.env.power.max_power == cfg.env.power.max_power);
    CHECK(back.env.qos.snr_threshold == cfg.env.qos.snr_threshold);
    CHECK(back.env.mobility.user_angle == cfg.env.mobility.user_angle);
    CHECK(back.ppo.log_std_init == doctest::Approx(cfg.ppo.log_std_init).epsilon(1e-14));
    CHECK(back.ppo.log_std_floor == doctest::Approx(cfg.ppo.log_std_floor).epsilon(1e-14));
    CHECK(back.ppo.hidden == cfg.ppo.hidden);
    CHECK(back.ppo.episodes == 9);
    CHECK(back.baseline.episodes == 9);
    CHECK(back.seeds == cfg.seeds);
    CHECK(back.schemes == cfg.schemes);
    CHECK(back.policies == cfg.policies);
    CHECK(back.output_dir == "elsewhere");
    CHECK(back.sweep.irs_elements == cfg.sweep.irs_elements);
    CHECK(back.sweep.rcs == cfg.sweep.rcs);
}

} // TEST_SUITE
