// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/channel.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <random>
#include <stdexcept>

#include "rsisac/common.hpp"

namespace rsisac {

void FadingConfig::validate() const {
    auto fail = [](const char* what) {
        throw std::invalid_argument(std::string("FadingConfig: ") + what);
    };
    if (!(carrier_hz > 0.0)) fail("carrier_hz (f_c) must be > 0");
    if (!(rcs > 0.0)) fail("rcs must be > 0");
    if (rician_bs_irs < 0.0 || rician_irs_user < 0.0 || rician_irs_target < 0.0)
        fail("Rician factors must be >= 0");
    if (!(noise_user > 0.0)) fail("noise_user must be > 0");
    if (!(noise_radar > 0.0)) fail("noise_radar must be > 0");
    if (radar_eps_exponent != 2 && radar_eps_exponent != 4)
        fail("radar_eps_exponent must be 2 or 4");
}

double FadingConfig::wavelength() const { return rsisac::wavelength(carrier_hz); }

double wavelength(double carrier_hz) {
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("wavelength: carrier frequency must be > 0");
    return kSpeedOfLight / carrier_hz;
}

double comm_amplitude(double wavelength, double eps, PathLossMode mode) {
    if (!(eps > 0.0)) throw std::domain_error("comm_amplitude: coincident nodes (eps = 0)");
    const double denom = mode == PathLossMode::verbatim_epsilon ? eps : std::sqrt(eps);
    return wavelength / (4.0 * arma::datum::pi * denom);
}

double radar_amplitude(double wavelength, double rcs, double eps, int eps_exponent) {
    if (!(eps > 0.0)) throw std::domain_error("radar_amplitude: coincident nodes (eps = 0)");
    const double four_pi = 4.0 * arma::datum::pi;
    return std::sqrt(wavelength * wavelength * rcs /
                     (four_pi * four_pi * four_pi * std::pow(eps, eps_exponent)));
}

namespace {

std::complex<double> los_entry(double rician, double eps, double lambda) {
    const double mag = std::sqrt(rician / (rician + 1.0));
    const double phase = -2.0 * arma::datum::pi * std::sqrt(eps) / lambda;
    return std::polar(mag, phase);
}

double nlos_weight_for(NlosWeight mode, double rician) {
    return mode == NlosWeight::verbatim ? 1.0 : std::sqrt(1.0 / (rician + 1.0));
}

} // namespace

LosComponents los_components(const SceneGeometry& geom, const FadingConfig& fading,
                             const Mobility& mob, double t) {
    geom.validate();
    fading.validate();
    const double lambda = fading.wavelength();
    const SquaredDistances eps = squared_distances(geom);

    const double f_user = doppler_user(geom, mob, lambda);
    const double f_target = doppler_target(geom, mob, lambda);
    const std::complex<double> rot_user = std::polar(1.0, 2.0 * arma::datum::pi * t * f_user);
    const std::complex<double> rot_target = std::polar(1.0, 2.0 * arma::datum::pi * t * f_target);

    LosComponents out;
    out.bs_irs.set_size(geom.irs_elements, geom.bs_antennas);
    out.irs_user.set_size(geom.irs_elements, geom.user_count);
    out.irs_target.set_size(geom.irs_elements);
    for (int n = 0; n < geom.irs_elements; ++n) {
        for (int m = 0; m < geom.bs_antennas; ++m)
            out.bs_irs(n, m) = los_entry(fading.rician_bs_irs, eps.bs_irs(m, n), lambda);
        for (int k = 0; k < geom.user_count; ++k)
            out.irs_user(n, k) =
                los_entry(fading.rician_irs_user, eps.irs_user(n, k), lambda) * rot_user;
        out.irs_target(n) =
            los_entry(fading.rician_irs_target, eps.irs_target(n), lambda) * rot_target;
    }
    return out;
}

namespace {

struct NlosDraws {
    arma::cx_mat bs_irs;
    arma::cx_mat irs_user;
    arma::cx_vec irs_target;
};

// i.i.d. CN(0,1): independent real/imaginary parts of variance 1/2 each.
// Draw order is fixed (G by (n,m), then h_users by (k,n), then h_target)
// so a seed pins the realization bit for bit.
NlosDraws draw_nlos(const SceneGeometry& geom, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(2.0);
    auto draw = [&]() {
        const double re = gauss(rng);
        const double im = gauss(rng);
        return std::complex<double>(re * scale, im * scale);
    };
    NlosDraws d;
    d.bs_irs.set_size(geom.irs_elements, geom.bs_antennas);
    d.irs_user.set_size(geom.irs_elements, geom.user_count);
    d.irs_target.set_size(geom.irs_elements);
    for (int n = 0; n < geom.irs_elements; ++n)
        for (int m = 0; m < geom.bs_antennas; ++m) d.bs_irs(n, m) = draw();
    for (int k = 0; k < geom.user_count; ++k)
        for (int n = 0; n < geom.irs_elements; ++n) d.irs_user(n, k) = draw();
    for (int n = 0; n < geom.irs_elements; ++n) d.irs_target(n) = draw();
    return d;
}

ChannelRealization compose(const SceneGeometry& geom, const FadingConfig& fading,
                           const Mobility& mob, double t, NlosDraws nlos) {
    const double lambda = fading.wavelength();
    const SquaredDistances eps = squared_distances(geom);
    const LosComponents los = los_components(geom, fading, mob, t);

    const double w_bi = nlos_weight_for(fading.nlos_weight, fading.rician_bs_irs);
    const double w_iu = nlos_weight_for(fading.nlos_weight, fading.rician_irs_user);
    const double w_ir = nlos_weight_for(fading.nlos_weight, fading.rician_irs_target);

    ChannelRealization real;
    real.time = t;
    real.G.set_size(geom.irs_elements, geom.bs_antennas);
    real.h_users.set_size(geom.irs_elements, geom.user_count);
    real.h_target.set_size(geom.irs_elements);
    for (int n = 0; n < geom.irs_elements; ++n) {
        for (int m = 0; m < geom.bs_antennas; ++m) {
            const double amp = comm_amplitude(lambda, eps.bs_irs(m, n), fading.path_loss);
            real.G(n, m) = amp * (los.bs_irs(n, m) + w_bi * nlos.bs_irs(n, m));
        }
        for (int k = 0; k < geom.user_count; ++k) {
            const double amp = comm_amplitude(lambda, eps.irs_user(n, k), fading.path_loss);
            real.h_users(n, k) = amp * (los.irs_user(n, k) + w_iu * nlos.irs_user(n, k));
        }
        const double amp =
            radar_amplitude(lambda, fading.rcs, eps.irs_target(n), fading.radar_eps_exponent);
        real.h_target(n) = amp * (los.irs_target(n) + w_ir * nlos.irs_target(n));
    }
    real.nlos_bs_irs = std::move(nlos.bs_irs);
    real.nlos_irs_user = std::move(nlos.irs_user);
    real.nlos_irs_target = std::move(nlos.irs_target);
    return real;
}

} // namespace

ChannelRealization realize(const SceneGeometry& geom, const FadingConfig& fading,
                           const Mobility& mob, double t, std::uint64_t seed) {
    geom.validate();
    fading.validate();
    mob.validate();
    return compose(geom, fading, mob, t, draw_nlos(geom, seed));
}

ChannelRealization advance(const ChannelRealization& real, const SceneGeometry& geom,
                           const FadingConfig& fading, const Mobility& mob, double dt) {
    if (dt < 0.0) throw std::invalid_argument("advance: dt must be >= 0");
    NlosDraws nlos{real.nlos_bs_irs, real.nlos_irs_user, real.nlos_irs_target};
    return compose(geom, fading, mob, real.time + dt, std::move(nlos));
}

void dump_csv(const ChannelRealization& real, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_csv: cannot open " + path);
    out.precision(17);
    out << "link,row,col,re,im\n";
    auto emit = [&out](const char* link, const arma::cx_mat& m) {
        for (arma::uword c = 0; c < m.n_cols; ++c)
            for (arma::uword r = 0; r < m.n_rows; ++r)
                out << link << ',' << r << ',' << c << ',' << m(r, c).real() << ','
                    << m(r, c).imag() << '\n';
    };
    emit("G", real.G);
    emit("h_user", real.h_users);
    emit("h_target", arma::cx_mat(real.h_target));
    if (!out) throw std::runtime_error("dump_csv: write failed for " + path);
}

} // namespace rsisac
