// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/metrics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "rsisac/common.hpp"

namespace rsisac {

void PowerModel::validate() const {
    auto fail = [](const char* what) {
        throw std::invalid_argument(std::string("PowerModel: ") + what);
    };
    if (!(amplifier_efficiency > 0.0)) fail("amplifier_efficiency (mu) must be > 0");
    if (radar_weight < 0.0) fail("radar_weight (chi) must be >= 0");
    if (static_power < 0.0) fail("static_power must be >= 0");
    if (!(max_power > 0.0)) fail("max_power must be > 0");
}

void QosThresholds::validate() const {
    if (rate_threshold < 0.0)
        throw std::invalid_argument("QosThresholds: rate_threshold must be >= 0");
    if (snr_threshold < 0.0)
        throw std::invalid_argument("QosThresholds: snr_threshold must be >= 0");
}

namespace {

arma::cx_vec phase_gains(const arma::vec& phases) {
    return arma::cx_vec(arma::cos(phases), arma::sin(phases));
}

double gain(const arma::cx_rowvec& cascade, const arma::cx_vec& v) {
    return std::norm(arma::as_scalar(cascade * v));
}

} // namespace

arma::cx_mat cascade_users(const ChannelRealization& real, const arma::vec& phases) {
    if (phases.n_elem != real.h_users.n_rows)
        throw std::invalid_argument("cascade_users: phase count does not match IRS size");
    const arma::cx_vec w = phase_gains(phases);
    arma::cx_mat out(real.h_users.n_cols, real.G.n_cols);
    for (arma::uword k = 0; k < real.h_users.n_cols; ++k)
        out.row(k) = (arma::conj(real.h_users.col(k)) % w).st() * real.G;
    return out;
}

arma::cx_vec echo_steering(const ChannelRealization& real, const arma::vec& phases) {
    if (phases.n_elem != real.h_target.n_elem)
        throw std::invalid_argument("echo_steering: phase count does not match IRS size");
    return real.G.t() * (phase_gains(phases) % real.h_target);
}

arma::cx_mat cascade_echo(const ChannelRealization& real, const arma::vec& phases) {
    const arma::cx_vec a = echo_steering(real, phases);
    return a * a.t();
}

arma::vec common_stream_sinrs(const arma::cx_mat& cascades, const Decision& d,
                              const PowerModel& pm, double noise_user) {
    const arma::uword users = cascades.n_rows;
    arma::vec out(users);
    for (arma::uword k = 0; k < users; ++k) {
        const arma::cx_rowvec f = cascades.row(k);
        double interference = pm.radar_weight * gain(f, d.radar) + noise_user;
        for (arma::uword i = 0; i < d.privates.n_cols; ++i)
            interference += gain(f, d.privates.col(i));
        out(k) = gain(f, d.common) / interference;
    }
    return out;
}

arma::vec private_stream_sinrs(const arma::cx_mat& cascades, const Decision& d,
                               const PowerModel& pm, double noise_user) {
    const arma::uword users = cascades.n_rows;
    arma::vec out(users);
    for (arma::uword k = 0; k < users; ++k) {
        const arma::cx_rowvec f = cascades.row(k);
        double interference = pm.radar_weight * gain(f, d.radar) + noise_user;
        for (arma::uword i = 0; i < d.privates.n_cols; ++i)
            if (i != k) interference += gain(f, d.privates.col(i));
        out(k) = gain(f, d.privates.col(k)) / interference;
    }
    return out;
}

double echo_snr(const arma::cx_vec& steering, const Decision& d, double noise_radar) {
    const double combine = arma::dot(arma::conj(d.receive), d.receive).real();
    if (combine <= 0.0) return 0.0;
    const double rx = std::norm(arma::cdot(d.receive, steering));
    const double tx = std::norm(arma::cdot(steering, d.radar));
    return rx * tx / (noise_radar * combine);
}

double radiated_power(const Decision& d, const PowerModel& pm) {
    double sum = arma::dot(arma::conj(d.common), d.common).real();
    for (arma::uword k = 0; k < d.privates.n_cols; ++k)
        sum += arma::dot(arma::conj(d.privates.col(k)), d.privates.col(k)).real();
    sum += pm.radar_weight * arma::dot(arma::conj(d.radar), d.radar).real();
    return pm.amplifier_efficiency * sum;
}

double total_power(const Decision& d, const PowerModel& pm) {
    return radiated_power(d, pm) + pm.static_power;
}

double energy_efficiency(double sum_rate, double total_power) {
    if (!(total_power > 0.0))
        throw std::domain_error("energy_efficiency: total power must be > 0");
    return sum_rate / total_power;
}

LinkMetrics evaluate(const ChannelRealization& real, const Decision& d, const PowerModel& pm,
                     const QosThresholds& qos, const FadingConfig& fading) {
    pm.validate();
    qos.validate();
    const arma::uword users = real.h_users.n_cols;
    const arma::uword antennas = real.G.n_cols;
    if (d.privates.n_rows != antennas || d.privates.n_cols != users ||
        d.common.n_elem != antennas || d.radar.n_elem != antennas ||
        d.receive.n_elem != antennas || d.common_rates.n_elem != users ||
        d.phases.n_elem != real.G.n_rows)
        throw std::invalid_argument("evaluate: decision dimensions do not match the channel");

    LinkMetrics m;
    const arma::cx_mat F = cascade_users(real, d.phases);
    m.sinr_common = common_stream_sinrs(F, d, pm, fading.noise_user);
    m.sinr_private = private_stream_sinrs(F, d, pm, fading.noise_user);
    m.common_capacity = arma::log2(1.0 + m.sinr_common).min();
    m.user_rates = d.common_rates + arma::log2(1.0 + m.sinr_private);
    m.sum_rate = arma::accu(m.user_rates);
    m.radiated_power = radiated_power(d, pm);
    m.total_power = m.radiated_power + pm.static_power;
    m.energy_efficiency = energy_efficiency(m.sum_rate, m.total_power);
    m.echo_snr = echo_snr(echo_steering(real, d.phases), d, fading.noise_radar);

    m.flags.common_rate =
        d.common_rates.min() >= 0.0 && arma::accu(d.common_rates) <= m.common_capacity;
    m.flags.qos = m.user_rates.min() >= qos.rate_threshold;
    const double budget_draw = pm.constrain_total_power ? m.total_power : m.radiated_power;
    m.flags.power = budget_draw <= pm.max_power;
    m.flags.echo = m.echo_snr >= qos.snr_threshold;
    m.reward = m.flags.all() ? m.energy_efficiency : 0.0;
    return m;
}

} // namespace rsisac
