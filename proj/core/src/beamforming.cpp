// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/beamforming.hpp"

#include <cmath>
#include <stdexcept>

#include "rsisac/common.hpp"

namespace rsisac {

void PhaseCodebook::validate() const {
    if (bits < 1 || bits > 16)
        throw std::invalid_argument("PhaseCodebook: bits must be in [1, 16]");
}

void ActionLayout::validate() const {
    if (users < 1) throw std::invalid_argument("ActionLayout: users must be >= 1");
    if (irs_elements < 1) throw std::invalid_argument("ActionLayout: irs_elements must be >= 1");
}

double amplitude_from_logit(double logit, double max_power) {
    if (!(max_power > 0.0))
        throw std::invalid_argument("amplitude_from_logit: max_power must be > 0");
    return 0.5 * std::sqrt(max_power) * (std::tanh(logit) + 1.0);
}

arma::vec decode_phases(const arma::vec& phase_logits, const PhaseCodebook& cb) {
    cb.validate();
    arma::vec out(phase_logits.n_elem);
    const double top = cb.levels() - 1;
    for (arma::uword n = 0; n < phase_logits.n_elem; ++n) {
        const double idx = 0.5 * (std::tanh(phase_logits(n)) + 1.0) * top;
        double level = std::ceil(idx - 0.5);
        if (level < 0.0) level = 0.0;
        if (level > top) level = top;
        out(n) = level * cb.step();
    }
    return out;
}

arma::vec decode_common_rates(const arma::vec& rate_logits, double capacity) {
    if (capacity < 0.0)
        throw std::invalid_argument("decode_common_rates: capacity must be >= 0");
    return 0.5 * capacity * (arma::tanh(rate_logits) + 1.0);
}

namespace {

arma::cx_vec unit(const arma::cx_vec& v) {
    const double n = arma::norm(v);
    if (!(n > 0.0)) throw std::domain_error("beamforming: cannot normalize a zero vector");
    return v / n;
}

arma::cx_mat matched_filter_directions(const arma::cx_mat& cascades) {
    arma::cx_mat dirs(cascades.n_cols, cascades.n_rows);
    for (arma::uword k = 0; k < cascades.n_rows; ++k)
        dirs.col(k) = unit(cascades.row(k).t());
    return dirs;
}

} // namespace

arma::cx_mat zf_private_directions(const arma::cx_mat& cascades, bool* fell_back) {
    if (fell_back) *fell_back = false;
    const arma::cx_mat gram = cascades * cascades.t();
    arma::cx_mat inv_times_cascades;
    const bool ok = arma::solve(inv_times_cascades, gram, arma::cx_mat(cascades),
                                arma::solve_opts::no_approx);
    if (ok) {
        arma::cx_mat dirs = inv_times_cascades.t();
        bool degenerate = !dirs.is_finite();
        for (arma::uword k = 0; !degenerate && k < dirs.n_cols; ++k)
            if (!(arma::norm(dirs.col(k)) > 0.0)) degenerate = true;
        if (!degenerate) {
            for (arma::uword k = 0; k < dirs.n_cols; ++k) dirs.col(k) = unit(dirs.col(k));
            return dirs;
        }
    }
    warn("zero-forcing directions singular, falling back to matched filters");
    if (fell_back) *fell_back = true;
    return matched_filter_directions(cascades);
}

arma::cx_vec mrt_common_direction(const arma::cx_mat& cascades) {
    arma::cx_vec sum(cascades.n_cols, arma::fill::zeros);
    for (arma::uword k = 0; k < cascades.n_rows; ++k) sum += cascades.row(k).t();
    return unit(sum);
}

arma::cx_vec mrt_radar_direction(const arma::cx_vec& steering) { return unit(steering); }

arma::cx_vec matched_receive_beamformer(const arma::cx_vec& steering, const arma::cx_vec& radar) {
    const arma::cx_vec received = steering * arma::cdot(steering, radar);
    if (arma::norm(received) > 0.0) return unit(received);
    return unit(steering);
}

Decision assemble(const arma::vec& logits, const ActionLayout& layout,
                  const ChannelRealization& real, const PhaseCodebook& cb, const PowerModel& pm,
                  const FadingConfig& fading, AssemblyReport* report) {
    layout.validate();
    cb.validate();
    pm.validate();
    if (static_cast<int>(logits.n_elem) != layout.dim())
        throw std::invalid_argument("assemble: logit vector does not match the action layout");
    if (!logits.is_finite()) throw std::invalid_argument("assemble: logits must be finite");
    if (static_cast<int>(real.h_users.n_cols) != layout.users ||
        static_cast<int>(real.G.n_rows) != layout.irs_elements)
        throw std::invalid_argument("assemble: channel dimensions do not match the layout");

    Decision d;
    d.phases = decode_phases(logits.subvec(layout.phase_offset(),
                                           layout.phase_offset() + layout.irs_elements - 1),
                             cb);

    const arma::cx_mat cascades = cascade_users(real, d.phases);
    const arma::cx_vec steering = echo_steering(real, d.phases);

    bool fell_back = false;
    const arma::cx_mat private_dirs = zf_private_directions(cascades, &fell_back);
    if (report) report->zf_fallback = fell_back;
    const arma::cx_vec radar_dir = mrt_radar_direction(steering);

    d.privates.set_size(real.G.n_cols, layout.users);
    for (int k = 0; k < layout.users; ++k) {
        const double amp =
            amplitude_from_logit(logits(layout.private_power_offset() + k), pm.max_power);
        d.privates.col(k) = amp * private_dirs.col(k);
    }
    d.radar = amplitude_from_logit(logits(layout.radar_power_index()), pm.max_power) * radar_dir;
    d.receive = matched_receive_beamformer(steering, d.radar);

    if (layout.sdma) {
        d.common.zeros(real.G.n_cols);
        d.common_rates.zeros(layout.users);
        return d;
    }

    d.common = amplitude_from_logit(logits(layout.common_power_index()), pm.max_power) *
               mrt_common_direction(cascades);
    const double capacity =
        arma::log2(1.0 + common_stream_sinrs(cascades, d, pm, fading.noise_user)).min();
    d.common_rates = decode_common_rates(
        logits.subvec(layout.common_rate_offset(),
                      layout.common_rate_offset() + layout.users - 1),
        capacity);
    return d;
}

} // namespace rsisac
