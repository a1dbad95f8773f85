// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rsisac/channel.hpp"
#include "rsisac/units.hpp"

namespace rsisac {

double Spacing::meters(double carrier_hz) const {
    return in_wavelengths ? value * wavelength(carrier_hz) : value;
}

bool SweepAxes::empty() const {
    return bs_antennas.empty() && irs_elements.empty() && carrier_hz.empty() && rcs.empty() &&
           rician.empty();
}

namespace {

bool is_perfect_square(int n) {
    if (n < 1) return false;
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return r * r == n;
}

bool known_policy(const std::string& p) { return p == "ppo" || p == "greedy" || p == "random"; }
bool known_scheme(const std::string& s) { return s == "rsma" || s == "sdma"; }

} // namespace

void ExperimentConfig::validate() const {
    env.validate();
    ppo.validate();
    baseline.validate();
    if (!(bs_spacing.value > 0.0) || !(irs_spacing.value > 0.0) || !(user_spacing.value > 0.0))
        throw std::invalid_argument("ExperimentConfig: spacings (d_B, d_I, d_U) must be > 0");
    if (seeds.empty()) throw std::invalid_argument("ExperimentConfig: seeds must not be empty");
    if (policies.empty())
        throw std::invalid_argument("ExperimentConfig: policies must not be empty");
    for (const auto& p : policies)
        if (!known_policy(p))
            throw std::invalid_argument("ExperimentConfig: unknown policy '" + p +
                                        "' (expected ppo, greedy, or random)");
    if (schemes.empty()) throw std::invalid_argument("ExperimentConfig: schemes must not be empty");
    for (const auto& s : schemes)
        if (!known_scheme(s))
            throw std::invalid_argument("ExperimentConfig: unknown scheme '" + s +
                                        "' (expected rsma or sdma)");
    for (int n : sweep.irs_elements)
        if (!is_perfect_square(n))
            throw std::invalid_argument("ExperimentConfig: swept N = " + std::to_string(n) +
                                        " must be a perfect square");
    for (int m : sweep.bs_antennas)
        if (m < 1) throw std::invalid_argument("ExperimentConfig: swept M must be >= 1");
    for (double f : sweep.carrier_hz)
        if (!(f > 0.0)) throw std::invalid_argument("ExperimentConfig: swept f_c must be > 0");
    for (double r : sweep.rcs)
        if (!(r > 0.0)) throw std::invalid_argument("ExperimentConfig: swept rcs must be > 0");
    for (double k : sweep.rician)
        if (k < 0.0)
            throw std::invalid_argument("ExperimentConfig: swept K_factors must be >= 0");
    if (output_dir.empty())
        throw std::invalid_argument("ExperimentConfig: output directory must not be empty");
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.env.geometry.bs_spacing = cfg.bs_spacing.meters(cfg.env.fading.carrier_hz);
    cfg.env.geometry.irs_spacing = cfg.irs_spacing.meters(cfg.env.fading.carrier_hz);
    cfg.env.geometry.user_spacing = cfg.user_spacing.meters(cfg.env.fading.carrier_hz);
    return cfg;
}

namespace {

struct Entry {
    int line = 0;
    std::vector<std::string> tokens;
};

enum class Dim { plain, frequency, power, level, angle, speed, time };

class ConfigReader {
  public:
    ConfigReader(std::istream& in, std::string source) : source_(std::move(source)) {
        std::string line;
        int number = 0;
        while (std::getline(in, line)) {
            ++number;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(number, "expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty()) fail(number, "missing key before '='");
            Entry entry;
            entry.line = number;
            std::istringstream rest(line.substr(eq + 1));
            std::string tok;
            while (rest >> tok) entry.tokens.push_back(tok);
            if (entry.tokens.empty()) fail(number, "missing value for key '" + key + "'");
            if (!entries_.emplace(key, entry).second)
                fail(number, "duplicate key '" + key + "'");
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw std::runtime_error(source_ + ":" + std::to_string(line) + ": " + msg);
    }

    std::optional<Entry> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        Entry e = std::move(it->second);
        entries_.erase(it);
        return e;
    }

    void reject_leftovers() const {
        if (entries_.empty()) return;
        const Entry* first = nullptr;
        std::string key;
        for (const auto& [k, e] : entries_) {
            if (!first || e.line < first->line) {
                first = &e;
                key = k;
            }
        }
        fail(first->line, "unknown key '" + key + "'");
    }

    double number(const std::string& tok, int line) const {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            fail(line, "not a number: '" + tok + "'");
        }
        if (pos != tok.size()) fail(line, "not a number: '" + tok + "'");
        return v;
    }

    long long integer(const std::string& tok, int line) const {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &pos);
        } catch (const std::exception&) {
            fail(line, "not an integer: '" + tok + "'");
        }
        if (pos != tok.size()) fail(line, "not an integer: '" + tok + "'");
        return v;
    }

    std::uint64_t unsigned64(const std::string& tok, int line) const {
        std::size_t pos = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(tok, &pos);
        } catch (const std::exception&) {
            fail(line, "not an unsigned integer: '" + tok + "'");
        }
        if (pos != tok.size() || tok.front() == '-')
            fail(line, "not an unsigned integer: '" + tok + "'");
        return v;
    }

    double apply_unit(double v, const std::string& unit, Dim dim, int line) const {
        switch (dim) {
            case Dim::frequency:
                if (unit == "Hz") return v;
                if (unit == "kHz") return v * 1e3;
                if (unit == "MHz") return v * 1e6;
                if (unit == "GHz") return v * 1e9;
                break;
            case Dim::power:
                if (unit == "W") return v;
                if (unit == "mW") return v * 1e-3;
                if (unit == "dBm") return dbm_to_watts(v);
                break;
            case Dim::level:
                if (unit == "dB") return db_to_linear(v);
                break;
            case Dim::angle:
                if (unit == "deg") return deg_to_rad(v);
                if (unit == "rad") return v;
                break;
            case Dim::speed:
                if (unit == "m/s") return v;
                break;
            case Dim::time:
                if (unit == "s") return v;
                if (unit == "ms") return v * 1e-3;
                break;
            case Dim::plain:
                break;
        }
        fail(line, "unit '" + unit + "' not valid here");
    }

    double default_unit(double v, Dim dim) const {
        // Bare numbers are SI (Hz, W, s, m/s, linear ratios); angles are the
        // exception and read as degrees.
        return dim == Dim::angle ? deg_to_rad(v) : v;
    }

    bool scalar(const std::string& key, Dim dim, double& out) {
        auto e = take(key);
        if (!e) return false;
        if (e->tokens.size() > 2) fail(e->line, key + ": expected a value and optional unit");
        double v = number(e->tokens[0], e->line);
        out = e->tokens.size() == 2 ? apply_unit(v, e->tokens[1], dim, e->line)
                                    : default_unit(v, dim);
        return true;
    }

    bool scalar_int(const std::string& key, int& out) {
        auto e = take(key);
        if (!e) return false;
        if (e->tokens.size() != 1) fail(e->line, key + ": expected one integer");
        const long long v = integer(e->tokens[0], e->line);
        out = static_cast<int>(v);
        if (out != v) fail(e->line, key + ": value out of range");
        return true;
    }

    bool scalar_bool(const std::string& key, bool& out) {
        auto e = take(key);
        if (!e) return false;
        if (e->tokens.size() != 1 || (e->tokens[0] != "true" && e->tokens[0] != "false"))
            fail(e->line, key + ": expected true or false");
        out = e->tokens[0] == "true";
        return true;
    }

    bool spacing(const std::string& key, Spacing& out) {
        auto e = take(key);
        if (!e) return false;
        if (e->tokens.size() > 2) fail(e->line, key + ": expected a value and optional unit");
        out.value = number(e->tokens[0], e->line);
        out.in_wavelengths = false;
        if (e->tokens.size() == 2) {
            if (e->tokens[1] == "lambda") out.in_wavelengths = true;
            else if (e->tokens[1] != "m") fail(e->line, key + ": unit must be m or lambda");
        }
        return true;
    }

    // Numeric list; a trailing non-numeric token is a unit applied to all.
    bool list(const std::string& key, Dim dim, std::vector<double>& out) {
        auto e = take(key);
        if (!e) return false;
        std::vector<std::string> toks = e->tokens;
        std::string unit;
        if (toks.size() > 1 && !looks_numeric(toks.back())) {
            unit = toks.back();
            toks.pop_back();
        }
        out.clear();
        for (const auto& t : toks) {
            const double v = number(t, e->line);
            out.push_back(unit.empty() ? default_unit(v, dim)
                                       : apply_unit(v, unit, dim, e->line));
        }
        return true;
    }

    bool list_int(const std::string& key, std::vector<int>& out) {
        auto e = take(key);
        if (!e) return false;
        out.clear();
        for (const auto& t : e->tokens) out.push_back(static_cast<int>(integer(t, e->line)));
        return true;
    }

    bool list_u64(const std::string& key, std::vector<std::uint64_t>& out) {
        auto e = take(key);
        if (!e) return false;
        out.clear();
        for (const auto& t : e->tokens) out.push_back(unsigned64(t, e->line));
        return true;
    }

    bool words(const std::string& key, std::vector<std::string>& out) {
        auto e = take(key);
        if (!e) return false;
        out = e->tokens;
        return true;
    }

    bool word(const std::string& key, std::string& out, int* line = nullptr) {
        auto e = take(key);
        if (!e) return false;
        if (e->tokens.size() != 1) fail(e->line, key + ": expected one value");
        out = e->tokens[0];
        if (line) *line = e->line;
        return true;
    }

  private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static bool looks_numeric(const std::string& tok) {
        std::size_t pos = 0;
        try {
            (void)std::stod(tok, &pos);
        } catch (const std::exception&) {
            return false;
        }
        return pos == tok.size();
    }

    std::string source_;
    std::map<std::string, Entry> entries_;
};

} // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
    ConfigReader reader(in, source_name);
    ExperimentConfig cfg = default_config();

    reader.scalar_int("M", cfg.env.geometry.bs_antennas);
    reader.scalar_int("K", cfg.env.geometry.user_count);
    reader.scalar_int("N", cfg.env.geometry.irs_elements);
    reader.scalar_int("B", cfg.env.codebook.bits);
    reader.scalar("f_c", Dim::frequency, cfg.env.fading.carrier_hz);

    reader.scalar("H_B", Dim::plain, cfg.env.geometry.bs_height);
    reader.scalar("H_I", Dim::plain, cfg.env.geometry.irs_height);
    reader.scalar("H_R", Dim::plain, cfg.env.geometry.target_height);
    reader.scalar("x_I", Dim::plain, cfg.env.geometry.irs_x);
    reader.scalar("y_I", Dim::plain, cfg.env.geometry.irs_y);
    reader.scalar("x_R", Dim::plain, cfg.env.geometry.target_x);
    reader.scalar("y_R", Dim::plain, cfg.env.geometry.target_y);
    reader.scalar("x_U", Dim::plain, cfg.env.geometry.user_x);
    reader.spacing("d_B", cfg.bs_spacing);
    reader.spacing("d_I", cfg.irs_spacing);
    reader.spacing("d_U", cfg.user_spacing);

    reader.scalar("v_k", Dim::speed, cfg.env.mobility.user_speed);
    reader.scalar("v_r", Dim::speed, cfg.env.mobility.target_speed);
    reader.scalar("gamma", Dim::angle, cfg.env.mobility.user_angle);
    reader.scalar("gamma_r", Dim::angle, cfg.env.mobility.target_angle);

    reader.scalar("K_BI", Dim::plain, cfg.env.fading.rician_bs_irs);
    reader.scalar("K_IU", Dim::plain, cfg.env.fading.rician_irs_user);
    reader.scalar("K_IR", Dim::plain, cfg.env.fading.rician_irs_target);
    reader.scalar("rcs", Dim::plain, cfg.env.fading.rcs);
    reader.scalar("noise_user", Dim::power, cfg.env.fading.noise_user);
    reader.scalar("noise_radar", Dim::power, cfg.env.fading.noise_radar);
    reader.scalar_int("radar_eps_exponent", cfg.env.fading.radar_eps_exponent);
    {
        std::string mode;
        int line = 0;
        if (reader.word("nlos_weight", mode, &line)) {
            if (mode == "verbatim") cfg.env.fading.nlos_weight = NlosWeight::verbatim;
            else if (mode == "normalized") cfg.env.fading.nlos_weight = NlosWeight::normalized;
            else reader.fail(line, "nlos_weight: expected verbatim or normalized");
        }
        if (reader.word("path_loss", mode, &line)) {
            if (mode == "verbatim_epsilon")
                cfg.env.fading.path_loss = PathLossMode::verbatim_epsilon;
            else if (mode == "distance") cfg.env.fading.path_loss = PathLossMode::distance;
            else reader.fail(line, "path_loss: expected verbatim_epsilon or distance");
        }
    }

    reader.scalar("P_max", Dim::power, cfg.env.power.max_power);
    reader.scalar("P_ST", Dim::power, cfg.env.power.static_power);
    reader.scalar("mu", Dim::plain, cfg.env.power.amplifier_efficiency);
    reader.scalar("chi", Dim::plain, cfg.env.power.radar_weight);
    reader.scalar_bool("constrain_total_power", cfg.env.power.constrain_total_power);

    reader.scalar("R_th", Dim::plain, cfg.env.qos.rate_threshold);
    reader.scalar("SNR_th", Dim::level, cfg.env.qos.snr_threshold);

    reader.scalar("step_interval", Dim::time, cfg.env.step_interval);
    reader.scalar_int("episode_length", cfg.env.episode_length);

    if (reader.scalar_int("episodes", cfg.ppo.episodes))
        cfg.baseline.episodes = cfg.ppo.episodes;
    reader.scalar("discount", Dim::plain, cfg.ppo.discount);
    reader.scalar("clip", Dim::plain, cfg.ppo.clip);
    reader.scalar_int("pool_capacity", cfg.ppo.pool_capacity);
    reader.scalar("actor_lr", Dim::plain, cfg.ppo.actor_lr);
    reader.scalar("critic_lr", Dim::plain, cfg.ppo.critic_lr);
    reader.scalar_int("update_epochs", cfg.ppo.update_epochs);
    {
        double std_init = 0.0;
        if (reader.scalar("policy_std_init", Dim::plain, std_init)) {
            if (!(std_init > 0.0))
                throw std::runtime_error(source_name + ": policy_std_init must be > 0");
            cfg.ppo.log_std_init = std::log(std_init);
        }
        double std_floor = 0.0;
        if (reader.scalar("policy_std_floor", Dim::plain, std_floor)) {
            if (!(std_floor > 0.0))
                throw std::runtime_error(source_name + ": policy_std_floor must be > 0");
            cfg.ppo.log_std_floor = std::log(std_floor);
        }
    }
    reader.scalar("reward_scale", Dim::plain, cfg.ppo.reward_scale);
    reader.scalar_bool("normalize_advantages", cfg.ppo.normalize_advantages);
    {
        std::vector<int> hidden;
        if (reader.list_int("hidden", hidden)) {
            cfg.ppo.hidden.clear();
            for (int h : hidden) {
                if (h < 1) throw std::runtime_error(source_name + ": hidden sizes must be >= 1");
                cfg.ppo.hidden.push_back(static_cast<arma::uword>(h));
            }
        }
    }

    reader.scalar_int("greedy_candidates", cfg.baseline.greedy_candidates);

    reader.list_u64("seeds", cfg.seeds);
    reader.words("policies", cfg.policies);
    reader.words("schemes", cfg.schemes);
    reader.word("out", cfg.output_dir);

    reader.list_int("sweep.M", cfg.sweep.bs_antennas);
    reader.list_int("sweep.N", cfg.sweep.irs_elements);
    reader.list("sweep.f_c", Dim::frequency, cfg.sweep.carrier_hz);
    reader.list("sweep.rcs", Dim::plain, cfg.sweep.rcs);
    reader.list("sweep.K_factors", Dim::plain, cfg.sweep.rician);

    reader.reject_leftovers();

    cfg.env.geometry.bs_spacing = cfg.bs_spacing.meters(cfg.env.fading.carrier_hz);
    cfg.env.geometry.irs_spacing = cfg.irs_spacing.meters(cfg.env.fading.carrier_hz);
    cfg.env.geometry.user_spacing = cfg.user_spacing.meters(cfg.env.fading.carrier_hz);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in, path);
}

void write_config(const ExperimentConfig& cfg, std::ostream& out) {
    out.precision(17);
    const auto& g = cfg.env.geometry;
    const auto& f = cfg.env.fading;
    out << "M = " << g.bs_antennas << "\nK = " << g.user_count << "\nN = " << g.irs_elements
        << "\nB = " << cfg.env.codebook.bits << "\nf_c = " << f.carrier_hz << " Hz\n";
    out << "H_B = " << g.bs_height << "\nH_I = " << g.irs_height << "\nH_R = " << g.target_height
        << "\nx_I = " << g.irs_x << "\ny_I = " << g.irs_y << "\nx_R = " << g.target_x
        << "\ny_R = " << g.target_y << "\nx_U = " << g.user_x << "\n";
    auto spacing = [&out](const char* key, const Spacing& s) {
        out << key << " = " << s.value << (s.in_wavelengths ? " lambda\n" : " m\n");
    };
    spacing("d_B", cfg.bs_spacing);
    spacing("d_I", cfg.irs_spacing);
    spacing("d_U", cfg.user_spacing);
    const auto& mob = cfg.env.mobility;
    out << "v_k = " << mob.user_speed << "\nv_r = " << mob.target_speed << "\ngamma = "
        << mob.user_angle << " rad\ngamma_r = " << mob.target_angle << " rad\n";
    out << "K_BI = " << f.rician_bs_irs << "\nK_IU = " << f.rician_irs_user
        << "\nK_IR = " << f.rician_irs_target << "\nrcs = " << f.rcs
        << "\nnoise_user = " << f.noise_user << " W\nnoise_radar = " << f.noise_radar << " W\n";
    out << "nlos_weight = "
        << (f.nlos_weight == NlosWeight::verbatim ? "verbatim" : "normalized") << "\n";
    out << "path_loss = "
        << (f.path_loss == PathLossMode::verbatim_epsilon ? "verbatim_epsilon" : "distance")
        << "\n";
    out << "radar_eps_exponent = " << f.radar_eps_exponent << "\n";
    const auto& p = cfg.env.power;
    out << "P_max = " << p.max_power << " W\nP_ST = " << p.static_power << " W\nmu = "
        << p.amplifier_efficiency << "\nchi = " << p.radar_weight << "\nconstrain_total_power = "
        << (p.constrain_total_power ? "true" : "false") << "\n";
    out << "R_th = " << cfg.env.qos.rate_threshold << "\nSNR_th = " << cfg.env.qos.snr_threshold
        << "\n";
    out << "step_interval = " << cfg.env.step_interval << " s\nepisode_length = "
        << cfg.env.episode_length << "\n";
    const auto& ppo = cfg.ppo;
    out << "episodes = " << ppo.episodes << "\ndiscount = " << ppo.discount << "\nclip = "
        << ppo.clip << "\npool_capacity = " << ppo.pool_capacity << "\nactor_lr = " << ppo.actor_lr
        << "\ncritic_lr = " << ppo.critic_lr << "\nupdate_epochs = " << ppo.update_epochs
        << "\npolicy_std_init = " << std::exp(ppo.log_std_init) << "\npolicy_std_floor = "
        << std::exp(ppo.log_std_floor) << "\nreward_scale = " << ppo.reward_scale
        << "\nnormalize_advantages = "
        << (ppo.normalize_advantages ? "true" : "false") << "\n";
    out << "hidden =";
    for (arma::uword h : ppo.hidden) out << ' ' << h;
    out << "\n";
    out << "greedy_candidates = " << cfg.baseline.greedy_candidates << "\n";
    out << "seeds =";
    for (auto s : cfg.seeds) out << ' ' << s;
    out << "\npolicies =";
    for (const auto& pol : cfg.policies) out << ' ' << pol;
    out << "\nschemes =";
    for (const auto& s : cfg.schemes) out << ' ' << s;
    out << "\nout = " << cfg.output_dir << "\n";
    if (!cfg.sweep.bs_antennas.empty()) {
        out << "sweep.M =";
        for (int v : cfg.sweep.bs_antennas) out << ' ' << v;
        out << "\n";
    }
    if (!cfg.sweep.irs_elements.empty()) {
        out << "sweep.N =";
        for (int v : cfg.sweep.irs_elements) out << ' ' << v;
        out << "\n";
    }
    if (!cfg.sweep.carrier_hz.empty()) {
        out << "sweep.f_c =";
        for (double v : cfg.sweep.carrier_hz) out << ' ' << v;
        out << " Hz\n";
    }
    if (!cfg.sweep.rcs.empty()) {
        out << "sweep.rcs =";
        for (double v : cfg.sweep.rcs) out << ' ' << v;
        out << "\n";
    }
    if (!cfg.sweep.rician.empty()) {
        out << "sweep.K_factors =";
        for (double v : cfg.sweep.rician) out << ' ' << v;
        out << "\n";
    }
}

} // namespace rsisac
