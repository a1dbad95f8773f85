// SPDX-License-Identifier: Apache-2.0
//
// rsisac - IRS-assisted ISAC simulation and PPO-based EE optimization

#include "rsisac/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rsisac/common.hpp"

namespace rsisac {

namespace {

// Filesystem-friendly rendering: 2.4 -> "2p4", 1e+10 -> "1e10".
std::string number_tag(double v) {
    std::ostringstream s;
    s << v;
    std::string out;
    for (char c : s.str()) {
        if (c == '.') out += 'p';
        else if (c != '+') out += c;
    }
    return out;
}

std::string sanitize(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return text;
}

double series_mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double series_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = series_mean(v);
    double sum = 0.0;
    for (double x : v) sum += (x - m) * (x - m);
    return std::sqrt(sum / static_cast<double>(v.size() - 1));
}

} // namespace

std::string SweepPoint::tag() const {
    std::ostringstream s;
    s << "M" << bs_antennas << "_N" << irs_elements << "_f" << number_tag(carrier_hz / 1e9)
      << "GHz_rcs" << number_tag(rcs) << "_K";
    if (rician) s << number_tag(*rician);
    else s << "base";
    s << "_" << scheme;
    return s.str();
}

EnvConfig resolve_env(const ExperimentConfig& cfg, const SweepPoint& p) {
    EnvConfig env = cfg.env;
    env.geometry.bs_antennas = p.bs_antennas;
    env.geometry.irs_elements = p.irs_elements;
    env.fading.carrier_hz = p.carrier_hz;
    env.fading.rcs = p.rcs;
    if (p.rician) {
        env.fading.rician_bs_irs = *p.rician;
        env.fading.rician_irs_user = *p.rician;
        env.fading.rician_irs_target = *p.rician;
    }
    env.sdma = p.scheme == "sdma";
    env.geometry.bs_spacing = cfg.bs_spacing.meters(p.carrier_hz);
    env.geometry.irs_spacing = cfg.irs_spacing.meters(p.carrier_hz);
    env.geometry.user_spacing = cfg.user_spacing.meters(p.carrier_hz);
    env.validate();
    return env;
}

std::vector<RunSpec> enumerate_runs(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<int> ms = cfg.sweep.bs_antennas.empty()
                                    ? std::vector<int>{cfg.env.geometry.bs_antennas}
                                    : cfg.sweep.bs_antennas;
    const std::vector<int> ns = cfg.sweep.irs_elements.empty()
                                    ? std::vector<int>{cfg.env.geometry.irs_elements}
                                    : cfg.sweep.irs_elements;
    const std::vector<double> fs = cfg.sweep.carrier_hz.empty()
                                       ? std::vector<double>{cfg.env.fading.carrier_hz}
                                       : cfg.sweep.carrier_hz;
    const std::vector<double> rcss =
        cfg.sweep.rcs.empty() ? std::vector<double>{cfg.env.fading.rcs} : cfg.sweep.rcs;
    std::vector<std::optional<double>> ks;
    if (cfg.sweep.rician.empty()) ks.push_back(std::nullopt);
    else
        for (double k : cfg.sweep.rician) ks.emplace_back(k);

    std::vector<RunSpec> runs;
    for (int m : ms)
        for (int n : ns)
            for (double f : fs)
                for (double rcs : rcss)
                    for (const auto& k : ks)
                        for (const auto& scheme : cfg.schemes)
                            for (const auto& policy : cfg.policies)
                                for (std::uint64_t seed : cfg.seeds) {
                                    RunSpec r;
                                    r.point = {m, n, f, rcs, k, scheme};
                                    r.policy = policy;
                                    r.seed = seed;
                                    r.trace_file = "trace_" + r.point.tag() + "_" + policy +
                                                   "_s" + std::to_string(seed) + ".csv";
                                    runs.push_back(std::move(r));
                                }
    return runs;
}

TrainingTrace run_single(const ExperimentConfig& cfg, const RunSpec& spec) {
    Environment env(resolve_env(cfg, spec.point));
    if (spec.policy == "ppo") {
        PpoLearner learner(env.state_dim(), env.action_dim(), cfg.ppo,
                           learner_seed(spec.seed));
        return train(env, learner, spec.seed);
    }
    BaselineConfig bc = cfg.baseline;
    bc.kind = spec.policy == "greedy" ? BaselineKind::greedy : BaselineKind::random;
    return run_baseline(env, bc, spec.seed);
}

void write_trace_csv(const TrainingTrace& trace, const std::string& policy, std::ostream& out) {
    out.precision(17);
    out << "episode,mean_reward,mean_ee,mean_sum_rate,mean_echo_snr_db,violation_fraction,"
           "policy\n";
    for (const auto& r : trace.rows)
        out << r.episode << ',' << r.mean_reward << ',' << r.mean_ee << ',' << r.mean_sum_rate
            << ',' << r.mean_echo_snr_db << ',' << r.violation_fraction << ',' << policy << '\n';
}

TrainingTrace read_trace_csv(std::istream& in) {
    TrainingTrace trace;
    std::string line;
    if (!std::getline(in, line) || line.rfind("episode,", 0) != 0)
        throw std::runtime_error("read_trace_csv: missing header row");
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        std::vector<std::string> cols;
        while (std::getline(fields, field, ',')) cols.push_back(field);
        if (cols.size() != 7)
            throw std::runtime_error("read_trace_csv: row " + std::to_string(number) +
                                     " does not have 7 columns");
        try {
            TraceRow row;
            row.episode = std::stoi(cols[0]);
            row.mean_reward = std::stod(cols[1]);
            row.mean_ee = std::stod(cols[2]);
            row.mean_sum_rate = std::stod(cols[3]);
            row.mean_echo_snr_db = std::stod(cols[4]);
            row.violation_fraction = std::stod(cols[5]);
            trace.rows.push_back(row);
        } catch (const std::exception&) {
            throw std::runtime_error("read_trace_csv: malformed row " + std::to_string(number));
        }
    }
    if (trace.rows.empty()) throw std::runtime_error("read_trace_csv: no data rows");
    return trace;
}

double converged_mean(const std::vector<double>& series) {
    if (series.empty()) throw std::invalid_argument("converged_mean: empty series");
    const std::size_t tail = std::max<std::size_t>(1, series.size() / 10);
    double sum = 0.0;
    for (std::size_t i = series.size() - tail; i < series.size(); ++i) sum += series[i];
    return sum / static_cast<double>(tail);
}

namespace {

void fill_converged(RunRecord& rec, const TrainingTrace& trace) {
    std::vector<double> ee, rate, echo, viol;
    ee.reserve(trace.rows.size());
    for (const auto& row : trace.rows) {
        ee.push_back(row.mean_ee);
        rate.push_back(row.mean_sum_rate);
        echo.push_back(row.mean_echo_snr_db);
        viol.push_back(row.violation_fraction);
    }
    rec.converged_ee = converged_mean(ee);
    rec.converged_sum_rate = converged_mean(rate);
    rec.converged_echo_snr_db = converged_mean(echo);
    rec.converged_violation_fraction = converged_mean(viol);
}

RunRecord execute_run(const ExperimentConfig& cfg, const RunSpec& spec,
                      const std::filesystem::path& out_dir) {
    RunRecord rec;
    rec.spec = spec;
    try {
        const TrainingTrace trace = run_single(cfg, spec);
        fill_converged(rec, trace);
        std::ofstream out(out_dir / spec.trace_file);
        if (!out) throw std::runtime_error("cannot open " + spec.trace_file);
        write_trace_csv(trace, spec.policy, out);
        if (!out) throw std::runtime_error("write failed for " + spec.trace_file);
    } catch (const std::exception& e) {
        rec.status = std::string("error: ") + e.what();
    }
    return rec;
}

void write_runs_csv(const std::vector<RunRecord>& records, std::ostream& out) {
    out.precision(17);
    out << "M,N,f_c_hz,rcs,rician,scheme,policy,seed,status,trace_file,converged_ee,"
           "converged_sum_rate,converged_echo_snr_db,converged_violation_fraction\n";
    for (const auto& r : records) {
        out << r.spec.point.bs_antennas << ',' << r.spec.point.irs_elements << ','
            << r.spec.point.carrier_hz << ',' << r.spec.point.rcs << ',';
        if (r.spec.point.rician) out << *r.spec.point.rician;
        else out << "base";
        out << ',' << r.spec.point.scheme << ',' << r.spec.policy << ',' << r.spec.seed << ','
            << sanitize(r.status) << ',' << r.spec.trace_file << ',';
        if (r.status == "ok")
            out << r.converged_ee << ',' << r.converged_sum_rate << ','
                << r.converged_echo_snr_db << ',' << r.converged_violation_fraction;
        else out << ",,,";
        out << '\n';
    }
}

struct GroupStats {
    std::vector<double> ee, rate, echo, viol;
    int failed = 0;
};

using GroupKey = std::string;  // point tag + policy, order-preserving via first index

void write_summary_csv(const std::vector<RunRecord>& records, std::ostream& out) {
    std::vector<GroupKey> order;
    std::map<GroupKey, GroupStats> groups;
    std::map<GroupKey, const RunRecord*> sample;
    for (const auto& r : records) {
        const GroupKey key = r.spec.point.tag() + "|" + r.spec.policy;
        if (!groups.count(key)) order.push_back(key);
        auto& g = groups[key];
        sample.emplace(key, &r);
        if (r.status == "ok") {
            g.ee.push_back(r.converged_ee);
            g.rate.push_back(r.converged_sum_rate);
            g.echo.push_back(r.converged_echo_snr_db);
            g.viol.push_back(r.converged_violation_fraction);
        } else {
            ++g.failed;
        }
    }
    out.precision(17);
    out << "M,N,f_c_hz,rcs,rician,scheme,policy,seeds_ok,seeds_failed,mean_converged_ee,"
           "std_converged_ee,mean_sum_rate,std_sum_rate,mean_echo_snr_db,std_echo_snr_db,"
           "mean_violation_fraction,std_violation_fraction\n";
    for (const auto& key : order) {
        const auto& g = groups[key];
        const RunRecord& r = *sample[key];
        out << r.spec.point.bs_antennas << ',' << r.spec.point.irs_elements << ','
            << r.spec.point.carrier_hz << ',' << r.spec.point.rcs << ',';
        if (r.spec.point.rician) out << *r.spec.point.rician;
        else out << "base";
        out << ',' << r.spec.point.scheme << ',' << r.spec.policy << ',' << g.ee.size() << ','
            << g.failed;
        if (g.ee.empty()) {
            out << ",,,,,,,,\n";
            continue;
        }
        out << ',' << series_mean(g.ee) << ',' << series_stddev(g.ee) << ','
            << series_mean(g.rate) << ',' << series_stddev(g.rate) << ',' << series_mean(g.echo)
            << ',' << series_stddev(g.echo) << ',' << series_mean(g.viol) << ','
            << series_stddev(g.viol) << '\n';
    }
}

// Per-seed converged-EE ratios between two values of one swept axis, all
// other coordinates fixed.  Paired by seed, so shared channel noise cancels.
void write_ratio_rows(const std::vector<RunRecord>& records, const ExperimentConfig& cfg,
                      std::ostream& out) {
    out << "axis,from,to,M,N,f_c_hz,rcs,rician,scheme,policy,seeds,mean_ee_ratio,half_width\n";
    out.precision(17);
    auto find_ee = [&records](const SweepPoint& p, const std::string& policy,
                              std::uint64_t seed) -> std::optional<double> {
        for (const auto& r : records)
            if (r.status == "ok" && r.spec.policy == policy && r.spec.seed == seed &&
                r.spec.point.tag() == p.tag())
                return r.converged_ee;
        return std::nullopt;
    };
    auto emit = [&](const char* axis, double from_v, double to_v, const SweepPoint& from_p,
                    const SweepPoint& to_p, const std::string& policy) {
        std::vector<double> ratios;
        for (std::uint64_t seed : cfg.seeds) {
            const auto a = find_ee(from_p, policy, seed);
            const auto b = find_ee(to_p, policy, seed);
            if (a && b && *a != 0.0) ratios.push_back(*b / *a);
        }
        if (ratios.empty()) return;
        const double half_width =
            1.96 * series_stddev(ratios) / std::sqrt(static_cast<double>(ratios.size()));
        out << axis << ',' << from_v << ',' << to_v << ',' << to_p.bs_antennas << ','
            << to_p.irs_elements << ',' << to_p.carrier_hz << ',' << to_p.rcs << ',';
        if (to_p.rician) out << *to_p.rician;
        else out << "base";
        out << ',' << to_p.scheme << ',' << policy << ',' << ratios.size() << ','
            << series_mean(ratios) << ',' << half_width << '\n';
    };

    // Enumerate the fixed coordinates the same way the runs were generated.
    const std::vector<int> ms = cfg.sweep.bs_antennas.empty()
                                    ? std::vector<int>{cfg.env.geometry.bs_antennas}
                                    : cfg.sweep.bs_antennas;
    const std::vector<int> ns = cfg.sweep.irs_elements.empty()
                                    ? std::vector<int>{cfg.env.geometry.irs_elements}
                                    : cfg.sweep.irs_elements;
    const std::vector<double> fs = cfg.sweep.carrier_hz.empty()
                                       ? std::vector<double>{cfg.env.fading.carrier_hz}
                                       : cfg.sweep.carrier_hz;
    const std::vector<double> rcss =
        cfg.sweep.rcs.empty() ? std::vector<double>{cfg.env.fading.rcs} : cfg.sweep.rcs;
    std::vector<std::optional<double>> ks;
    if (cfg.sweep.rician.empty()) ks.push_back(std::nullopt);
    else
        for (double k : cfg.sweep.rician) ks.emplace_back(k);

    for (int m : ms)
        for (int n : ns)
            for (double rcs : rcss)
                for (const auto& k : ks)
                    for (const auto& scheme : cfg.schemes)
                        for (const auto& policy : cfg.policies)
                            for (std::size_t i = 0; i < fs.size(); ++i)
                                for (std::size_t j = i + 1; j < fs.size(); ++j) {
                                    SweepPoint a{m, n, fs[i], rcs, k, scheme};
                                    SweepPoint b{m, n, fs[j], rcs, k, scheme};
                                    emit("f_c", fs[i], fs[j], a, b, policy);
                                }
    for (int m : ms)
        for (int n : ns)
            for (double f : fs)
                for (const auto& k : ks)
                    for (const auto& scheme : cfg.schemes)
                        for (const auto& policy : cfg.policies)
                            for (std::size_t i = 0; i < rcss.size(); ++i)
                                for (std::size_t j = i + 1; j < rcss.size(); ++j) {
                                    SweepPoint a{m, n, f, rcss[i], k, scheme};
                                    SweepPoint b{m, n, f, rcss[j], k, scheme};
                                    emit("rcs", rcss[i], rcss[j], a, b, policy);
                                }
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
    cfg.validate();
    if (jobs < 1) throw std::invalid_argument("run_experiment: jobs must be >= 1");
    const std::filesystem::path out_dir(cfg.output_dir);
    std::filesystem::create_directories(out_dir);

    const std::vector<RunSpec> runs = enumerate_runs(cfg);
    ExperimentResult result;
    result.records.resize(runs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            result.records[i] = execute_run(cfg, runs[i], out_dir);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n = std::min<int>(jobs, static_cast<int>(runs.size()));
        pool.reserve(n);
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    {
        std::ofstream out(out_dir / "runs.csv");
        write_runs_csv(result.records, out);
    }
    {
        std::ofstream out(out_dir / "summary.csv");
        write_summary_csv(result.records, out);
    }
    {
        std::ofstream out(out_dir / "ratios.csv");
        write_ratio_rows(result.records, cfg, out);
    }
    {
        std::ofstream out(out_dir / "manifest.txt");
        write_config(cfg, out);
    }
    return result;
}

ExperimentResult summarize_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::filesystem::path out_dir(cfg.output_dir);
    ExperimentResult result;
    for (const RunSpec& spec : enumerate_runs(cfg)) {
        RunRecord rec;
        rec.spec = spec;
        std::ifstream in(out_dir / spec.trace_file);
        if (!in) {
            rec.status = "error: missing trace file " + spec.trace_file;
        } else {
            try {
                fill_converged(rec, read_trace_csv(in));
            } catch (const std::exception& e) {
                rec.status = std::string("error: ") + e.what();
            }
        }
        result.records.push_back(std::move(rec));
    }
    {
        std::ofstream out(out_dir / "runs.csv");
        write_runs_csv(result.records, out);
    }
    {
        std::ofstream out(out_dir / "summary.csv");
        write_summary_csv(result.records, out);
    }
    {
        std::ofstream out(out_dir / "ratios.csv");
        write_ratio_rows(result.records, cfg, out);
    }
    return result;
}

} // namespace rsisac
