#include "qsld/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qsld/dephasing.hpp"
#include "qsld/qsl.hpp"

namespace qsld {

namespace {

struct Row {
    std::string text;
    bool converged{true};
    bool skip{false};
    std::string warning;
};

Row data_row(std::string text, bool converged) {
    Row r;
    r.text = std::move(text);
    r.converged = converged;
    return r;
}

// Evaluates cell(0..n-1) on `threads` workers; results keep the index order.
std::vector<Row> parallel_rows(std::size_t n, int threads, const std::function<Row(std::size_t)>& cell) {
    std::vector<Row> out(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = cell(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n < 2) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::string join(std::initializer_list<std::string> fields) {
    std::string s;
    for (const auto& f : fields) {
        if (!s.empty()) s += ',';
        s += f;
    }
    return s;
}

Table collect(std::vector<std::string> header, std::vector<Row> rows) {
    Table t;
    t.header = std::move(header);
    for (auto& r : rows) {
        if (!r.warning.empty()) t.warnings.push_back(std::move(r.warning));
        if (r.skip) continue;
        t.rows.push_back(std::move(r.text));
        t.converged.push_back(r.converged);
    }
    return t;
}

struct Pair {
    double s;
    ThermalEnvironment env;
};

std::vector<Pair> pairs_of(const SweepConfig& c) {
    std::vector<Pair> p;
    for (double s : sweep_order(c.s_values)) {
        for (const auto& env : sweep_order(c.temperatures)) p.push_back({s, env});
    }
    return p;
}

DephasingModel model_of(const Pair& p, double omega_0) {
    return DephasingModel(OhmicSpectralDensity(p.s), p.env, omega_0);
}

Table run_dephasing(const SweepConfig& c) {
    const auto pairs = pairs_of(c);
    const auto ts = c.t_grid.values();
    auto rows = parallel_rows(pairs.size() * ts.size(), c.threads, [&](std::size_t i) {
        const Pair& p = pairs[i / ts.size()];
        const double t = ts[i % ts.size()];
        const DecayEvaluation e = evaluate(model_of(p, c.omega_0), t, c.tol);
        return data_row(join({format_real(p.s), p.env.spec(), format_real(t), format_real(e.D),
                              format_real(e.gamma), format_real(e.F)}),
                        e.converged);
    });
    return collect({"s", "temperature", "t", "D", "gamma", "F"}, std::move(rows));
}

Table run_steady(const SweepConfig& c) {
    const auto pairs = pairs_of(c);
    auto rows = parallel_rows(pairs.size(), c.threads, [&](std::size_t i) {
        const SteadyFactor f = steady_factor(model_of(pairs[i], c.omega_0), c.tol);
        return data_row(join({format_real(pairs[i].s), pairs[i].env.spec(), format_real(f.value),
                              f.divergent ? "1" : "0"}),
                        f.converged);
    });
    return collect({"s", "temperature", "F_inf", "divergent"}, std::move(rows));
}

Table run_nonmarkov(const SweepConfig& c) {
    const auto pairs = pairs_of(c);
    auto rows = parallel_rows(pairs.size(), c.threads, [&](std::size_t i) {
        const NonMarkovianity n = non_markovianity(model_of(pairs[i], c.omega_0), c.nm_t_max, c.tol, c.nm_scan_points);
        Row r = data_row(join({format_real(pairs[i].s), pairs[i].env.spec(), format_real(n.N),
                               std::to_string(n.negative_intervals.size())}),
                         n.converged);
        if (n.resolution_warning) {
            r.warning = "nonmarkov: s=" + format_real(pairs[i].s) + " " + pairs[i].env.spec() +
                        ": a negative interval is narrower than two scan pitches";
        }
        return r;
    });
    return collect({"s", "temperature", "N", "n_intervals"}, std::move(rows));
}

Row qsl_row(const DephasingModel& m, double tau, const numerics::Tolerance& tol,
            const std::function<std::string(const QslEvaluation&)>& format) {
    try {
        const QslEvaluation q = qsl_time(m, tau, tol);
        return data_row(format(q), q.converged);
    } catch (const DegenerateEvolution& e) {
        Row r;
        r.skip = true;
        r.warning = std::string("qsl: skipped row: ") + e.what();
        return r;
    }
}

Table run_qsl_tau(const SweepConfig& c) {
    const auto pairs = pairs_of(c);
    const auto taus = c.tau_grid.values();
    auto rows = parallel_rows(pairs.size() * taus.size(), c.threads, [&](std::size_t i) {
        const Pair& p = pairs[i / taus.size()];
        const double tau = taus[i % taus.size()];
        return qsl_row(model_of(p, c.omega_0), tau, c.tol, [&](const QslEvaluation& q) {
            return join({format_real(p.s), p.env.spec(), format_real(tau), format_real(q.geodesic),
                         format_real(q.path_length), format_real(q.tau_qsl), format_real(q.ratio)});
        });
    });
    return collect({"s", "temperature", "tau", "geodesic", "path_length", "tau_qsl", "ratio"}, std::move(rows));
}

Table run_qsl_interplay(const SweepConfig& c) {
    const auto pairs = pairs_of(c);
    auto rows = parallel_rows(pairs.size(), c.threads, [&](std::size_t i) {
        const Pair& p = pairs[i];
        return qsl_row(model_of(p, c.omega_0), c.tau, c.tol, [&](const QslEvaluation& q) {
            return join({format_real(p.s), format_real(p.env.nominal_temperature()), format_real(q.ratio)});
        });
    });
    return collect({"s", "T", "ratio"}, std::move(rows));
}

Table run_geospeed(const SweepConfig& c) {
    const auto pairs = pairs_of(c);
    const auto ts = c.t_grid.values();
    auto rows = parallel_rows(pairs.size() * ts.size(), c.threads, [&](std::size_t i) {
        const Pair& p = pairs[i / ts.size()];
        const double t = ts[i % ts.size()];
        const DecayEvaluation e = evaluate(model_of(p, c.omega_0), t, c.tol);
        return data_row(join({format_real(p.s), p.env.spec(), format_real(t),
                              format_real(geodesic_from(e, c.omega_0, 1.0)), format_real(speed_from(e, c.omega_0, 1.0))}),
                        e.converged);
    });
    return collect({"s", "temperature", "t", "geodesic_scaled", "speed_scaled"}, std::move(rows));
}

Table run_critical(const SweepConfig& c) {
    const auto envs = sweep_order(c.temperatures);
    auto rows = parallel_rows(envs.size(), c.threads, [&](std::size_t i) {
        try {
            const CriticalOhmicity r = critical_ohmicity(envs[i], c.bracket_lo, c.bracket_hi, c.tol);
            return data_row(join({envs[i].spec(), format_real(r.s_cri), format_real(r.bracket_width)}), r.converged);
        } catch (const BracketError& e) {
            const std::string nan = format_real(std::nan(""));
            Row r = data_row(join({envs[i].spec(), nan, nan}), false);
            r.warning = "critical: " + envs[i].spec() + ": " + e.what();
            return r;
        }
    });
    return collect({"temperature", "s_cri", "bracket_width"}, std::move(rows));
}

} // namespace

std::optional<Command> parse_command(const std::string& name) {
    for (Command c : {Command::dephasing, Command::steady, Command::nonmarkov, Command::qsl, Command::geospeed,
                      Command::critical}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

std::string to_string(Command c) {
    switch (c) {
    case Command::dephasing: return "dephasing";
    case Command::steady: return "steady";
    case Command::nonmarkov: return "nonmarkov";
    case Command::qsl: return "qsl";
    case Command::geospeed: return "geospeed";
    case Command::critical: return "critical";
    }
    return "?";
}

std::vector<double> LinearGrid::values() const {
    validate("grid");
    std::vector<double> out(static_cast<std::size_t>(points));
    // Snap to 12 significant digits so that grid points such as s = 1 or 2 land exactly
    // on the branch boundaries instead of one ulp beside them.
    char buf[32];
    for (int i = 0; i < points; ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", min + (max - min) * i / (points - 1));
        out[static_cast<std::size_t>(i)] = std::strtod(buf, nullptr);
    }
    out.front() = min;
    out.back() = max;
    return out;
}

void LinearGrid::validate(const std::string& name) const {
    if (points < 2) throw std::invalid_argument(name + ": need at least 2 points");
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
        throw std::invalid_argument(name + ": need finite min < max");
    }
}

void SweepConfig::validate() const {
    if (s_values.empty()) throw std::invalid_argument("s list is empty");
    for (double s : s_values) {
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("s values must be finite and > 0");
    }
    if (temperatures.empty()) throw std::invalid_argument("temperature list is empty");
    if (!(omega_0 >= 0.0) || !std::isfinite(omega_0)) throw std::invalid_argument("omega0 must be finite and >= 0");
    t_grid.validate("t grid");
    if (t_grid.min < 0.0) throw std::invalid_argument("t grid: times must be >= 0");
    tau_grid.validate("tau grid");
    if (!(tau_grid.min > 0.0)) throw std::invalid_argument("tau grid: tau must be > 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be finite and > 0");
    if (!(nm_t_max > 0.0)) throw std::invalid_argument("non-Markovianity horizon must be > 0");
    if (nm_scan_points < 2) throw std::invalid_argument("scan points must be >= 2");
    if (!(bracket_lo > 0.0) || !(bracket_lo < bracket_hi)) {
        throw std::invalid_argument("critical bracket: need 0 < lo < hi");
    }
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    tol.validate();
}

LinearGrid default_s_grid() { return {0.1, 8.0, 80}; }

LinearGrid default_interplay_temperatures() { return {0.0, 3.0, 61}; }

std::vector<ThermalEnvironment> temperatures_from_grid(const LinearGrid& g) {
    std::vector<ThermalEnvironment> out;
    for (double T : g.values()) out.push_back(T == 0.0 ? ThermalEnvironment::zero() : ThermalEnvironment::finite(T));
    return out;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

bool Table::all_converged() const {
    return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

std::vector<double> sweep_order(std::vector<double> s_values) {
    std::sort(s_values.begin(), s_values.end());
    s_values.erase(std::unique(s_values.begin(), s_values.end()), s_values.end());
    return s_values;
}

std::vector<ThermalEnvironment> sweep_order(std::vector<ThermalEnvironment> temperatures) {
    auto key = [](const ThermalEnvironment& e) { return std::make_pair(e.nominal_temperature(), e.regime()); };
    std::sort(temperatures.begin(), temperatures.end(),
              [&](const ThermalEnvironment& a, const ThermalEnvironment& b) { return key(a) < key(b); });
    temperatures.erase(std::unique(temperatures.begin(), temperatures.end(),
                                   [&](const ThermalEnvironment& a, const ThermalEnvironment& b) {
                                       return key(a) == key(b);
                                   }),
                       temperatures.end());
    return temperatures;
}

Table run_command(Command cmd, const SweepConfig& config) {
    config.validate();
    switch (cmd) {
    case Command::dephasing: return run_dephasing(config);
    case Command::steady: return run_steady(config);
    case Command::nonmarkov: return run_nonmarkov(config);
    case Command::qsl: return config.qsl_mode == QslMode::tau_sweep ? run_qsl_tau(config) : run_qsl_interplay(config);
    case Command::geospeed: return run_geospeed(config);
    case Command::critical: return run_critical(config);
    }
    throw std::invalid_argument("unknown command");
}

void write_csv(const Table& table, std::ostream& out) {
    const bool flag = !table.all_converged();
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    if (flag) out << ",converged";
    out << '\n';
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out << table.rows[i];
        if (flag) out << (table.converged[i] ? ",1" : ",0");
        out << '\n';
    }
}

void write_output(const Table& table, const std::string& path) {
    if (path == "-") {
        write_csv(table, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    write_csv(table, f);
    f.close();
    if (!f) throw std::runtime_error("failed writing output file '" + path + "'");
}

int exit_status(const Table& table) { return table.all_converged() ? 0 : 2; }

} // namespace qsld
