// qsl_dephasing: CSV sweeps of the dephasing qubit (decay, steady state,
// non-Markovianity, QSL ratio, geodesic/speed and critical Ohmicity).

#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "qsld/sweep.hpp"

namespace {

using qsld::ThermalEnvironment;

// Trims blanks around list items and drops empty ones.
std::vector<std::string> trimmed(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

double parse_real(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw std::invalid_argument("bad " + what + " value '" + text + "'");
    return v;
}

// Accepts the regime specs (zero, t:<T>, hight:<w>) and bare numbers (0 is the zero regime).
ThermalEnvironment parse_temperature(const std::string& text) {
    if (text == "zero" || text.find(':') != std::string::npos) return ThermalEnvironment::parse(text);
    const double T = parse_real(text, "temperature");
    return T == 0.0 ? ThermalEnvironment::zero() : ThermalEnvironment::finite(T);
}

struct Flags {
    std::string command;
    std::string s;
    std::vector<std::string> s_list;
    qsld::LinearGrid s_grid = qsld::default_s_grid();
    std::string temp;
    std::vector<std::string> temp_list;
    qsld::LinearGrid temp_grid = qsld::default_interplay_temperatures();
    std::string mode{"tau"};
};

} // namespace

int main(int argc, char** argv) {
    qsld::SweepConfig cfg;
    Flags f;

    CLI::App app{"Dephasing qubit: decay, non-Markovianity and quantum speed limit sweeps"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.add_option("command", f.command, "dephasing | steady | nonmarkov | qsl | geospeed | critical")
        ->required()
        ->check(CLI::IsMember({"dephasing", "steady", "nonmarkov", "qsl", "geospeed", "critical"}));

    auto* o_s = app.add_option("--s", f.s, "single Ohmicity value");
    auto* o_sl = app.add_option("--s-list", f.s_list, "comma-separated Ohmicity values")->delimiter(',');
    auto* o_smin = app.add_option("--s-min", f.s_grid.min, "Ohmicity grid start");
    auto* o_smax = app.add_option("--s-max", f.s_grid.max, "Ohmicity grid end");
    auto* o_spts = app.add_option("--s-points", f.s_grid.points, "Ohmicity grid points");
    auto* o_t = app.add_option("--temp", f.temp, "temperature spec: zero, t:<T>, hight:<omega_T> or a number");
    auto* o_tl = app.add_option("--temp-list", f.temp_list, "comma-separated temperature specs")->delimiter(',');
    auto* o_tmin = app.add_option("--temp-min", f.temp_grid.min, "temperature grid start (interplay)");
    auto* o_tmax = app.add_option("--temp-max", f.temp_grid.max, "temperature grid end (interplay)");
    auto* o_tpts = app.add_option("--temp-points", f.temp_grid.points, "temperature grid points (interplay)");
    o_s->excludes(o_sl);
    o_t->excludes(o_tl);

    app.add_option("--omega0", cfg.omega_0, "qubit transition frequency")->capture_default_str();
    app.add_option("--t-min", cfg.t_grid.min, "time grid start")->capture_default_str();
    app.add_option("--t-max", cfg.t_grid.max, "time grid end")->capture_default_str();
    app.add_option("--t-points", cfg.t_grid.points, "time grid points")->capture_default_str();
    app.add_option("--tau-min", cfg.tau_grid.min, "evolution-time grid start (qsl)")->capture_default_str();
    app.add_option("--tau-max", cfg.tau_grid.max, "evolution-time grid end (qsl)")->capture_default_str();
    app.add_option("--tau-points", cfg.tau_grid.points, "evolution-time grid points (qsl)")->capture_default_str();
    app.add_option("--tau", cfg.tau, "evolution time of the interplay mode")->capture_default_str();
    app.add_option("--mode", f.mode, "qsl mode")->check(CLI::IsMember({"tau", "interplay"}))->capture_default_str();
    app.add_option("--nm-tmax", cfg.nm_t_max, "non-Markovianity time horizon")->capture_default_str();
    app.add_option("--scan-points", cfg.nm_scan_points, "sign-change scan points")->capture_default_str();
    app.add_option("--bracket-lo", cfg.bracket_lo, "critical Ohmicity bracket start")->capture_default_str();
    app.add_option("--bracket-hi", cfg.bracket_hi, "critical Ohmicity bracket end")->capture_default_str();
    app.add_option("--tol-abs", cfg.tol.abs_tol, "absolute tolerance")->capture_default_str();
    app.add_option("--tol-rel", cfg.tol.rel_tol, "relative tolerance")->capture_default_str();
    app.add_option("--max-evals", cfg.tol.max_evals, "quadrature refinement budget")->capture_default_str();
    app.add_option("--out", cfg.output_path, "output CSV path, - for stdout")->capture_default_str();
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: hardware concurrency)")
        ->envname("QSL_DEPHASING_THREADS");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const auto cmd = *qsld::parse_command(f.command);
    cfg.qsl_mode = f.mode == "interplay" ? qsld::QslMode::interplay : qsld::QslMode::tau_sweep;
    const bool grid_default = cmd == qsld::Command::steady || cmd == qsld::Command::nonmarkov ||
                              (cmd == qsld::Command::qsl && cfg.qsl_mode == qsld::QslMode::interplay);

    try {
        if (*o_s) {
            cfg.s_values = {parse_real(f.s, "s")};
        } else if (*o_sl) {
            cfg.s_values.clear();
            for (const auto& item : trimmed(f.s_list)) cfg.s_values.push_back(parse_real(item, "s"));
        } else if (*o_smin || *o_smax || *o_spts || grid_default) {
            cfg.s_values = f.s_grid.values();
        }

        if (*o_t) {
            cfg.temperatures = {parse_temperature(f.temp)};
        } else if (*o_tl) {
            cfg.temperatures.clear();
            for (const auto& item : trimmed(f.temp_list)) cfg.temperatures.push_back(parse_temperature(item));
        } else if (*o_tmin || *o_tmax || *o_tpts || (cmd == qsld::Command::qsl && cfg.qsl_mode == qsld::QslMode::interplay)) {
            cfg.temperatures = qsld::temperatures_from_grid(f.temp_grid);
        } else if (cmd == qsld::Command::critical) {
            cfg.temperatures.push_back(ThermalEnvironment::high_t_limit(1.0));
        }

        cfg.threads = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "qsl_dephasing: configuration error: " << e.what() << '\n';
        return 1;
    }

    qsld::Table table;
    try {
        table = qsld::run_command(cmd, cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "qsl_dephasing: configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "qsl_dephasing: " << e.what() << '\n';
        return 1;
    }
    for (const auto& w : table.warnings) std::cerr << "qsl_dephasing: warning: " << w << '\n';

    try {
        qsld::write_output(table, cfg.output_path);
    } catch (const std::exception& e) {
        std::cerr << "qsl_dephasing: " << e.what() << '\n';
        return 1;
    }
    const int status = qsld::exit_status(table);
    if (status == 2) std::cerr << "qsl_dephasing: some rows did not converge (see the converged column)\n";
    return status;
}
