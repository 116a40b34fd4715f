// sweep.hpp: parameter sweeps behind the command-line tool and their CSV encoding.
//
// Each command expands its configuration into independent cells, evaluates them on a
// small worker pool and returns the rows in sweep order, so the output does not depend
// on the number of workers.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsld/model.hpp"
#include "qsld/numerics/tolerance.hpp"

namespace qsld {

enum class Command { dephasing, steady, nonmarkov, qsl, geospeed, critical };
enum class QslMode { tau_sweep, interplay };

std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command c);

// Inclusive linear grid: min, min + h, ..., max.
struct LinearGrid {
    double min{0.0};
    double max{1.0};
    int points{2};

    std::vector<double> values() const;
    void validate(const std::string& name) const;
};

struct SweepConfig {
    std::vector<double> s_values{1.0, 4.0};
    std::vector<ThermalEnvironment> temperatures{ThermalEnvironment::zero(), ThermalEnvironment::finite(0.5),
                                                 ThermalEnvironment::finite(1.0), ThermalEnvironment::finite(1.5)};
    double omega_0{1.0};
    LinearGrid t_grid{0.0, 10.0, 400};
    LinearGrid tau_grid{0.025, 10.0, 400};
    QslMode qsl_mode{QslMode::tau_sweep};
    double tau{10.0};                // fixed evolution time of the interplay mode
    double nm_t_max{200.0};          // non-Markovianity integration horizon
    int nm_scan_points{2000};
    double bracket_lo{1.5};          // critical Ohmicity bracket
    double bracket_hi{4.0};
    numerics::Tolerance tol{};
    std::string output_path{"-"};    // "-" is stdout
    int threads{1};

    // Throws std::invalid_argument on empty lists, bad grids or bad numbers.
    void validate() const;
};

// s grid of Figures 3 and 6: 0.1, 0.2, ..., 8.
LinearGrid default_s_grid();
// Temperatures of the interplay surface: 0, 0.05, ..., 3 (T = 0 is the zero regime).
LinearGrid default_interplay_temperatures();
std::vector<ThermalEnvironment> temperatures_from_grid(const LinearGrid& g);

// "%.8e" with the C locale.
std::string format_real(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::string> rows;  // comma-joined, without the converged column
    std::vector<bool> converged;    // one per row
    std::vector<std::string> warnings;

    bool all_converged() const;
};

// Sorted ascending and de-duplicated; temperatures by (nominal temperature, regime).
std::vector<double> sweep_order(std::vector<double> s_values);
std::vector<ThermalEnvironment> sweep_order(std::vector<ThermalEnvironment> temperatures);

// Throws std::invalid_argument when the configuration is invalid.
Table run_command(Command cmd, const SweepConfig& config);

// A `converged` column is appended to every row when any row failed.
void write_csv(const Table& table, std::ostream& out);

// Writes to config.output_path (or stdout); throws std::runtime_error when unwritable.
void write_output(const Table& table, const std::string& path);

// 0 on full success, 2 when some rows did not converge.
int exit_status(const Table& table);

} // namespace qsld
