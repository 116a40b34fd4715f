// dephasing.hpp: decay function D(t), dephasing rate gamma(t), dephasing factor F(t),
// steady-state factor F(inf), critical Ohmicity and the onset of negative rates.
//
// Zero-temperature and high-temperature-limit regimes use closed forms; the finite
// temperature regime integrates the coth-weighted spectral kernels numerically.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "qsld/model.hpp"
#include "qsld/numerics/tolerance.hpp"

namespace qsld {

using numerics::Tolerance;

struct DecayEvaluation {
    double t{0.0};
    double D{0.0};
    double gamma{0.0};
    double F{1.0};
    bool converged{true};
};

struct SteadyFactor {
    double value{0.0};
    bool divergent{false};
    bool converged{true};
};

struct CriticalOhmicity {
    double s_cri{0.0};
    double bracket_width{0.0};
    bool converged{true};
};

// Quadrature did not reach the requested tolerance; carries the partial value.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial) : std::runtime_error(what), partial_(partial) {}
    double partial() const { return partial_; }

private:
    double partial_;
};

class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Strictly increasing time samples, linear or logarithmic.
struct TimeGrid {
    double t_min{0.01};
    double t_max{1000.0};
    int points{2400};
    bool log_spaced{true};

    std::vector<double> values() const;
};

// D, gamma and F at one time in a single pass. Never throws on non-convergence;
// check `converged` instead.
DecayEvaluation evaluate(const DephasingModel& model, double t, const Tolerance& tol = {});

double decay_function(const DephasingModel& model, double t, const Tolerance& tol = {});
double dephasing_rate(const DephasingModel& model, double t, const Tolerance& tol = {});
double dephasing_factor(const DephasingModel& model, double t, const Tolerance& tol = {});

// Rate only, without throwing; `converged` reports the quadrature status.
double dephasing_rate_checked(const DephasingModel& model, double t, const Tolerance& tol, bool& converged);

SteadyFactor steady_factor(const DephasingModel& model, const Tolerance& tol = {});

// Time grid used by the Markovianity predicate unless the caller passes one.
TimeGrid default_markovianity_grid();

// min over the grid of gamma(t) >= -tol.abs_tol.
bool is_markovian(const DephasingModel& model, const TimeGrid& grid, const Tolerance& tol, bool* converged = nullptr);

// Bisection in s on the Markovianity predicate until the bracket is <= 1e-3 wide.
// Throws BracketError when the predicate agrees at both ends.
CriticalOhmicity critical_ohmicity(const ThermalEnvironment& env, double s_lo, double s_hi,
                                   const Tolerance& tol = {},
                                   const TimeGrid& grid = default_markovianity_grid(),
                                   double omega_c = 1.0);

// First positive-to-negative crossing of gamma on (0, t_max]; |gamma| <= abs_tol counts as zero.
std::optional<double> first_negative_time(const DephasingModel& model, double t_max, const Tolerance& tol = {},
                                          int scan_points = 4000);

} // namespace qsld
