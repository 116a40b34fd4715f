#include "qsld/dephasing.hpp"

#include <cmath>
#include <complex>

#include "qsld/numerics/gamma.hpp"
#include "qsld/numerics/quadrature.hpp"
#include "qsld/numerics/roots.hpp"

namespace qsld {

namespace {

using cplx = std::complex<double>;
using numerics::gamma_fn;

constexpr double kSeriesBranch = 1e-6; // |s-1| or |s-2| below this uses series expansions

// exp(z) - 1 without cancellation for small |z|.
cplx expm1c(cplx z) {
    const double x = z.real();
    const double y = z.imag();
    const double half_sin = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin, std::exp(x) * std::sin(y)};
}

// (1 - exp(-delta u)) / delta, continuous through delta = 0.
cplx one_minus_exp_over(double delta, cplx u) {
    if (std::abs(delta) < kSeriesBranch) {
        return u - delta * u * u / 2.0 + delta * delta * u * u * u / 6.0;
    }
    return -expm1c(-delta * u) / delta;
}

// sin(delta theta) / delta, continuous through delta = 0.
double sin_over(double delta, double theta) {
    if (std::abs(delta) < kSeriesBranch) {
        const double a = delta * theta;
        return theta * (1.0 - a * a / 6.0);
    }
    return std::sin(delta * theta) / delta;
}

// Geometry of z = 1 - i omega_c t: log z = log r - i theta.
struct Polar {
    double log_r;
    double theta;
    cplx z;
    cplx log_z;
};

Polar polar_of(double omega_c, double t) {
    const double x = omega_c * t;
    const double log_r = 0.5 * std::log1p(x * x);
    const double theta = std::atan(x);
    return {log_r, theta, cplx(1.0, -x), cplx(log_r, -theta)};
}

double zero_t_decay(const OhmicSpectralDensity& sd, double t) {
    const Polar p = polar_of(sd.omega_c(), t);
    const double s = sd.s();
    return sd.coupling() * gamma_fn(s) * one_minus_exp_over(s - 1.0, p.log_z).real();
}

double zero_t_rate(const OhmicSpectralDensity& sd, double t) {
    const Polar p = polar_of(sd.omega_c(), t);
    const double s = sd.s();
    return sd.coupling() * sd.omega_c() * gamma_fn(s) * std::sin(s * p.theta) * std::exp(-s * p.log_r);
}

// Dimensionless alpha(t) of the high-temperature decay D = 2 omega_T alpha / omega_c.
double high_t_alpha(const OhmicSpectralDensity& sd, double t) {
    const Polar p = polar_of(sd.omega_c(), t);
    const double s = sd.s();
    if (std::abs(s - 1.0) < 0.5) {
        // 1 - Re z^(2-s) = Re[z (1 - z^(1-s))] since Re z = 1.
        return gamma_fn(s) / (s - 2.0) * (p.z * one_minus_exp_over(s - 1.0, p.log_z)).real();
    }
    return gamma_fn(s) / (s - 1.0) * one_minus_exp_over(s - 2.0, p.log_z).real();
}

double high_t_decay(const OhmicSpectralDensity& sd, double omega_T, double t) {
    return sd.coupling() * 2.0 * omega_T / sd.omega_c() * high_t_alpha(sd, t);
}

double high_t_rate(const OhmicSpectralDensity& sd, double omega_T, double t) {
    const Polar p = polar_of(sd.omega_c(), t);
    const double s = sd.s();
    return sd.coupling() * 2.0 * omega_T * gamma_fn(s) * sin_over(s - 1.0, p.theta) *
           std::exp(-(s - 1.0) * p.log_r);
}

numerics::TailDecay tail_of(const OhmicSpectralDensity& sd) { return {sd.omega_c(), sd.s()}; }

// J(w) coth(w/2T) / w, written as eta x^(s-1) e^(-x) coth with x = w / omega_c.
struct ThermalWeight {
    double s_minus_one;
    double inv_wc;
    double eta;
    ThermalEnvironment env;

    explicit ThermalWeight(const DephasingModel& m)
        : s_minus_one(m.spectral.s() - 1.0), inv_wc(1.0 / m.spectral.omega_c()), eta(m.spectral.coupling()),
          env(m.environment) {}

    double operator()(double w) const {
        const double x = w * inv_wc;
        return eta * std::exp(s_minus_one * std::log(x) - x) * thermal_kernel(w, env);
    }
};

// Finite-temperature D and gamma from one vector-valued quadrature.
std::array<numerics::QuadratureResult, 2> finite_t_pair(const DephasingModel& m, double t, const Tolerance& tol) {
    const ThermalWeight weight(m);
    auto integrand = [&](double w) {
        const double base = weight(w);
        const double half = 0.5 * w * t;
        const double sh = std::sin(half);
        const double ch = std::cos(half);
        // 1 - cos(wt) = 2 sin^2(wt/2), sin(wt) = 2 sin(wt/2) cos(wt/2)
        return numerics::Values<2>{base * 2.0 * sh * sh / w, base * 2.0 * sh * ch};
    };
    return numerics::integrate_semi_infinite_n<2>(integrand, t, tol, tail_of(m.spectral));
}

numerics::QuadratureResult finite_t_rate(const DephasingModel& m, double t, const Tolerance& tol) {
    const ThermalWeight weight(m);
    auto integrand = [&](double w) { return weight(w) * std::sin(w * t); };
    return numerics::integrate_semi_infinite(integrand, t, tol, tail_of(m.spectral));
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("time must be finite and >= 0");
}

} // namespace

std::vector<double> TimeGrid::values() const {
    if (points < 2 || !(t_max > t_min) || (log_spaced && !(t_min > 0.0))) {
        throw std::invalid_argument("TimeGrid: need points >= 2 and t_min < t_max (t_min > 0 when log-spaced)");
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        out[static_cast<std::size_t>(i)] =
            log_spaced ? t_min * std::pow(t_max / t_min, f) : t_min + (t_max - t_min) * f;
    }
    out.back() = t_max;
    return out;
}

DecayEvaluation evaluate(const DephasingModel& model, double t, const Tolerance& tol) {
    require_time(t);
    DecayEvaluation out;
    out.t = t;
    if (t == 0.0 || model.spectral.coupling() == 0.0) return out;

    const auto& sd = model.spectral;
    const auto& env = model.environment;
    switch (env.regime()) {
    case Regime::zero:
        out.D = zero_t_decay(sd, t);
        out.gamma = zero_t_rate(sd, t);
        break;
    case Regime::high_t_limit:
        out.D = high_t_decay(sd, env.omega_T(), t);
        out.gamma = high_t_rate(sd, env.omega_T(), t);
        break;
    case Regime::finite: {
        const auto r = finite_t_pair(model, t, tol);
        out.D = r[0].value;
        out.gamma = r[1].value;
        out.converged = r[0].converged;
        break;
    }
    }
    out.F = std::exp(-out.D);
    return out;
}

double decay_function(const DephasingModel& model, double t, const Tolerance& tol) {
    const DecayEvaluation e = evaluate(model, t, tol);
    if (!e.converged) throw ConvergenceError("decay_function: quadrature did not converge", e.D);
    return e.D;
}

double dephasing_rate_checked(const DephasingModel& model, double t, const Tolerance& tol, bool& converged) {
    require_time(t);
    converged = true;
    if (t == 0.0 || model.spectral.coupling() == 0.0) return 0.0;
    const auto& sd = model.spectral;
    const auto& env = model.environment;
    switch (env.regime()) {
    case Regime::zero: return zero_t_rate(sd, t);
    case Regime::high_t_limit: return high_t_rate(sd, env.omega_T(), t);
    case Regime::finite: {
        const auto r = finite_t_rate(model, t, tol);
        converged = r.converged;
        return r.value;
    }
    }
    return 0.0;
}

double dephasing_rate(const DephasingModel& model, double t, const Tolerance& tol) {
    bool ok = true;
    const double g = dephasing_rate_checked(model, t, tol, ok);
    if (!ok) throw ConvergenceError("dephasing_rate: quadrature did not converge", g);
    return g;
}

double dephasing_factor(const DephasingModel& model, double t, const Tolerance& tol) {
    return std::exp(-decay_function(model, t, tol));
}

SteadyFactor steady_factor(const DephasingModel& model, const Tolerance& tol) {
    const auto& sd = model.spectral;
    const auto& env = model.environment;
    const double s = sd.s();
    const double eta = sd.coupling();
    if (eta == 0.0) return {1.0, false, true};

    switch (env.regime()) {
    case Regime::zero:
        if (s <= 1.0) return {0.0, true, true};
        return {std::exp(-eta * gamma_fn(s) / (s - 1.0)), false, true};
    case Regime::high_t_limit:
        if (s <= 2.0) return {0.0, true, true};
        return {std::exp(-eta * 2.0 * env.omega_T() / sd.omega_c() * gamma_fn(s) / ((s - 1.0) * (s - 2.0))), false,
                true};
    case Regime::finite: break;
    }

    // coth ~ 2T/w makes the integrand ~ w^(s-3) near 0: divergent for s <= 2.
    if (s <= 2.0) return {0.0, true, true};

    const double wc = sd.omega_c();
    const double T = env.temperature();
    auto integrand = [&](double w) { return sd(w) * thermal_kernel(w, env) / (w * w); };

    // Geometric panels down to eps resolve the w^(s-3) endpoint; [0, eps] is analytic.
    const double eps = 1e-9 * wc;
    const double split = 0.01 * wc;
    std::vector<double> pts;
    for (double w = eps; w < split; w *= 2.0) pts.push_back(w);
    const auto tail = numerics::uniform_breakpoints(split, numerics::tail_cutoff(tail_of(sd)), wc);
    pts.insert(pts.end(), tail.begin(), tail.end());

    const auto r = numerics::integrate_panels(integrand, pts, tol);
    // Leading terms of 2 T eta w^(s-3) (1 - w/wc + ...) / wc^(s-1) integrated over [0, eps].
    const double head = 2.0 * T * eta / std::pow(wc, s - 1.0) *
                        (std::pow(eps, s - 2.0) / (s - 2.0) - std::pow(eps, s - 1.0) / ((s - 1.0) * wc));
    return {std::exp(-(r.value + head)), false, r.converged};
}

TimeGrid default_markovianity_grid() { return TimeGrid{0.01, 1000.0, 2400, true}; }

bool is_markovian(const DephasingModel& model, const TimeGrid& grid, const Tolerance& tol, bool* converged) {
    bool all_ok = true;
    bool markovian = true;
    for (double t : grid.values()) {
        bool ok = true;
        const double g = dephasing_rate_checked(model, t, tol, ok);
        all_ok = all_ok && ok;
        if (g < -tol.abs_tol) {
            markovian = false;
            break;
        }
    }
    if (converged) *converged = all_ok;
    return markovian;
}

CriticalOhmicity critical_ohmicity(const ThermalEnvironment& env, double s_lo, double s_hi, const Tolerance& tol,
                                   const TimeGrid& grid, double omega_c) {
    if (!(s_lo > 0.0) || !(s_lo < s_hi)) throw std::invalid_argument("critical_ohmicity: need 0 < s_lo < s_hi");
    bool all_ok = true;
    auto predicate = [&](double s) {
        bool ok = true;
        const bool m = is_markovian(DephasingModel(OhmicSpectralDensity(s, omega_c), env, 0.0), grid, tol, &ok);
        all_ok = all_ok && ok;
        return m;
    };
    double lo = s_lo;
    double hi = s_hi;
    const bool p_lo = predicate(lo);
    const bool p_hi = predicate(hi);
    if (p_lo == p_hi) {
        throw BracketError("critical_ohmicity: Markovianity is the same at both ends of the bracket");
    }
    constexpr double kWidth = 1e-3;
    while (hi - lo > kWidth) {
        const double mid = 0.5 * (lo + hi);
        if (predicate(mid) == p_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), hi - lo, all_ok};
}

std::optional<double> first_negative_time(const DephasingModel& model, double t_max, const Tolerance& tol,
                                          int scan_points) {
    if (!(t_max > 0.0)) throw std::invalid_argument("first_negative_time: t_max must be positive");
    auto rate = [&](double t) {
        const double g = dephasing_rate(model, t, tol);
        return std::abs(g) <= tol.abs_tol ? 0.0 : g;
    };
    const double t_lo = t_max / scan_points;
    for (const auto& c : numerics::find_sign_changes(rate, t_lo, t_max, scan_points, tol)) {
        if (c.direction == numerics::Crossing::positive_to_negative) return c.t_root;
    }
    return std::nullopt;
}

} // namespace qsld
