#include "qsld/qsl.hpp"

#include <algorithm>
#include <cmath>

#include "qsld/numerics/roots.hpp"
#include "qsld/numerics/simpson.hpp"

namespace qsld {

namespace {

void require_c0(double c0) {
    if (!(c0 >= 0.0 && c0 <= 1.0)) throw std::domain_error("initial coherence must lie in [0, 1]");
}

DecayEvaluation evaluate_or_throw(const DephasingModel& model, double t, const Tolerance& tol) {
    const DecayEvaluation e = evaluate(model, t, tol);
    if (!e.converged) throw ConvergenceError("quadrature did not converge at t = " + std::to_string(t), e.D);
    return e;
}

} // namespace

double geodesic_from(const DecayEvaluation& e, double omega_0, double c0) {
    const double phase = omega_0 * e.t;
    return 0.5 * c0 * std::hypot(e.F - std::cos(phase), std::sin(phase));
}

double speed_from(const DecayEvaluation& e, double omega_0, double c0) {
    return 0.5 * c0 * std::hypot(omega_0, e.gamma) * e.F;
}

double geodesic_distance(const DephasingModel& model, double tau, double c0, const Tolerance& tol) {
    require_c0(c0);
    return geodesic_from(evaluate_or_throw(model, tau, tol), model.omega_0, c0);
}

double instantaneous_speed(const DephasingModel& model, double t, double c0, const Tolerance& tol) {
    require_c0(c0);
    return speed_from(evaluate_or_throw(model, t, tol), model.omega_0, c0);
}

int default_path_samples(const DephasingModel& model, double tau) {
    const double periods = std::ceil(model.omega_0 * tau / M_PI);
    return std::max(512, 64 * static_cast<int>(periods));
}

numerics::QuadratureResult path_length(const DephasingModel& model, double tau, double c0, int samples,
                                       const Tolerance& tol) {
    require_c0(c0);
    if (samples < 16) throw std::invalid_argument("path_length: need at least 16 samples");
    if (!(tau > 0.0)) throw std::invalid_argument("path_length: tau must be positive");
    tol.validate();

    int n = samples + samples % 2;
    bool quad_ok = true;
    long evals = 0;
    // Integrate in u with t = tau u^2, which crowds samples into the initial transient
    // (its width shrinks like 1/sqrt(gamma'(0)) for large s). Each sample inherits the
    // quadrature error of D and gamma; `noise` carries that bound so the doubling test
    // does not chase it.
    std::vector<double> noise;
    auto speed_at = [&](double u, double& err) {
        const double jac = 2.0 * tau * u;
        const DecayEvaluation e = evaluate(model, tau * u * u, tol);
        quad_ok = quad_ok && e.converged;
        ++evals;
        const double v = speed_from(e, model.omega_0, c0);
        err = jac * (v * tol.bound(e.D) + 0.5 * c0 * e.F * tol.bound(e.gamma));
        return jac * v;
    };

    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    noise.resize(v.size());
    for (int i = 0; i <= n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        v[k] = speed_at(static_cast<double>(i) / n, noise[k]);
    }
    double previous = numerics::simpson_samples(v, 1.0 / n);

    constexpr int kMaxDoublings = 6;
    for (int d = 0; d < kMaxDoublings; ++d) {
        // Interleave the new midpoints with the existing samples.
        std::vector<double> finer(2 * v.size() - 1);
        std::vector<double> finer_noise(finer.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            finer[2 * i] = v[i];
            finer_noise[2 * i] = noise[i];
        }
        const int n2 = 2 * n;
        for (int i = 1; i < n2; i += 2) {
            const auto k = static_cast<std::size_t>(i);
            finer[k] = speed_at(static_cast<double>(i) / n2, finer_noise[k]);
        }
        const double current = numerics::simpson_samples(finer, 1.0 / n2);
        const double floor = numerics::simpson_samples(finer_noise, 1.0 / n2);
        const double change = std::abs(current - previous);
        v = std::move(finer);
        noise = std::move(finer_noise);
        n = n2;
        if (change < tol.bound(current) + 2.0 * floor) {
            return {current, change, evals, quad_ok};
        }
        previous = current;
    }
    return {previous, std::abs(previous - numerics::simpson_samples(v, 1.0 / n)), evals, false};
}

QslEvaluation qsl_time(const DephasingModel& model, double tau, int samples, const Tolerance& tol) {
    if (!(tau > 0.0)) throw std::invalid_argument("qsl_time: tau must be positive");
    if (model.omega_0 == 0.0 && model.spectral.coupling() == 0.0) {
        throw DegenerateEvolution("qsl_time: the state does not move (omega_0 = 0 and no dephasing)");
    }
    const DecayEvaluation end = evaluate(model, tau, tol);
    const auto len = path_length(model, tau, 1.0, samples, tol);
    if (!(len.value > 0.0)) throw DegenerateEvolution("qsl_time: vanishing path length");

    QslEvaluation q;
    q.tau = tau;
    q.geodesic = geodesic_from(end, model.omega_0, 1.0);
    q.path_length = len.value;
    q.avg_speed = len.value / tau;
    q.tau_qsl = q.geodesic / q.avg_speed;
    q.ratio = q.geodesic / q.path_length;
    q.converged = end.converged && len.converged;
    return q;
}

QslEvaluation qsl_time(const DephasingModel& model, double tau, const Tolerance& tol) {
    return qsl_time(model, tau, default_path_samples(model, tau), tol);
}

NonMarkovianity non_markovianity(const DephasingModel& model, double t_max, const Tolerance& tol, int scan_points) {
    if (!(t_max > 0.0)) throw std::invalid_argument("non_markovianity: t_max must be positive");
    NonMarkovianity out;
    bool ok_all = true;
    // Rates within abs_tol of zero count as zero, so quadrature noise on a vanishing
    // tail does not open spurious intervals (same band as the Markovianity predicate).
    auto rate = [&](double t) {
        bool ok = true;
        const double g = dephasing_rate_checked(model, t, tol, ok);
        ok_all = ok_all && ok;
        return std::abs(g) <= tol.abs_tol ? 0.0 : g;
    };

    const double pitch = t_max / scan_points;
    const double t_lo = pitch;
    const auto crossings = numerics::find_sign_changes(rate, t_lo, t_max, scan_points, tol);

    double open_start = rate(t_lo) < 0.0 ? t_lo : -1.0;
    for (const auto& c : crossings) {
        if (c.direction == numerics::Crossing::positive_to_negative) {
            open_start = c.t_root;
        } else if (open_start >= 0.0) {
            out.negative_intervals.emplace_back(open_start, c.t_root);
            open_start = -1.0;
        }
    }
    if (open_start >= 0.0) out.negative_intervals.emplace_back(open_start, t_max);

    auto backflow = [&](double t) {
        const DecayEvaluation e = evaluate(model, t, tol);
        ok_all = ok_all && e.converged;
        return -e.gamma * e.F;
    };
    for (const auto& [a, b] : out.negative_intervals) {
        const auto piece = numerics::adaptive_simpson(backflow, a, b, tol);
        out.N += piece.value;
        ok_all = ok_all && piece.converged;
        if (b - a < 2.0 * pitch) out.resolution_warning = true;
    }
    if (!out.negative_intervals.empty() && out.negative_intervals.back().second == t_max) {
        const DecayEvaluation e = evaluate(model, t_max, tol);
        out.tail_bound = std::abs(e.gamma) * e.F * t_max;
    }
    out.converged = ok_all;
    return out;
}

double mt_ml_bound(double delta_e, double e_minus_e0) {
    if (!(delta_e > 0.0) || !(e_minus_e0 > 0.0)) {
        throw std::domain_error("mt_ml_bound: energy spread and mean energy above ground must be positive");
    }
    return std::max(M_PI / (2.0 * delta_e), M_PI / (2.0 * e_minus_e0));
}

} // namespace qsld
