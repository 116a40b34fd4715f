#include "qsld/qubit.hpp"

#include <cmath>
#include <stdexcept>

#include "qsld/numerics/ode.hpp"

namespace qsld {

QubitState::QubitState(double p1, std::complex<double> c) : p1_(p1), c_(c) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::domain_error("QubitState: population must lie in [0, 1]");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw std::domain_error("QubitState: non-finite coherence");
    // Small slack so states produced by exact formulas on the boundary survive rounding.
    if (std::norm(c) > p1 * (1.0 - p1) + 1e-12) throw std::domain_error("QubitState: not positive semidefinite");
}

QubitState evolve_analytic(const DephasingModel& model, const QubitState& rho0, double t, const Tolerance& tol) {
    const double F = dephasing_factor(model, t, tol);
    const std::complex<double> phase = std::polar(1.0, -model.omega_0 * t);
    return QubitState(rho0.p1(), phase * F * rho0.coherence());
}

QubitState evolve_ode(const DephasingModel& model, const QubitState& rho0, double t, int steps, const Tolerance& tol) {
    if (steps < 10) throw std::invalid_argument("evolve_ode: need at least 10 steps");
    if (!(t >= 0.0)) throw std::domain_error("evolve_ode: t must be >= 0");
    const double w0 = model.omega_0;
    auto deriv = [&](double time, const numerics::State& y) {
        const double g = dephasing_rate(model, time, tol);
        // d(re + i im)/dt = (-g - i w0)(re + i im)
        return numerics::State{-g * y[0] + w0 * y[1], -g * y[1] - w0 * y[0]};
    };
    const auto c0 = rho0.coherence();
    const auto y = numerics::integrate_ode(deriv, {c0.real(), c0.imag()}, 0.0, t, steps);
    return QubitState(rho0.p1(), {y[0], y[1]});
}

double trace_distance(const QubitState& a, const QubitState& b) {
    // Eigenvalues of the traceless Hermitian difference are +-sqrt(dp^2 + |dc|^2).
    const double dp = a.p1() - b.p1();
    return std::sqrt(dp * dp + std::norm(a.coherence() - b.coherence()));
}

double l1_coherence(const QubitState& rho) { return 2.0 * std::abs(rho.coherence()); }

} // namespace qsld
