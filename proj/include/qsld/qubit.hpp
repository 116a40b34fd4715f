// qubit.hpp: single-qubit density matrix and its dephasing evolution
//
// Only rho_11 = p1 and the coherence c = rho_10 are stored; rho_00 = 1 - p1 and
// rho_01 = conj(c), so the state is Hermitian with unit trace by construction.

#pragma once

#include <complex>

#include "qsld/dephasing.hpp"

namespace qsld {

class QubitState {
public:
    // Throws std::domain_error unless 0 <= p1 <= 1 and |c|^2 <= p1 (1 - p1).
    QubitState(double p1, std::complex<double> c);

    static QubitState ground() { return {0.0, 0.0}; }  // |0><0|
    static QubitState excited() { return {1.0, 0.0}; } // |1><1|
    static QubitState plus() { return {0.5, 0.5}; }    // (|1> + |0>)/sqrt 2
    static QubitState minus() { return {0.5, -0.5}; }  // (|1> - |0>)/sqrt 2

    double p1() const { return p1_; }
    double p0() const { return 1.0 - p1_; }
    std::complex<double> coherence() const { return c_; }

private:
    double p1_;
    std::complex<double> c_;
};

// rho_10(t) = exp(-i w0 t) F(t) rho_10(0); populations are constant.
// Throws ConvergenceError when the finite-temperature quadrature fails.
QubitState evolve_analytic(const DephasingModel& model, const QubitState& rho0, double t, const Tolerance& tol = {});

// RK4 propagation of dc/dt = (-i w0 - gamma(t)) c with gamma sampled on the fly.
QubitState evolve_ode(const DephasingModel& model, const QubitState& rho0, double t, int steps,
                      const Tolerance& tol = {});

double trace_distance(const QubitState& a, const QubitState& b);

// l1-norm coherence 2|rho_10|.
double l1_coherence(const QubitState& rho);

} // namespace qsld
