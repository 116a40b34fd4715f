// qsl.hpp: geometric quantum speed limit of the dephasing qubit, BLP non-Markovianity
// and the closed-system Mandelstam–Tamm / Margolus–Levitin bound.
//
// c0 arguments are the initial l1 coherence C(0) = 2|rho_10(0)| in [0, 1]. The ratio
// tau_QSL / tau = geodesic / path_length does not depend on it.

#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "qsld/dephasing.hpp"
#include "qsld/numerics/tolerance.hpp"

namespace qsld {

struct QslEvaluation {
    double tau{0.0};
    double geodesic{0.0};
    double path_length{0.0};
    double avg_speed{0.0};
    double tau_qsl{0.0};
    double ratio{0.0};
    bool converged{true};
};

struct NonMarkovianity {
    double N{0.0};
    std::vector<std::pair<double, double>> negative_intervals;
    double tail_bound{0.0};          // estimate of the part of N beyond t_max
    bool resolution_warning{false};  // an interval is within two scan pitches of vanishing
    bool converged{true};
};

// No motion at all (omega_0 = 0 and no dephasing): the QSL ratio is undefined.
class DegenerateEvolution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Closed forms in terms of one DecayEvaluation; used by the sweeps.
double geodesic_from(const DecayEvaluation& e, double omega_0, double c0);
double speed_from(const DecayEvaluation& e, double omega_0, double c0);

double geodesic_distance(const DephasingModel& model, double tau, double c0, const Tolerance& tol = {});
double instantaneous_speed(const DephasingModel& model, double t, double c0, const Tolerance& tol = {});

// max(512, 64 ceil(omega_0 tau / pi)) subintervals.
int default_path_samples(const DephasingModel& model, double tau);

// Composite Simpson of the speed over [0, tau] (in u with t = tau u^2) starting with
// `samples` subintervals and doubling until two successive estimates agree to tol.bound
// plus twice the error the samples inherit from D and gamma (at most 6 doublings).
numerics::QuadratureResult path_length(const DephasingModel& model, double tau, double c0, int samples,
                                       const Tolerance& tol = {});

QslEvaluation qsl_time(const DephasingModel& model, double tau, int samples, const Tolerance& tol = {});
QslEvaluation qsl_time(const DephasingModel& model, double tau, const Tolerance& tol = {});

// N = -integral of gamma F over the intervals where gamma < 0, for the |+>, |-> pair.
// The interval scan treats |gamma| <= abs_tol as zero.
NonMarkovianity non_markovianity(const DephasingModel& model, double t_max = 200.0, const Tolerance& tol = {},
                                 int scan_points = 2000);

double mt_ml_bound(double delta_e, double e_minus_e0);

} // namespace qsld
