// Independent reference values for the tests and the acceptance suite.
//
// The finite-temperature oracle expands coth(w/2T) = 1 + 2 sum_k exp(-k w / T); every
// term then has an elementary Laplace transform, so D and gamma become sums of closed
// forms with shifted cutoffs a_k = 1/omega_c + k/T. The remainder of the sum is
// replaced by its integral (all terms behave like a^-(s+1) once a >> t).

#pragma once

#include <cmath>
#include <vector>

#include "qsld/numerics/quadrature.hpp"

namespace oracle {

// Integral of w^(s-2) exp(-a w) (1 - cos w t) over (0, inf), times a^0 (omega_c = 1).
inline double decay_term(double s, double a, double t) {
    const double r2 = a * a + t * t;
    const double th = std::atan(t / a);
    if (std::abs(s - 1.0) < 1e-12) return 0.5 * std::log(r2 / (a * a));
    return std::tgamma(s - 1.0) * (std::pow(a, 1.0 - s) - std::pow(r2, 0.5 * (1.0 - s)) * std::cos((s - 1.0) * th));
}

// Integral of w^(s-1) exp(-a w) sin(w t) over (0, inf).
inline double rate_term(double s, double a, double t) {
    const double r2 = a * a + t * t;
    return std::tgamma(s) * std::sin(s * std::atan(t / a)) * std::pow(r2, -0.5 * s);
}

struct DecayPair {
    double D;
    double gamma;
};

// omega_c = 1, coupling 1. T = 0 reduces to the k = 0 term.
inline DecayPair bose_series(double s, double T, double t, long terms = 20000) {
    DecayPair out{decay_term(s, 1.0, t), rate_term(s, 1.0, t)};
    if (T == 0.0) return out;
    double D = 0.0;
    double g = 0.0;
    for (long k = terms; k >= 1; --k) {  // smallest terms first
        const double a = 1.0 + static_cast<double>(k) / T;
        D += decay_term(s, a, t);
        g += rate_term(s, a, t);
    }
    // Remainder: terms ~ Gamma(s+1) t^2 / (2 a^(s+1)) and Gamma(s+1) t / a^(s+1).
    const double a_tail = 1.0 + (static_cast<double>(terms) + 0.5) / T;
    const double tail_sum = T / s * std::pow(a_tail, -s);
    D += std::tgamma(s + 1.0) * 0.5 * t * t * tail_sum;
    g += std::tgamma(s + 1.0) * t * tail_sum;
    out.D += 2.0 * D;
    out.gamma += 2.0 * g;
    return out;
}

// Closed forms of the zero-temperature branch written directly from trig functions.
inline double zero_t_decay(double s, double t) { return decay_term(s, 1.0, t); }
inline double zero_t_rate(double s, double t) { return rate_term(s, 1.0, t); }

// High-temperature branch by brute-force quadrature of J(w) (2 w_T / w) (1 - cos wt) / w^2
// on a fine fixed grid, independent of the library's adaptive rule.
inline DecayPair high_t_by_grid(double s, double omega_T, double t) {
    auto weight = [&](double w) { return 2.0 * omega_T * std::pow(w, s - 2.0) * std::exp(-w); };
    const double upper = 60.0 + 2.0 * s;
    const auto pts = qsld::numerics::uniform_breakpoints(0.0, upper, std::min(0.25, 1.0 / (t + 1.0)));
    qsld::numerics::Tolerance tol{1e-13, 1e-11, 2000000};
    auto fD = [&](double w) {
        const double h = std::sin(0.5 * w * t);
        return weight(w) * 2.0 * h * h / w;
    };
    auto fg = [&](double w) { return weight(w) * std::sin(w * t); };
    return {qsld::numerics::integrate_panels(fD, pts, tol).value, qsld::numerics::integrate_panels(fg, pts, tol).value};
}

} // namespace oracle
