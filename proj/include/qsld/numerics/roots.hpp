// roots.hpp: sign-change scan with bisection refinement

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsld/numerics/tolerance.hpp"

namespace qsld::numerics {

enum class Crossing { positive_to_negative, negative_to_positive };

struct SignChange {
    double t_root{0.0};
    Crossing direction{Crossing::positive_to_negative};
};

namespace detail {
inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }
} // namespace detail

// Bisects a bracket [lo, hi] with sign(g(lo)) = lo_sign != 0 and an opposite sign at hi
// until the bracket is no wider than `width`. Returns the bracket midpoint.
template <class G>
double bisect_root(G&& g, double lo, double hi, int lo_sign, double width) {
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double v = g(mid);
        if (!std::isfinite(v)) {
            throw NonFiniteError("bisect_root: non-finite function value");
        }
        const int s = detail::sign_of(v);
        if (s == 0) return mid;
        if (s == lo_sign) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Scans g on `scan_points` uniformly spaced points of [t_lo, t_hi] and refines every
// bracketed sign change to width tol.abs_tol. Exact zeros on the scan grid are skipped
// when locating brackets, so a zero at t_lo without a sign change is not reported.
// Crossings closer together than the scan pitch can be missed.
template <class G>
std::vector<SignChange> find_sign_changes(G&& g, double t_lo, double t_hi, int scan_points,
                                          const Tolerance& tol) {
    tol.validate();
    if (!(t_lo < t_hi)) throw std::invalid_argument("find_sign_changes: need t_lo < t_hi");
    if (scan_points < 2) throw std::invalid_argument("find_sign_changes: need scan_points >= 2");

    std::vector<SignChange> roots;
    double last_t = t_lo;
    int last_sign = 0;
    for (int i = 0; i < scan_points; ++i) {
        const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / (scan_points - 1);
        const double v = g(t);
        if (!std::isfinite(v)) {
            throw NonFiniteError("find_sign_changes: non-finite function value");
        }
        const int s = detail::sign_of(v);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) {
            const double root = bisect_root(g, last_t, t, last_sign, tol.abs_tol);
            roots.push_back({root, last_sign > 0 ? Crossing::positive_to_negative
                                                 : Crossing::negative_to_positive});
        }
        last_sign = s;
        last_t = t;
    }
    return roots;
}

} // namespace qsld::numerics
