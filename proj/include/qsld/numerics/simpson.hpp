// simpson.hpp: composite and adaptive Simpson rules on finite intervals

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsld/numerics/tolerance.hpp"

namespace qsld::numerics {

// Composite Simpson over uniformly spaced samples (odd count, at least three).
inline double simpson_samples(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("simpson_samples: need an odd number >= 3 of samples");
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        (i % 2 == 1 ? odd : even) += y[i];
    }
    return h / 3.0 * (y.front() + 4.0 * odd + 2.0 * even + y.back());
}

namespace detail {

template <class F>
struct AdaptiveSimpson {
    F& f;
    const Tolerance& tol;
    long evals{0};
    bool converged{true};

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps,
                   int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        evals += 2;
        if (!std::isfinite(flm) || !std::isfinite(frm)) {
            throw NonFiniteError("adaptive_simpson: non-finite integrand sample");
        }
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth <= 0 || evals > tol.max_evals) {
            converged = false;
            return left + right + delta / 15.0;
        }
        if (std::abs(delta) <= 15.0 * eps) {
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
    }
};

} // namespace detail

// Adaptive Simpson with Richardson correction. The interval is first cut into
// `initial_panels` equal panels so that features narrower than the interval are seen.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, const Tolerance& tol, int initial_panels = 16) {
    tol.validate();
    if (!(b > a)) return QuadratureResult{0.0, 0.0, 0, true};
    detail::AdaptiveSimpson<F> state{f, tol};
    // Coarse estimate to turn the relative tolerance into an absolute one.
    std::vector<double> xs(2 * initial_panels + 1);
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
        ys[i] = f(xs[i]);
        if (!std::isfinite(ys[i])) throw NonFiniteError("adaptive_simpson: non-finite integrand sample");
    }
    state.evals = static_cast<long>(xs.size());
    const double coarse = simpson_samples(ys, xs[1] - xs[0]);
    const double eps = tol.bound(coarse) / initial_panels;

    double total = 0.0;
    for (int p = 0; p < initial_panels; ++p) {
        const std::size_t i = 2 * static_cast<std::size_t>(p);
        const double whole = (xs[i + 2] - xs[i]) / 6.0 * (ys[i] + 4.0 * ys[i + 1] + ys[i + 2]);
        total += state.recurse(xs[i], xs[i + 2], ys[i], ys[i + 1], ys[i + 2], whole, eps, 50);
    }
    return QuadratureResult{total, std::abs(total - coarse), state.evals, state.converged};
}

} // namespace qsld::numerics
