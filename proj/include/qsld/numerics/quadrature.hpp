// quadrature.hpp: globally adaptive Gauss–Kronrod (7/15) quadrature on panel partitions
// and on [0, inf) for integrands with an exponential high-frequency cutoff.
//
// The 15-point rule is open: panel endpoints are never sampled, so integrands with an
// integrable singularity at omega = 0 are safe as long as they are finite for omega > 0.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsld/numerics/tolerance.hpp"

namespace qsld::numerics {

template <std::size_t N>
using Values = std::array<double, N>;

// Envelope hint for the integrand tail: |f(w)| <~ w^power * exp(-w / scale).
struct TailDecay {
    double scale{1.0};
    double power{0.0};
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights belong to the odd Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
    double a{0.0};
    double b{0.0};
    Values<N> value{};
    Values<N> error{};
    double worst{0.0};
};

template <std::size_t N>
struct PanelOrder {
    bool operator()(const Panel<N>& x, const Panel<N>& y) const { return x.worst < y.worst; }
};

template <std::size_t N, class F>
Values<N> sample(F& f, double x) {
    Values<N> v = f(x);
    for (double c : v) {
        if (!std::isfinite(c)) {
            throw NonFiniteError("quadrature: non-finite integrand sample at x = " + std::to_string(x));
        }
    }
    return v;
}

template <std::size_t N, class F>
Panel<N> gauss_kronrod15(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<Values<N>, 15> fv;
    fv[7] = sample<N>(f, centre);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        fv[j] = sample<N>(f, centre - dx);
        fv[14 - j] = sample<N>(f, centre + dx);
    }

    Panel<N> p;
    p.a = a;
    p.b = b;
    for (std::size_t c = 0; c < N; ++c) {
        double kronrod = kKronrodWeights[7] * fv[7][c];
        double gauss = kGaussWeights[3] * fv[7][c];
        double abs_sum = std::abs(kronrod);
        for (std::size_t j = 0; j < 7; ++j) {
            const double pair = fv[j][c] + fv[14 - j][c];
            kronrod += kKronrodWeights[j] * pair;
            abs_sum += kKronrodWeights[j] * (std::abs(fv[j][c]) + std::abs(fv[14 - j][c]));
            if (j % 2 == 1) {
                gauss += kGaussWeights[j / 2] * pair;
            }
        }
        const double mean = 0.5 * kronrod;
        double asc = kKronrodWeights[7] * std::abs(fv[7][c] - mean);
        for (std::size_t j = 0; j < 7; ++j) {
            asc += kKronrodWeights[j] * (std::abs(fv[j][c] - mean) + std::abs(fv[14 - j][c] - mean));
        }
        const double ah = std::abs(half);
        const double result = kronrod * half;
        double err = std::abs((kronrod - gauss) * half);
        asc *= ah;
        abs_sum *= ah;
        if (asc != 0.0 && err != 0.0) {
            err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
        }
        if (abs_sum > tiny / (50.0 * eps)) {
            err = std::max(50.0 * eps * abs_sum, err);
        }
        p.value[c] = result;
        p.error[c] = err;
        p.worst = std::max(p.worst, err);
    }
    return p;
}

} // namespace detail

// Globally adaptive integration over the partition given by `breakpoints` (strictly
// increasing, at least two entries). The worst panel is bisected until every component
// meets tol.bound(value) or the refinement budget tol.max_evals is spent.
template <std::size_t N, class F>
std::array<QuadratureResult, N> integrate_panels_n(F&& f, std::span<const double> breakpoints,
                                                   const Tolerance& tol) {
    tol.validate();
    if (breakpoints.size() < 2) {
        throw std::invalid_argument("integrate_panels: need at least two breakpoints");
    }
    using Panel = detail::Panel<N>;
    detail::PanelOrder<N> order;

    std::vector<Panel> heap;
    heap.reserve(breakpoints.size() + 64);
    Values<N> total{};
    Values<N> total_err{};
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) {
            throw std::invalid_argument("integrate_panels: breakpoints must be strictly increasing");
        }
        heap.push_back(detail::gauss_kronrod15<N>(f, breakpoints[i], breakpoints[i + 1]));
        for (std::size_t c = 0; c < N; ++c) {
            total[c] += heap.back().value[c];
            total_err[c] += heap.back().error[c];
        }
    }
    std::make_heap(heap.begin(), heap.end(), order);

    long evals = static_cast<long>(15 * heap.size());
    const long budget = evals + tol.max_evals;

    auto satisfied = [&](const Values<N>& val, const Values<N>& err) {
        for (std::size_t c = 0; c < N; ++c) {
            if (err[c] > tol.bound(val[c])) return false;
        }
        return true;
    };
    auto resum = [&] {
        total.fill(0.0);
        total_err.fill(0.0);
        for (const auto& p : heap) {
            for (std::size_t c = 0; c < N; ++c) {
                total[c] += p.value[c];
                total_err[c] += p.error[c];
            }
        }
    };

    bool converged = false;
    while (true) {
        if (satisfied(total, total_err)) {
            resum(); // drop the drift of the running sums before declaring success
            if (satisfied(total, total_err)) {
                converged = true;
                break;
            }
        }
        if (evals + 30 > budget) break;
        std::pop_heap(heap.begin(), heap.end(), order);
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push_back(worst); // panel cannot be split further in double precision
            std::push_heap(heap.begin(), heap.end(), order);
            break;
        }
        Panel left = detail::gauss_kronrod15<N>(f, worst.a, mid);
        Panel right = detail::gauss_kronrod15<N>(f, mid, worst.b);
        evals += 30;
        for (std::size_t c = 0; c < N; ++c) {
            total[c] += left.value[c] + right.value[c] - worst.value[c];
            total_err[c] += left.error[c] + right.error[c] - worst.error[c];
        }
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), order);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), order);
    }
    if (!converged) resum();

    std::array<QuadratureResult, N> out;
    for (std::size_t c = 0; c < N; ++c) {
        out[c] = QuadratureResult{total[c], total_err[c], evals, converged};
    }
    return out;
}

template <class F>
QuadratureResult integrate_panels(F&& f, std::span<const double> breakpoints, const Tolerance& tol) {
    auto wrapped = [&f](double x) { return Values<1>{f(x)}; };
    return integrate_panels_n<1>(wrapped, breakpoints, tol)[0];
}

// Upper integration limit for an integrand with the given tail envelope.
inline double tail_cutoff(const TailDecay& tail) {
    return tail.scale * std::max(40.0, tail.power + 10.0 * std::log(10.0));
}

// Uniform partition of [lo, hi] with panel width at most `max_width`.
inline std::vector<double> uniform_breakpoints(double lo, double hi, double max_width) {
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / max_width)));
    std::vector<double> pts(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    }
    pts[n] = hi;
    return pts;
}

// Integral over (0, inf) of a vector-valued integrand. When `t_scale` is given the
// integrand is assumed to oscillate like cos(w t) and panels are capped at width pi/t.
template <std::size_t N, class F>
std::array<QuadratureResult, N> integrate_semi_infinite_n(F&& f, std::optional<double> t_scale,
                                                          const Tolerance& tol, TailDecay tail = {}) {
    if (!(tail.scale > 0.0)) {
        throw std::invalid_argument("integrate_semi_infinite: tail scale must be positive");
    }
    double upper = tail_cutoff(tail);
    // Extend the cutoff while the sampled envelope past it could still matter.
    for (int grow = 0; grow < 40; ++grow) {
        double envelope = 0.0;
        for (int k = 0; k < 8; ++k) {
            const Values<N> v = detail::sample<N>(f, upper * (1.0 + k / 32.0));
            for (double c : v) envelope = std::max(envelope, std::abs(c));
        }
        if (envelope * tail.scale * 4.0 <= 1e-3 * tol.abs_tol) break;
        upper *= 1.5;
    }
    double width = tail.scale;
    if (t_scale && *t_scale > 0.0) {
        width = std::min(width, M_PI / *t_scale);
    }
    const std::vector<double> pts = uniform_breakpoints(0.0, upper, width);
    return integrate_panels_n<N>(f, pts, tol);
}

template <class F>
QuadratureResult integrate_semi_infinite(F&& f, std::optional<double> t_scale, const Tolerance& tol,
                                         TailDecay tail = {}) {
    auto wrapped = [&f](double x) { return Values<1>{f(x)}; };
    return integrate_semi_infinite_n<1>(wrapped, t_scale, tol, tail)[0];
}

} // namespace qsld::numerics
