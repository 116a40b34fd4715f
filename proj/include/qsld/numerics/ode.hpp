#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qsld/numerics/tolerance.hpp"

namespace qsld::numerics {

using State = std::vector<double>;

/// Classical fixed-step RK4 from t0 to t1. `deriv(t, y)` returns dy/dt.
/// Throws NonFiniteError as soon as an intermediate state stops being finite.
template <class Deriv>
State integrate_ode(Deriv&& deriv, State y, double t0, double t1, int steps) {
    if (steps < 1) throw std::invalid_argument("integrate_ode: steps must be >= 1");
    const std::size_t n = y.size();
    const double h = (t1 - t0) / steps;
    State tmp(n);

    auto axpy = [&](const State& k, double a) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + a * k[i];
        return tmp;
    };

    for (int step = 0; step < steps; ++step) {
        const double t = t0 + step * h;
        const State k1 = deriv(t, y);
        const State k2 = deriv(t + 0.5 * h, axpy(k1, 0.5 * h));
        const State k3 = deriv(t + 0.5 * h, axpy(k2, 0.5 * h));
        const State k4 = deriv(t + h, axpy(k3, h));
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(y[i])) {
                throw NonFiniteError("integrate_ode: state became non-finite");
            }
        }
    }
    return y;
}

} // namespace qsld::numerics
