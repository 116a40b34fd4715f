// tolerance.hpp: accuracy targets shared by the quadrature, root and sweep code

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsld::numerics {

struct Tolerance {
    double abs_tol{1e-10};
    double rel_tol{1e-8};
    long max_evals{200000}; // adaptive refinement budget, on top of the initial partition

    // Accepted error for a quantity of the given magnitude.
    double bound(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
            throw std::invalid_argument("Tolerance: abs_tol and rel_tol must be positive");
        }
        if (max_evals < 100) {
            throw std::invalid_argument("Tolerance: max_evals must be at least 100");
        }
    }
};

struct QuadratureResult {
    double value{0.0};
    double error_estimate{0.0};
    long evaluations{0};
    bool converged{false};
};

// Raised when an integrand or a propagated state produces NaN/Inf.
class NonFiniteError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace qsld::numerics
