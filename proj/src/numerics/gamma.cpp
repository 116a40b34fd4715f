#include "qsld/numerics/gamma.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsld::numerics {

double gamma_fn(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::domain_error("gamma_fn: argument must be positive and finite, got " + std::to_string(s));
    }
    return std::tgamma(s);
}

} // namespace qsld::numerics
