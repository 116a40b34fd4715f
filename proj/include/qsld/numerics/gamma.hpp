#pragma once

namespace qsld::numerics {

/// Euler Gamma function for positive arguments. Throws std::domain_error for s <= 0.
double gamma_fn(double s);

} // namespace qsld::numerics
