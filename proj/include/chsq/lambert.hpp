#pragma once

namespace chsq {

// Principal branch of the Lambert W function, W e^W = x, for x >= -1/e.
// Halley iteration, converged to 1e-12 relative. Throws std::domain_error
// below the branch point.
double lambert_w(double x);

// Saturable ensemble transmission T(s) = W(s e^{s - 4 beta N}) / s.
// The s -> 0 limit e^{-4 beta N} is taken analytically for tiny s.
// n_atoms is a double so the same code serves the continuous fit.
double lambert_beer_transmission(double s, double beta, double n_atoms);

}  // namespace chsq
