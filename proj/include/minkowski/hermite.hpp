#pragma once

// Probabilists' Hermite polynomials and the Gaussian integrals built on them.

namespace mlab {

/// Standard normal density.
double gaussian_pdf(double x);

/// Standard normal upper tail P(X >= x), evaluated through erfc so that the
/// far tail keeps full relative precision.
double gaussian_tail(double x);

/// He_k(x) for k >= 0 via x*He_k = He_{k+1} + k*He_{k-1}.
/// k == -1 returns the Mills ratio gaussian_tail(x) / gaussian_pdf(x).
/// Throws std::domain_error for k < -1.
double hermite(int k, double x);

/// Integral of He_k(t) phi(t) over [x, inf), which equals He_{k-1}(x) phi(x).
/// For k == 0 this is the upper tail. Throws std::domain_error for k < 0.
double hermite_tail_integral(int k, double x);

}  // namespace mlab
