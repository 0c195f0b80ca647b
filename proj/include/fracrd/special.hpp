#pragma once

namespace fracrd {

// Gamma function on the real line. Throws DomainError at the poles.
double gamma_fn(double x);

// 1/Gamma(x); an entire function, zero at 0, -1, -2, ...
double rgamma(double x);

// Constant of the hypersingular fractional Laplacian on R^N.
//   C_{N,s} = 4^s s Gamma(N/2 + s) / (Gamma(1 - s) pi^{N/2})
double fractional_laplacian_constant(int N, double s);

} // namespace fracrd
