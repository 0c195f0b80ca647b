#include "fracrd/special.hpp"

#include "fracrd/errors.hpp"

#include <cmath>
#include <numbers>

namespace fracrd {

namespace {

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

} // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x))
    throw DomainError("gamma_fn: non-finite argument");
  if (nonpositive_integer(x))
    throw DomainError("gamma_fn: pole at non-positive integer");
  return std::tgamma(x);
}

double rgamma(double x) {
  if (!std::isfinite(x))
    throw DomainError("rgamma: non-finite argument");
  if (nonpositive_integer(x))
    return 0.0;
  if (x > 0.0) {
    if (x < 170.0)
      return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
  const double s = std::sin(std::numbers::pi * (x - 2.0 * std::floor(0.5 * x)));
  if (1.0 - x < 170.0)
    return std::tgamma(1.0 - x) * s / std::numbers::pi;
  const double lg = std::lgamma(1.0 - x);
  if (lg > 700.0)
    return std::copysign(HUGE_VAL, s);
  return std::exp(lg) * s / std::numbers::pi;
}

double fractional_laplacian_constant(int N, double s) {
  if (N < 1)
    throw DomainError("fractional_laplacian_constant: N must be positive");
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("fractional_laplacian_constant: s must lie in (0,1)");
  const double half = 0.5 * N;
  return std::pow(4.0, s) * s * std::tgamma(half + s) /
         (std::tgamma(1.0 - s) * std::pow(std::numbers::pi, half));
}

} // namespace fracrd
