#include "fracrd/errors.hpp"
#include "fracrd/mlf.hpp"
#include "fracrd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fracrd {

double kstar(const ModelParams& p, const AnalysisConstants& consts, int N) {
  if (N == 1)
    return 0.0;
  if (N != 2)
    throw DomainError("kstar: N must be 1 or 2");
  if (!(consts.C_GN > 0.0))
    throw DomainError("c_gn: must be positive");
  if (!(consts.eta > 0.0))
    throw DomainError("eta: must be positive for N = 2");
  return (p.mu * consts.C_GN * consts.C_GN + 1.0) / consts.eta;
}

EquilibriaReport constant_roots(const ModelParams& p) {
  EquilibriaReport r;
  if (!(p.mu > 0.0) || !(p.k > 0.0))
    return r;
  const double disc = 1.0 - 4.0 * p.k * p.gamma / p.mu;
  if (disc < 0.0)
    return r;
  const double sq = std::sqrt(disc);
  r.exists = true;
  r.A = (1.0 + sq) / (2.0 * p.k);
  // a = (1 - sq) / (2k) without the cancellation
  r.a = 2.0 * p.gamma / (p.mu * (1.0 + sq));
  auto res = [&](double u) { return std::abs(p.mu * u * (1.0 - p.k * u) - p.gamma); };
  r.residual = std::max(res(r.a), res(r.A));
  return r;
}

double lyapunov_density(double u, const EquilibriaReport& eq) {
  if (!eq.exists || !(eq.a > 0.0))
    throw DomainError("lyapunov_h: no positive equilibria");
  if (!(u < eq.a))
    throw DomainError("lyapunov_h: u must stay below the lower root a");
  return eq.A * std::log1p(-u / eq.A) - eq.a * std::log1p(-u / eq.a);
}

double lyapunov_density_derivative(double u, const EquilibriaReport& eq) {
  if (!eq.exists)
    throw DomainError("lyapunov_h: no positive equilibria");
  return (eq.A - eq.a) * u / ((eq.A - u) * (eq.a - u));
}

double lyapunov_h(const GridField& u, const EquilibriaReport& eq) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    if (!(u.values[i] < eq.a) || u.values[i] < -1e-12)
      bad.push_back(i);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "lyapunov_h: " << bad.size() << " grid points outside [0, a):";
    for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 8); ++i)
      msg << " #" << bad[i] << "=" << u.values[bad[i]];
    throw DomainError(msg.str());
  }
  const auto w = u.domain.quadrature_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    s += w[i] * lyapunov_density(u.values[i], eq);
  return s;
}

std::vector<double> decay_envelope(double u0_norm, const EigenBasis& basis, const ModelParams& p,
                                   double sigma, const std::vector<double>& times) {
  const double rate = std::pow(basis.lambda1(), p.s) + sigma;
  std::vector<double> env;
  env.reserve(times.size());
  for (double t : times) {
    if (t < 0.0)
      throw DomainError("decay_envelope: negative time");
    env.push_back(t == 0.0 ? u0_norm : u0_norm * mlf(p.alpha, 1.0, -rate * std::pow(t, p.alpha)));
  }
  return env;
}

double weighted_l1_gap(const GridField& u, const GridField& v, double beta_exp, double R,
                       const DomainSpec& domain) {
  if (!(u.domain == domain) || !(v.domain == domain))
    throw DomainError("weighted_l1_gap: fields and domain do not match");
  if (!(R > 0.0) || !(beta_exp > 0.0))
    throw DomainError("weighted_l1_gap: R and beta must be positive");
  const auto w = domain.quadrature_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double d = u.values[i] - v.values[i];
    if (d < -1e-12)
      throw DomainError("weighted_l1_gap: u >= v violated at grid point " + std::to_string(i));
    const auto x = domain.coords(i);
    const double r2 = (x[0] * x[0] + x[1] * x[1]) / (R * R);
    s += w[i] * d * std::pow(1.0 + r2, -0.5 * beta_exp);
  }
  return s;
}

double gn_probe(const BasisPtr& basis, int n_fields, std::uint64_t seed) {
  const int N = basis->domain().dimension;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = 0.0;
  for (int f = 0; f < n_fields; ++f) {
    SpectralField c(basis);
    if (f == 0) {
      c.coeffs[0] = 1.0;
    } else {
      for (int j = 0; j < basis->n_modes(); ++j)
        c.coeffs[j] = normal(rng) / (1.0 + j);
    }
    const GridField u = reconstruct(c);
    const auto& w = basis->weights();
    double cube = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
      cube += w[i] * std::pow(std::abs(u.values[i]), 3);
    const double grad = std::sqrt(spectral_seminorm_sq(c, 1.0));
    const double l2 = c.l2_norm();
    const double denom = std::pow(grad, 0.5 * N) * std::pow(l2, 3.0 - 0.5 * N) + std::pow(l2, 3);
    if (denom > 0.0)
      best = std::max(best, cube / denom);
  }
  return best;
}

} // namespace fracrd
