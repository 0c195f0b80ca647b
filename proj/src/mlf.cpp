#include "fracrd/mlf.hpp"

#include "fracrd/errors.hpp"
#include "fracrd/special.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace fracrd {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

MlfQuery::MlfQuery(double a, double b, double x) : alpha(a), beta(b), z(x) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x))
    throw DomainError("mlf: non-finite input");
  if (!(a > 0.0) || a > 2.0)
    throw DomainError("mlf: alpha must lie in (0,2]");
  if (!(b > 0.0))
    throw DomainError("mlf: beta must be positive");
}

namespace detail {

namespace {

constexpr double kTaylorRadius = 1.0;
constexpr double kAsymptoticRadius = 10.0;
constexpr double kTol = 1e-16;

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

struct ContourParam {
  double mu = 0.0;
  double h = 0.0;
  double N = std::numeric_limits<double>::infinity();
};

const double kLogEps = std::log(std::numeric_limits<double>::epsilon());

// Bounded region between two singularities.
ContourParam optimal_param_rb(double t, double phi_j, double phi_j1, double pj, double qj,
                              double log_epsilon) {
  const double fac = 1.01;
  const double f_max = std::exp(log_epsilon - kLogEps);
  const double sq_phi_j = std::sqrt(phi_j);
  const double threshold = 2.0 * std::sqrt((log_epsilon - kLogEps) / t);
  const double sq_phi_j1 = std::min(std::sqrt(phi_j1), threshold - sq_phi_j);

  double sq_bar_j = 0.0, sq_bar_j1 = 0.0, f_bar = 1.0;
  bool admissible = false;

  if (pj < 1e-14 && qj < 1e-14) {
    sq_bar_j = sq_phi_j;
    sq_bar_j1 = sq_phi_j1;
    admissible = true;
  } else if (pj < 1e-14) {
    sq_bar_j = sq_phi_j;
    const double f_min = sq_phi_j > 0.0
                             ? fac * std::pow(sq_phi_j / (sq_phi_j1 - sq_phi_j), qj)
                             : fac;
    if (f_min < f_max) {
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fq = std::pow(f_bar, -1.0 / qj);
      sq_bar_j1 = (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq);
      admissible = true;
    }
  } else if (qj < 1e-14) {
    sq_bar_j1 = sq_phi_j1;
    const double f_min = fac * std::pow(sq_phi_j1 / (sq_phi_j1 - sq_phi_j), pj);
    if (f_min < f_max) {
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fp = std::pow(f_bar, -1.0 / pj);
      sq_bar_j = (2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp);
      admissible = true;
    }
  } else {
    double f_min = fac * (sq_phi_j + sq_phi_j1) /
                   std::pow(sq_phi_j1 - sq_phi_j, std::max(pj, qj));
    if (f_min < f_max) {
      f_min = std::max(f_min, 1.5);
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fp = std::pow(f_bar, -1.0 / pj);
      const double fq = std::pow(f_bar, -1.0 / qj);
      const double w = -phi_j1 * t / log_epsilon;
      const double den = 2.0 + w - (1.0 + w) * fp + fq;
      sq_bar_j = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den;
      sq_bar_j1 = (-(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1) / den;
      admissible = true;
    }
  }

  ContourParam out;
  if (!admissible)
    return out;
  log_epsilon -= std::log(f_bar);
  const double w = -sq_bar_j1 * sq_bar_j1 * t / log_epsilon;
  out.mu = std::pow(((1.0 + w) * sq_bar_j + sq_bar_j1) / (2.0 + w), 2);
  out.h = -2.0 * pi / log_epsilon * (sq_bar_j1 - sq_bar_j) /
          ((1.0 + w) * sq_bar_j + sq_bar_j1);
  out.N = std::ceil(std::sqrt(1.0 - log_epsilon / t / out.mu) / out.h);
  return out;
}

// Unbounded region to the right of the last singularity.
ContourParam optimal_param_ru(double t, double phi_j, double pj, double log_epsilon) {
  const double sq_phi_j = std::sqrt(phi_j);
  double phibar = phi_j > 0.0 ? phi_j * 1.01 : 0.01;
  double sq_phibar = std::sqrt(phibar);
  const double f_min = 1.0, f_max = 10.0, f_tar = 5.0;

  double N = 0.0, A = 0.0, sq_mu = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double phi_t = phibar * t;
    const double r = log_epsilon / phi_t;
    N = std::ceil(phi_t / pi * (1.0 - 1.5 * r + std::sqrt(1.0 - 2.0 * r)));
    A = pi * N / phi_t;
    sq_mu = sq_phibar * std::abs(4.0 - A) / std::abs(7.0 - std::sqrt(1.0 + 12.0 * A));
    const double fbar = std::pow((sq_phibar - sq_phi_j) / sq_mu, -pj);
    if (pj < 1e-14 || (f_min < fbar && fbar < f_max))
      break;
    sq_phibar = std::pow(f_tar, -1.0 / pj) * sq_mu + sq_phi_j;
    phibar = sq_phibar * sq_phibar;
  }

  ContourParam out;
  out.mu = sq_mu * sq_mu;
  out.h = (-3.0 * A - 2.0 + 2.0 * std::sqrt(1.0 + 12.0 * A)) / (4.0 - A) / N;
  out.N = N;

  const double threshold = (log_epsilon - kLogEps) / t;
  if (out.mu > threshold) {
    const double Q = std::abs(pj) < 1e-14 ? 0.0 : std::pow(f_tar, -1.0 / pj) * std::sqrt(out.mu);
    phibar = std::pow(Q + sq_phi_j, 2);
    if (phibar < threshold) {
      const double w = std::sqrt(kLogEps / (kLogEps - log_epsilon));
      const double u = std::sqrt(-phibar * t / kLogEps);
      out.mu = threshold;
      out.N = std::ceil(w * log_epsilon / 2.0 / pi / (u * w - 1.0));
      out.h = std::sqrt(kLogEps / (kLogEps - log_epsilon)) / out.N;
    } else {
      out.N = std::numeric_limits<double>::infinity();
      out.h = 0.0;
    }
  }
  return out;
}

} // namespace

MlfRegime mlf_regime(double alpha, double beta, double z) {
  if (std::abs(z) <= kTaylorRadius)
    return MlfRegime::taylor;
  if (alpha == 1.0 && beta == std::floor(beta) && beta <= 20.0)
    return MlfRegime::exponential;
  if (z < -kAsymptoticRadius) {
    double v;
    if (mlf_asymptotic(alpha, beta, z, v))
      return MlfRegime::asymptotic;
  }
  return MlfRegime::inversion;
}

double mlf_taylor(double alpha, double beta, double z) {
  if (z == 0.0)
    return rgamma(beta);
  Kahan acc;
  double zk = 1.0;
  double last = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double arg = alpha * k + beta;
    const double term = zk * rgamma(arg);
    acc.add(term);
    last = term;
    if (arg > 2.0 && std::abs(term) <= kTol * std::abs(acc.sum))
      return acc.sum;
    zk *= z;
    if (zk == 0.0)
      return acc.sum;
  }
  throw PrecisionError("mlf: power series did not converge", std::abs(last));
}

bool mlf_asymptotic(double alpha, double beta, double z, double& value) {
  if (!(z < 0.0) || alpha > 2.0)
    return false;
  // for alpha = 1 the dropped exponential term is e^z |z|^{1-beta}
  if (alpha == 1.0 && z > -40.0)
    return false;
  const double r = -z;

  double poles = 0.0;
  if (alpha > 1.0) {
    // residues at zeta and conj(zeta), zeta = r^{1/alpha} e^{i pi/alpha}
    const cplx zeta = std::polar(std::pow(r, 1.0 / alpha), pi / alpha);
    poles = 2.0 / alpha * std::real(std::pow(zeta, 1.0 - beta) * std::exp(zeta));
  }

  Kahan acc;
  double scale = std::abs(poles);
  double prev = std::numeric_limits<double>::infinity();
  int small = 0;
  double zk = 1.0;
  for (int k = 1; k <= 400; ++k) {
    zk /= z;
    const double term = -zk * rgamma(beta - alpha * k);
    if (term == 0.0)
      continue;
    const double mag = std::abs(term);
    acc.add(term);
    scale = std::max(scale, std::abs(acc.sum + poles));
    if (mag <= kTol * scale) {
      if (++small >= 2) {
        value = acc.sum + poles;
        return true;
      }
    } else {
      small = 0;
    }
    // series started to diverge before reaching precision
    if (mag > prev && k > 2 && small == 0)
      return false;
    prev = mag;
  }
  // every algebraic term vanished identically: only the poles remain
  if (acc.sum == 0.0 && prev == std::numeric_limits<double>::infinity() && alpha > 1.0) {
    value = poles;
    return true;
  }
  return false;
}

// E_{1,1} = exp and E_{1,b+1}(z) = (E_{1,b}(z) - 1/Gamma(b)) / z; used for |z| > 1 only
double mlf_exp_recurrence(double beta, double z) {
  double e = std::exp(z);
  for (int b = 1; b < static_cast<int>(beta); ++b)
    e = (e - rgamma(b)) / z;
  return e;
}

double mlf_inversion(double alpha, double beta, double z) {
  const double t = 1.0;
  double log_epsilon = std::log(1e-15);
  const double lambda = z;
  const double theta = z < 0.0 ? pi : 0.0;
  const double absl = std::abs(lambda);

  std::vector<cplx> poles;
  const int kmin = static_cast<int>(std::ceil(-alpha / 2.0 - theta / 2.0 / pi));
  const int kmax = static_cast<int>(std::floor(alpha / 2.0 - theta / 2.0 / pi));
  for (int k = kmin; k <= kmax; ++k) {
    const cplx s = std::polar(std::pow(absl, 1.0 / alpha), (theta + 2.0 * k * pi) / alpha);
    const double phi = 0.5 * (s.real() + std::abs(s));
    if (phi > 1e-15)
      poles.push_back(s);
  }
  auto phi_of = [](cplx s) { return 0.5 * (s.real() + std::abs(s)); };
  std::stable_sort(poles.begin(), poles.end(),
                   [&](cplx a, cplx b) { return phi_of(a) < phi_of(b); });

  const std::size_t J = poles.size();
  std::vector<cplx> s_star{cplx(0.0, 0.0)};
  s_star.insert(s_star.end(), poles.begin(), poles.end());
  std::vector<double> phis(J + 2);
  for (std::size_t j = 0; j <= J; ++j)
    phis[j] = phi_of(s_star[j]);
  phis[J + 1] = std::numeric_limits<double>::infinity();
  std::vector<double> p(J + 1, 1.0), q(J + 1, 1.0);
  p[0] = std::max(0.0, -2.0 * (alpha - beta + 1.0));
  q[J] = std::numeric_limits<double>::infinity();

  ContourParam best;
  std::size_t region = 0;
  for (int relax = 0; relax < 12; ++relax) {
    best = ContourParam{};
    for (std::size_t j = 0; j <= J; ++j) {
      if (!(phis[j] < (log_epsilon - kLogEps) / t && phis[j] < phis[j + 1]))
        continue;
      const ContourParam c = j < J
                                 ? optimal_param_rb(t, phis[j], phis[j + 1], p[j], q[j], log_epsilon)
                                 : optimal_param_ru(t, phis[j], p[j], log_epsilon);
      if (c.N < best.N) {
        best = c;
        region = j;
      }
    }
    if (best.N <= 200.0)
      break;
    log_epsilon += std::log(10.0);
  }
  if (!std::isfinite(best.N) || best.N > 1e6)
    throw PrecisionError("mlf: no admissible integration contour", std::exp(log_epsilon));

  const int N = static_cast<int>(best.N);
  const double mu = best.mu, h = best.h;
  auto integrand = [&](double u) {
    const cplx zz = mu * std::pow(cplx(1.0, u), 2);
    const cplx zd(-2.0 * mu * u, 2.0 * mu);
    const cplx F = std::pow(zz, alpha - beta) / (std::pow(zz, alpha) - lambda) * zd;
    return std::exp(zz * t) * F;
  };
  // the k and -k nodes are conjugate-symmetric, so only imaginary parts survive
  Kahan acc;
  acc.add(integrand(0.0).imag());
  for (int k = 1; k <= N; ++k)
    acc.add(2.0 * integrand(h * k).imag());
  double result = h * acc.sum / (2.0 * pi);

  for (std::size_t j = region + 1; j <= J; ++j) {
    const cplx s = s_star[j];
    result += std::real(1.0 / alpha * std::pow(s, 1.0 - beta) * std::exp(t * s));
  }
  return result;
}

} // namespace detail

double mlf(const MlfQuery& q) {
  using namespace detail;
  const double alpha = q.alpha, beta = q.beta, z = q.z;
  if (z > 0.0 && std::pow(z, 1.0 / alpha) > 700.0)
    throw OverflowError("mlf: result overflows for this argument");
  if (std::abs(z) <= kTaylorRadius)
    return mlf_taylor(alpha, beta, z);
  if (alpha == 1.0 && beta == std::floor(beta) && beta <= 20.0)
    return mlf_exp_recurrence(beta, z);
  if (z < -kAsymptoticRadius) {
    double v;
    if (mlf_asymptotic(alpha, beta, z, v))
      return v;
  }
  return mlf_inversion(alpha, beta, z);
}

double mlf(double alpha, double beta, double z) { return mlf(MlfQuery(alpha, beta, z)); }

double mlf_time_derivative(double alpha, double lambda, double t) {
  if (!std::isfinite(t) || !(t > 0.0))
    throw DomainError("mlf_time_derivative: t must be positive");
  if (!std::isfinite(lambda))
    throw DomainError("mlf_time_derivative: non-finite lambda");
  const double ta = std::pow(t, alpha);
  return -lambda * ta / t * mlf(alpha, alpha, -lambda * ta);
}

} // namespace fracrd
