#include "fracrd/errors.hpp"
#include "fracrd/mlf.hpp"
#include "fracrd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace fracrd {

namespace {

std::vector<double> mode_rates(const EigenBasis& basis, double s) {
  std::vector<double> lam(basis.n_modes());
  for (int j = 0; j < basis.n_modes(); ++j)
    lam[j] = std::pow(basis.lambdas()[j], s);
  return lam;
}

// Shared bookkeeping at the start of a step. Returns false if stepping has halted.
bool begin_step(Trajectory& t, double dt, Scheme scheme, const ModelParams& p) {
  if (t.empty())
    throw DomainError("step: empty trajectory");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw DomainError("step: dt must be positive");
  if (t.blown_up)
    return false;
  auto& sc = t.scratch;
  if (sc.scheme && *sc.scheme != scheme)
    throw PreconditionError(std::string("step: trajectory was advanced by the ") +
                            scheme_name(*sc.scheme) + " scheme");
  if (sc.scheme && (sc.alpha != p.alpha || sc.s != p.s))
    throw PreconditionError("step: model orders changed mid-trajectory");
  if (!sc.scheme) {
    sc.scheme = scheme;
    sc.alpha = p.alpha;
    sc.s = p.s;
    sc.l1 = detail::L1Start(p.alpha);
  }
  if (sc.dt == 0.0 && t.size() == 1)
    sc.dt = dt;
  else if (std::abs(dt - sc.dt) > 1e-12 * sc.dt)
    sc.uniform = false;
  return true;
}

void finish_step(Trajectory& t, double dt, std::vector<double> c) {
  const double t_new = t.times.back() + dt;
  bool finite = true;
  for (double v : c)
    finite = finite && std::isfinite(v);
  const SpectralField f(t.basis, c);
  t.times.push_back(t_new);
  t.states.push_back(std::move(c));
  t.norms.push_back(grid_norms(reconstruct(f)));
  if (!finite || !std::isfinite(t.norms.back().linf))
    t.blown_up = true;
  auto& sc = t.scratch;
  const std::size_t M = t.basis->n_modes();
  const auto& prev = t.states[t.size() - 2];
  const auto& cur = t.states.back();
  for (std::size_t j = 0; j < M; ++j)
    sc.dc.push_back(cur[j] - prev[j]);
}

void ensure_history(Trajectory& t, const ModelParams& p, const KernelSpec& J) {
  while (t.history.size() < t.size())
    t.history.push_back(reaction_coeffs(t.state(t.history.size()), p, J));
}

// Weights of the L1 discretisation on a nonuniform grid at the new node t_{n+1}:
// D^alpha c(t_{n+1}) ~ sum_{i<=n} d_i (c_{i+1} - c_i).
std::vector<double> l1_weights(const Trajectory& t, double dt, double alpha) {
  const std::size_t n = t.size() - 1;
  std::vector<double> d(n + 1);
  const double g = std::tgamma(2.0 - alpha);
  const double t_new = t.times.back() + dt;
  auto pw = [alpha](double x) { return x > 0.0 ? std::pow(x, 1.0 - alpha) : 0.0; };
  for (std::size_t i = 0; i <= n; ++i) {
    const double ti = t.times[i];
    const double ti1 = i < n ? t.times[i + 1] : t_new;
    d[i] = (pw(t_new - ti) - pw(t_new - ti1)) / (g * (ti1 - ti));
  }
  return d;
}

using ExplicitFn = std::function<std::vector<double>(const SpectralField&)>;

// Nodes 1..Q of a uniform run solved together, so that the starting weights
// can reference values ahead of the current node. The explicit term is
// lagged one node and resolved by fixed-point iteration over the block.
void l1_start_block(Trajectory& t, double dt, const std::vector<double>& lam,
                    const std::vector<double>& F0, const ExplicitFn& explicit_at) {
  auto& L = t.scratch.l1;
  const int Q = L.order();
  const std::size_t M = lam.size();
  const double alpha = L.alpha();
  const double ha = std::pow(dt, -alpha);
  const double a0 = ha / std::tgamma(2.0 - alpha);
  const auto& c0 = t.states.front();

  // A[(m-1)*Q + k-1]: coefficient of x_k = c_k - c_0 in the equation at node m, without Lambda
  std::vector<double> A(Q * Q, 0.0);
  for (int m = 1; m <= Q; ++m) {
    double* row = A.data() + (m - 1) * Q;
    for (int i = 0; i < m; ++i) {
      const double c = a0 * L.b(m - 1 - i);
      row[i] += c;
      if (i >= 1)
        row[i - 1] -= c;
    }
    const double* w = L.weights(m);
    for (int q = 0; q < Q; ++q)
      row[q] += ha * w[q];
  }

  std::vector<std::vector<double>> F(Q, F0);
  std::vector<std::vector<double>> x(Q, std::vector<double>(M, 0.0));
  for (int it = 0; it < 50; ++it) {
    double change = 0.0, scale = 1.0;
    for (std::size_t j = 0; j < M; ++j) {
      std::vector<double> Aj = A, r(Q);
      for (int m = 0; m < Q; ++m) {
        Aj[m * Q + m] += lam[j];
        r[m] = F[m][j] - lam[j] * c0[j];
      }
      detail::solve_dense(std::move(Aj), r, Q);
      for (int m = 0; m < Q; ++m) {
        change = std::max(change, std::abs(r[m] - x[m][j]));
        scale = std::max(scale, std::abs(r[m] + c0[j]));
        x[m][j] = r[m];
      }
    }
    if (!std::isfinite(change) || change <= 1e-14 * scale || Q == 1)
      break;
    for (int m = 1; m < Q; ++m) {
      std::vector<double> c(M);
      for (std::size_t j = 0; j < M; ++j)
        c[j] = c0[j] + x[m - 1][j];
      F[m] = explicit_at(SpectralField(t.basis, c));
    }
  }
  auto& blk = t.scratch.start_block;
  blk.assign(Q, std::vector<double>(M));
  for (int m = 0; m < Q; ++m)
    for (std::size_t j = 0; j < M; ++j)
      blk[m][j] = c0[j] + x[m][j];
}

// Shared L1 update with the diffusion implicit and `rhs` explicit. The
// implicit operator is diag(lambda_j^s) unless a dense M x M matrix K is given;
// starting weights are only used with the diagonal operator.
std::vector<double> l1_update(Trajectory& t, double dt, const ModelParams& p,
                              const std::vector<double>& rhs, const ExplicitFn& explicit_at,
                              const std::vector<double>* K = nullptr) {
  auto& sc = t.scratch;
  const std::size_t M = t.basis->n_modes();
  const std::size_t n = t.size() - 1;
  const auto lam = mode_rates(*t.basis, p.s);
  const int Q = sc.uniform && !K ? sc.l1.order() : 0;

  if (Q > 0 && n < static_cast<std::size_t>(Q)) {
    if (n == 0)
      l1_start_block(t, dt, lam, rhs, explicit_at);
    if (sc.start_block.size() > n)
      return sc.start_block[n];
  }

  std::vector<double> d;
  if (sc.uniform) {
    const double a0 = std::pow(dt, -p.alpha) / std::tgamma(2.0 - p.alpha);
    d.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
      d[i] = a0 * sc.l1.b(static_cast<int>(n - i));
  } else {
    d = l1_weights(t, dt, p.alpha);
  }

  std::vector<double> hist(M, 0.0);
  const double* dc = sc.dc.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = d[i];
    const double* row = dc + i * M;
    for (std::size_t j = 0; j < M; ++j)
      hist[j] += w * row[j];
  }
  if (Q > 0 && n >= static_cast<std::size_t>(Q)) {
    const double ha = std::pow(dt, -p.alpha);
    const double* w = sc.l1.weights(static_cast<int>(n + 1));
    const auto& c0 = t.states.front();
    for (int q = 1; q <= Q; ++q) {
      const auto& cq = t.states[q];
      for (std::size_t j = 0; j < M; ++j)
        hist[j] += ha * w[q - 1] * (cq[j] - c0[j]);
    }
  }

  const auto& cn = t.states.back();
  std::vector<double> c(M);
  for (std::size_t j = 0; j < M; ++j)
    c[j] = d[n] * cn[j] - hist[j] + rhs[j];
  if (K) {
    std::vector<double> A = *K;
    for (std::size_t j = 0; j < M; ++j)
      A[j * M + j] += d[n];
    detail::solve_dense(std::move(A), c, static_cast<int>(M));
    return c;
  }
  for (std::size_t j = 0; j < M; ++j)
    c[j] /= d[n] + lam[j];
  return c;
}

} // namespace

void step_l1(Trajectory& t, double dt, const ModelParams& p, const KernelSpec& J) {
  if (!begin_step(t, dt, Scheme::l1, p))
    return;
  ensure_history(t, p, J);
  auto c = l1_update(t, dt, p, t.history.back(), [&](const SpectralField& u) {
    return reaction_coeffs(u, p, J);
  });
  finish_step(t, dt, std::move(c));
  if (!t.blown_up)
    ensure_history(t, p, J);
}

void step_mild(Trajectory& t, double dt, const ModelParams& p, const KernelSpec& J) {
  if (!begin_step(t, dt, Scheme::mild, p))
    return;
  ensure_history(t, p, J);
  auto& sc = t.scratch;
  const std::size_t M = t.basis->n_modes();
  const std::size_t n = t.size() - 1;
  const auto lam = mode_rates(*t.basis, p.s);
  const double alpha = p.alpha;
  const double t_new = t.times.back() + dt;

  // W[i*M + j]: integral of the resolvent kernel over segment i for mode j
  std::vector<double> W((n + 1) * M);
  std::vector<double> U(M);
  if (sc.uniform) {
    while (sc.lag_e.size() < (n + 2) * M) {
      const double l = static_cast<double>(sc.lag_e.size() / M);
      const double ta = std::pow(l * sc.dt, alpha);
      for (std::size_t j = 0; j < M; ++j)
        sc.lag_e.push_back(l == 0.0 ? 1.0 : mlf(alpha, 1.0, -lam[j] * ta));
    }
    for (std::size_t i = 0; i <= n; ++i) {
      const std::size_t l = n - i;
      for (std::size_t j = 0; j < M; ++j)
        W[i * M + j] = (sc.lag_e[l * M + j] - sc.lag_e[(l + 1) * M + j]) / lam[j];
    }
    for (std::size_t j = 0; j < M; ++j)
      U[j] = sc.lag_e[(n + 1) * M + j];
  } else {
    std::vector<double> e_prev(M);
    for (std::size_t j = 0; j < M; ++j)
      e_prev[j] = mlf(alpha, 1.0, -lam[j] * std::pow(t_new, alpha));
    U = e_prev;
    for (std::size_t i = 0; i <= n; ++i) {
      const double r = t_new - (i < n ? t.times[i + 1] : t_new);
      const double ra = std::pow(r, alpha);
      for (std::size_t j = 0; j < M; ++j) {
        const double e = r > 0.0 ? mlf(alpha, 1.0, -lam[j] * ra) : 1.0;
        W[i * M + j] = (e - e_prev[j]) / lam[j];
        e_prev[j] = e;
      }
    }
  }

  const auto& c0 = t.states.front();
  std::vector<double> base(M);
  for (std::size_t j = 0; j < M; ++j)
    base[j] = U[j] * c0[j];
  for (std::size_t i = 0; i < n; ++i) {
    const double* w = W.data() + i * M;
    const double* f = sc.fbar.data() + i * M;
    for (std::size_t j = 0; j < M; ++j)
      base[j] += w[j] * f[j];
  }

  const std::vector<double> Fn = t.history.back();
  const double* wl = W.data() + n * M;
  std::vector<double> c(M);
  for (std::size_t j = 0; j < M; ++j)
    c[j] = base[j] + wl[j] * Fn[j];
  const auto Fp = reaction_coeffs(SpectralField(t.basis, c), p, J);
  for (std::size_t j = 0; j < M; ++j)
    c[j] = base[j] + wl[j] * 0.5 * (Fn[j] + Fp[j]);

  finish_step(t, dt, std::move(c));
  if (t.blown_up)
    return;
  ensure_history(t, p, J);
  const auto& F1 = t.history.back();
  for (std::size_t j = 0; j < M; ++j)
    sc.fbar.push_back(0.5 * (Fn[j] + F1[j]));
}

namespace {

constexpr double kSecantCap = 1e8;

// Reaction of the porous-medium variant, u^2 (1 - int u) - u, projected.
std::vector<double> pme_reaction(const SpectralField& c) {
  const GridField u = reconstruct(c);
  const double mass = u.integral();
  GridField f(u.domain);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double v = u.values[i];
    f.values[i] = v * v * (1.0 - mass) - v;
  }
  return project(f, c.basis).coeffs;
}

// Lambda G with G_jk = int b(u) Phi_j Phi_k and the secant diffusivity
// b = (u^+)^{m-1}, so that G c is the projection of (u^+)^m. Negative values
// get b = 0, which is the clipping of the power, and are counted.
std::vector<double> pme_operator(const SpectralField& c, const ModelParams& p, std::size_t& clipped) {
  const EigenBasis& B = *c.basis;
  const GridField u = reconstruct(c);
  const double m = *p.m;
  const auto& w = B.weights();
  const std::size_t M = B.n_modes();
  std::vector<double> wb(u.values.size(), 0.0);
  for (std::size_t i = 0; i < wb.size(); ++i) {
    const double v = u.values[i];
    if (v < 0.0)
      ++clipped;
    else if (v > 0.0)
      wb[i] = w[i] * std::min(kSecantCap, std::pow(v, m - 1.0));
  }
  const auto lam = mode_rates(B, p.s);
  std::vector<double> K(M * M);
  for (std::size_t j = 0; j < M; ++j) {
    const double* pj = B.mode(static_cast<int>(j));
    for (std::size_t k = j; k < M; ++k) {
      const double* pk = B.mode(static_cast<int>(k));
      double g = 0.0;
      for (std::size_t i = 0; i < wb.size(); ++i)
        g += wb[i] * pj[i] * pk[i];
      K[j * M + k] = g;
      K[k * M + j] = g;
    }
  }
  for (std::size_t j = 0; j < M; ++j)
    for (std::size_t k = 0; k < M; ++k)
      K[j * M + k] *= lam[j];
  return K;
}

} // namespace

double pme_stable_dt(const Trajectory& t, const ModelParams& p) {
  if (!p.m)
    throw DomainError("m: required by the pme scheme");
  // Lipschitz bound of the explicit reaction u^2 (1 - int u) - u at the
  // current state: |2u(1 - int u) - 1| pointwise plus u^2 |Omega| from the mass
  const GridField u = reconstruct(t.back());
  const double mass = u.integral();
  const double vol = u.domain.measure();
  double L = 0.0;
  for (double v : u.values)
    L = std::max(L, std::abs(2.0 * v * (1.0 - mass) - 1.0) + v * v * vol);
  // frozen-coefficient amplification (d - L) / (d + lambda) stays in [-1, 1] while L <= 2 d
  return std::pow(0.5 * L * std::tgamma(2.0 - p.alpha), -1.0 / p.alpha);
}

void step_pme(Trajectory& t, double dt, const ModelParams& p) {
  if (!p.m)
    throw DomainError("m: required by the pme scheme");
  if (!begin_step(t, dt, Scheme::pme, p))
    return;
  const double dt_max = pme_stable_dt(t, p);
  if (dt > dt_max)
    throw StepSizeError("step_pme: dt exceeds the explicit stability estimate", dt_max);
  const auto rhs = pme_reaction(t.back());
  std::vector<double> c;
  if (*p.m == 1.0) {
    c = l1_update(t, dt, p, rhs, pme_reaction);
  } else {
    std::size_t clipped = 0;
    const auto K = pme_operator(t.back(), p, clipped);
    t.clip_count += clipped;
    t.clip_samples += t.basis->domain().size();
    c = l1_update(t, dt, p, rhs, pme_reaction, &K);
  }
  finish_step(t, dt, std::move(c));
}

} // namespace fracrd
