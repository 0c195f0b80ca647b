#include "fracrd/ineq.hpp"

#include "fracrd/errors.hpp"
#include "fracrd/l1_start.hpp"
#include "fracrd/mlf.hpp"
#include "fracrd/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"

namespace fracrd {

using json = nlohmann::ordered_json;

void CaputoIvp::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("caputo_solve: alpha must lie in (0, 1]");
  if (!(T > 0.0) || !std::isfinite(T))
    throw DomainError("caputo_solve: T must be positive");
  if (n < 16)
    throw DomainError("caputo_solve: n must be at least 16");
  if (!std::isfinite(y0))
    throw DomainError("caputo_solve: y0 must be finite");
  if (!rhs)
    throw DomainError("caputo_solve: rhs is empty");
}

namespace {

constexpr double kFixedTol = 1e-13;
constexpr int kFixedIter = 50;

// Root of y = P + Q f(t, y) continuing the branch through the previous value.
bool solve_node(const std::function<double(double, double)>& f, double t, double P, double Q,
                double guess, double& y) {
  y = guess;
  for (int it = 0; it < kFixedIter; ++it) {
    const double next = P + Q * f(t, y);
    if (!std::isfinite(next))
      break;
    const bool done = std::abs(next - y) <= kFixedTol * std::max(1.0, std::abs(next));
    y = next;
    if (done)
      return true;
  }
  // Newton fallback; accept only a root on the increasing branch of G
  y = guess;
  for (int it = 0; it < kFixedIter; ++it) {
    const double G = y - P - Q * f(t, y);
    const double h = 1e-7 * std::max(1.0, std::abs(y));
    const double dG = 1.0 - Q * (f(t, y + h) - f(t, y - h)) / (2.0 * h);
    if (!std::isfinite(G) || !std::isfinite(dG) || dG <= 0.0)
      return false;
    const double step = G / dG;
    y -= step;
    if (!std::isfinite(y))
      return false;
    if (std::abs(step) <= kFixedTol * std::max(1.0, std::abs(y)))
      return true;
  }
  return false;
}

double frac_integral_factor(double alpha, double T) {
  return std::pow(T, alpha) / (alpha * gamma_fn(alpha));
}

Verdict make_verdict(const std::string& lemma, json params, double max_violation, double slack) {
  Verdict v;
  v.lemma = lemma;
  v.params = params.dump();
  v.max_violation = max_violation;
  v.slack = slack;
  v.pass = max_violation <= slack;
  return v;
}

// Piecewise-linear interpolation of nodal samples on a uniform grid.
double interp(const std::vector<double>& f, double h, double t) {
  const double x = t / h;
  const std::size_t i = std::min(f.size() - 2, static_cast<std::size_t>(std::max(0.0, std::floor(x))));
  const double w = x - static_cast<double>(i);
  return (1.0 - w) * f[i] + w * f[i + 1];
}

} // namespace

namespace {

// Newton on the coupled equations of nodes 1..Q (see L1Start).
bool start_block(const CaputoIvp& p, detail::L1Start& L, double h, std::vector<double>& y) {
  const int Q = L.order();
  const double ha = std::pow(h, -p.alpha);
  const double a0 = ha / gamma_fn(2.0 - p.alpha);
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
  std::vector<double> x(Q, 0.0);
  for (int it = 0; it < kFixedIter; ++it) {
    std::vector<double> G(Q), Jm = A;
    double scale = 1.0;
    for (int m = 0; m < Q; ++m) {
      double s = 0.0;
      for (int k = 0; k < Q; ++k)
        s += A[m * Q + k] * x[k];
      const double t = (m + 1) * h;
      const double yv = p.y0 + x[m];
      const double dy = 1e-7 * std::max(1.0, std::abs(yv));
      G[m] = -(s - p.rhs(t, yv));
      Jm[m * Q + m] -= (p.rhs(t, yv + dy) - p.rhs(t, yv - dy)) / (2.0 * dy);
      scale = std::max(scale, std::abs(yv));
    }
    detail::solve_dense(std::move(Jm), G, Q);
    double step = 0.0;
    for (int m = 0; m < Q; ++m) {
      x[m] += G[m];
      step = std::max(step, std::abs(G[m]));
    }
    if (!std::isfinite(step))
      return false;
    if (step <= kFixedTol * scale) {
      for (int m = 0; m < Q; ++m)
        y.push_back(p.y0 + x[m]);
      return true;
    }
  }
  return false;
}

} // namespace

ScalarTrajectory caputo_solve(const CaputoIvp& p) {
  p.validate();
  const int n = p.n;
  const double h = p.T / n;
  ScalarTrajectory out;
  out.t.reserve(n + 1);
  out.y.reserve(n + 1);
  out.t.push_back(0.0);
  out.y.push_back(p.y0);
  auto stop_at = [&](double t) {
    out.stopped = true;
    out.t_stop = t;
  };
  if (p.stop_above && p.y0 > *p.stop_above) {
    stop_at(0.0);
    return out;
  }

  const bool classical = p.alpha == 1.0;
  detail::L1Start L(p.alpha, p.corrected);
  const int Q = L.order();
  const double ha = std::pow(h, -p.alpha);
  const double a0 = classical ? 0.0 : ha / gamma_fn(2.0 - p.alpha);
  double f_prev = p.rhs(0.0, p.y0);

  int start = 0;
  if (Q > 0) {
    std::vector<double> blk;
    if (!start_block(p, L, h, blk)) {
      if (p.stop_above) {
        stop_at(h);
        return out;
      }
      throw StiffnessError("caputo_solve: starting block did not converge");
    }
    for (int m = 0; m < Q && m < n; ++m) {
      out.t.push_back((m + 1) * h);
      out.y.push_back(blk[m]);
      if (p.stop_above && blk[m] > *p.stop_above) {
        stop_at((m + 1) * h);
        return out;
      }
    }
    start = std::min(Q, n);
  }

  for (int step = start; step < n; ++step) {
    const double t_new = (step + 1) * h;
    const double yn = out.y.back();
    double P, Qc;
    if (classical) {
      // Crank-Nicolson
      P = yn + 0.5 * h * f_prev;
      Qc = 0.5 * h;
    } else {
      double hist = 0.0;
      for (int i = 0; i < step; ++i)
        hist += L.b(step - i) * (out.y[i + 1] - out.y[i]);
      hist *= a0;
      if (Q > 0) {
        const double* w = L.weights(step + 1);
        for (int q = 1; q <= Q; ++q)
          hist += ha * w[q - 1] * (out.y[q] - out.y[0]);
      }
      P = yn - hist / a0;
      Qc = 1.0 / a0;
    }
    double y;
    if (!solve_node(p.rhs, t_new, P, Qc, yn, y)) {
      if (p.stop_above) {
        stop_at(t_new);
        return out;
      }
      throw StiffnessError("caputo_solve: nodal equation did not converge at t = " +
                           std::to_string(t_new));
    }
    out.t.push_back(t_new);
    out.y.push_back(y);
    if (classical)
      f_prev = p.rhs(t_new, y);
    if (p.stop_above && y > *p.stop_above) {
      stop_at(t_new);
      return out;
    }
  }
  return out;
}

RiccatiResult riccati_volterra(double alpha, double w0, double T, int n, double cap) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("riccati_volterra: alpha must lie in (0, 1]");
  if (!(w0 >= 0.0) || !std::isfinite(w0))
    throw DomainError("riccati_volterra: w0 must be nonnegative");
  if (!(T > 0.0) || n < 16)
    throw DomainError("riccati_volterra: need T > 0 and n >= 16");
  const double h = T / n;
  RiccatiResult res;
  auto& tr = res.traj;
  tr.t.push_back(0.0);
  tr.y.push_back(w0);

  // e[l] = E_alpha((l h)^alpha); the kernel mass over a segment at lag l is e[l+1] - e[l]
  std::vector<double> e;
  e.reserve(n + 1);
  for (int l = 0; l <= n; ++l) {
    try {
      e.push_back(mlf(alpha, 1.0, std::pow(l * h, alpha)));
    } catch (const OverflowError&) {
      break;
    }
  }

  std::vector<double> sq;  // w_i^2 for i >= 1
  sq.reserve(n);
  for (int step = 1; step <= n; ++step) {
    if (step >= static_cast<int>(e.size())) {
      res.conclusive = false;
      return res;
    }
    double R = e[step] * w0;
    // right-endpoint rectangle: segment [t_i, t_{i+1}] carries w_{i+1}^2
    for (int i = 0; i + 1 < step; ++i)
      R += (e[step - i] - e[step - i - 1]) * sq[i];
    const double K0 = e[1] - e[0];
    // Picard iteration on the nodal equation w = R + K0 w^2
    double w = tr.y.back();
    bool converged = false;
    for (int it = 0; it < 200 && std::isfinite(w) && w <= cap; ++it) {
      const double next = R + K0 * w * w;
      converged = std::abs(next - w) <= 1e-14 * std::max(1.0, next);
      w = next;
      if (converged)
        break;
    }
    if (!converged) {
      const double disc = 1.0 - 4.0 * K0 * R;
      if (disc < 0.0) {
        res.t_blow = step * h;
        res.conclusive = true;
        tr.stopped = true;
        tr.t_stop = res.t_blow;
        return res;
      }
      w = 2.0 * R / (1.0 + std::sqrt(disc));
    }
    tr.t.push_back(step * h);
    tr.y.push_back(w);
    sq.push_back(w * w);
    if (w > cap) {
      res.t_blow = step * h;
      res.conclusive = true;
      tr.stopped = true;
      tr.t_stop = res.t_blow;
      return res;
    }
  }
  res.conclusive = true;
  return res;
}

std::string Verdict::to_json() const {
  json j;
  j["lemma"] = lemma;
  j["params"] = json::parse(params.empty() ? "{}" : params);
  j["max_violation"] = std::isfinite(max_violation) ? json(max_violation) : json(nullptr);
  j["pass"] = pass;
  return j.dump();
}

Verdict verify_gronwall_const(double alpha, double c1, double b, double y0, double T, int n) {
  if (!(c1 > 0.0) || !(b >= 0.0) || !(y0 >= 0.0))
    throw DomainError("verify_gronwall_const: need c1 > 0, b >= 0, y0 >= 0");
  CaputoIvp ivp;
  ivp.alpha = alpha;
  ivp.rhs = [c1, b](double, double y) { return -c1 * y + b; };
  ivp.y0 = y0;
  ivp.T = T;
  ivp.n = n;
  const auto tr = caputo_solve(ivp);
  const double bound = y0 + b * frac_integral_factor(alpha, T);
  double viol = -std::numeric_limits<double>::infinity();
  for (double y : tr.y)
    viol = std::max(viol, y - bound);
  json params = {{"alpha", alpha}, {"c1", c1}, {"b", b}, {"y0", y0}, {"T", T}, {"n", n}};
  return make_verdict("gronwall_const", params, viol, 1e-8);
}

Verdict verify_gronwall_var(double alpha, double c1, const std::vector<double>& f, double y0,
                            double T, int n) {
  if (static_cast<int>(f.size()) != n + 1)
    throw DomainError("verify_gronwall_var: f must hold n+1 samples");
  for (double v : f)
    if (!(v >= 0.0))
      throw DomainError("verify_gronwall_var: f must be nonnegative");
  if (!(c1 >= 0.0))
    throw DomainError("verify_gronwall_var: c1 must be nonnegative");
  const double h = T / n;
  CaputoIvp ivp;
  ivp.alpha = alpha;
  ivp.rhs = [c1, &f, h](double t, double y) { return -c1 * y + interp(f, h, t); };
  ivp.y0 = y0;
  ivp.T = T;
  ivp.n = n;
  const auto tr = caputo_solve(ivp);

  // (1/Gamma(a)) int_0^t (t-s)^{a-1} f(s) ds with f linear on each segment
  const double ga = gamma_fn(alpha + 1.0);
  const double ga2 = gamma_fn(alpha + 2.0);
  std::vector<double> P(n + 1), Qw(n + 1);
  for (int l = 0; l <= n; ++l) {
    const double x = l;
    P[l] = std::pow(x, alpha);
    Qw[l] = std::pow(x, alpha + 1.0);
  }
  double viol = -std::numeric_limits<double>::infinity();
  for (int m = 0; m <= n; ++m) {
    double I = 0.0;
    for (int i = 0; i < m; ++i) {
      // lags: segment [t_i, t_{i+1}] sits at distance m-i-1 .. m-i from t_m
      const int hi = m - i, lo = m - i - 1;
      const double mass = (P[hi] - P[lo]) / ga;
      // first moment against (s - t_i)/h
      const double mom = hi * (P[hi] - P[lo]) / ga + alpha * (Qw[lo] - Qw[hi]) / ga2;
      I += f[i] * mass + (f[i + 1] - f[i]) * mom;
    }
    I *= std::pow(h, alpha);
    viol = std::max(viol, tr.y[m] - (y0 + I));
  }
  json params = {{"alpha", alpha}, {"c1", c1}, {"y0", y0}, {"T", T}, {"n", n}};
  return make_verdict("gronwall_var", params, viol, 1e-6);
}

double power_inequality_bound(const PowerLemmaParams& p, double t) {
  const double k = p.k_exp, m = p.m_exp;
  const double c = frac_integral_factor(p.alpha, p.T);
  const double lam = -(m - k) / std::pow(p.eps, (1.0 - k) / (m - k)) - p.beta_c * (1.0 - k);
  const double bracket = (lam * std::pow(p.y0, 1.0 - k) + (p.c4 - p.a_c) * (1.0 - k)) * c;
  // a negative bracket has no real (1-k)-th root; it contributes nothing
  const double second = std::pow(std::max(bracket, 0.0), 1.0 / (1.0 - k));
  const double b = p.b_fn(t);
  const double third = std::pow(1.0 - m, 1.0 / (1.0 - k)) * std::pow(p.eps, 1.0 / (1.0 - m)) *
                       std::pow(c, 1.0 / (1.0 - k)) * std::pow(b, 1.0 / (1.0 - m));
  return p.y0 + second + third;
}

Verdict verify_power_inequality(const PowerLemmaParams& p) {
  if (!(p.k_exp > 0.0 && p.k_exp < p.m_exp && p.m_exp < 1.0))
    throw DomainError("verify_power_inequality: need 0 < k < m < 1");
  if (!(p.alpha > 0.0 && p.alpha <= 1.0))
    throw DomainError("verify_power_inequality: alpha must lie in (0, 1]");
  if (!(p.eps > 0.0) || !(p.a_c >= 0.0) || !(p.beta_c >= 0.0) || !(p.c4 >= 0.0) || !(p.y0 >= 0.0))
    throw DomainError("verify_power_inequality: eps > 0 and nonnegative coefficients required");
  if (!p.b_fn)
    throw DomainError("verify_power_inequality: b_fn is empty");
  CaputoIvp ivp;
  ivp.alpha = p.alpha;
  ivp.rhs = [&p](double t, double y) {
    const double yp = std::max(y, 0.0);
    return -p.a_c * std::pow(yp, p.k_exp) - p.beta_c * y + p.b_fn(t) * std::pow(yp, p.m_exp) + p.c4;
  };
  ivp.y0 = p.y0;
  ivp.T = p.T;
  ivp.n = p.n;
  const auto tr = caputo_solve(ivp);
  double viol = -std::numeric_limits<double>::infinity();
  double y_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tr.y.size(); ++i) {
    viol = std::max(viol, tr.y[i] - power_inequality_bound(p, tr.t[i]));
    y_min = std::min(y_min, tr.y[i]);
  }
  json params = {{"alpha", p.alpha}, {"k", p.k_exp}, {"m", p.m_exp}, {"a_c", p.a_c},
                 {"b0", p.b_fn(0.0)}, {"beta", p.beta_c}, {"c4", p.c4}, {"eps", p.eps},
                 {"y0", p.y0}, {"T", p.T}, {"n", p.n}, {"y_min", y_min}};
  return make_verdict("power_inequality", params, viol, 1e-4);
}

double moser_bound(int k, double a_bar, double r, double K, double y0_sup, double alpha, double T) {
  if (k < 0 || !(a_bar > 0.0) || !(r >= 0.0) || !(K >= 1.0) || !(y0_sup >= 0.0))
    throw DomainError("moser_bound: need k >= 0, a_bar > 0, r >= 0, K >= 1, y0_sup >= 0");
  const double p3 = std::pow(3.0, k);
  const double log_b = 0.5 * (p3 - 1.0) * std::log(2.0 * a_bar) +
                       r * (3.0 * p3 / 4.0 - 0.5 * k - 0.75) * std::log(3.0) +
                       p3 * std::log(std::max(y0_sup, K)) + std::log(frac_integral_factor(alpha, T));
  if (log_b > std::log(std::numeric_limits<double>::max()))
    return std::numeric_limits<double>::infinity();
  return std::exp(log_b);
}

double moser_iterated_bound(int k, double a_bar, double r, double K, double y0_sup, double alpha,
                            double T) {
  if (k < 0)
    throw DomainError("moser_iterated_bound: k must be nonnegative");
  const double c = frac_integral_factor(alpha, T);
  double B = std::max(y0_sup, K) * c;
  if (k == 0)
    return B;
  B = std::max(y0_sup, K);
  for (int j = 1; j <= k; ++j) {
    const double aj = a_bar * std::pow(3.0, r * j);
    B = c * 2.0 * aj * std::max(std::pow(K, std::pow(3.0, j)), B * B * B);
  }
  return B;
}

Verdict verify_moser(const MoserCheckParams& p) {
  if (p.k_max < 1 || p.k_max > 3)
    throw DomainError("verify_moser: k_max must lie in 1..3");
  if (!(p.gamma2 > 0.0 && p.gamma2 < p.gamma1 && p.gamma1 <= 3.0))
    throw DomainError("verify_moser: need 0 < gamma2 < gamma1 <= 3");
  const double h = p.T / p.n;
  std::vector<double> prev(p.n + 1, p.y0_sup);
  double viol = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= p.k_max; ++k) {
    const double ak = p.a_bar * std::pow(3.0, p.r * k);
    CaputoIvp ivp;
    ivp.alpha = p.alpha;
    ivp.rhs = [&prev, h, ak, &p](double t, double y) {
      const double u = std::max(interp(prev, h, t), 0.0);
      return -y + ak * (std::pow(u, p.gamma1) + std::pow(u, p.gamma2));
    };
    ivp.y0 = std::pow(p.K, std::pow(3.0, k));
    ivp.T = p.T;
    ivp.n = p.n;
    const auto tr = caputo_solve(ivp);
    const double bound = moser_bound(k, p.a_bar, p.r, p.K, p.y0_sup, p.alpha, p.T);
    for (double y : tr.y)
      viol = std::max(viol, (y - bound) / bound);
    prev = tr.y;
  }
  json params = {{"k_max", p.k_max}, {"a_bar", p.a_bar}, {"r", p.r}, {"K", p.K},
                 {"y0_sup", p.y0_sup}, {"gamma1", p.gamma1}, {"gamma2", p.gamma2},
                 {"alpha", p.alpha}, {"T", p.T}, {"n", p.n}};
  return make_verdict("moser", params, viol, 1e-9);
}

namespace {

double uni(std::mt19937_64& g, double lo, double hi) {
  // own mapping so draws do not depend on the library's distribution code
  const double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

} // namespace

std::vector<Verdict> sweep_gronwall_const(int draws, std::uint64_t seed, int n) {
  std::mt19937_64 g(seed);
  std::vector<Verdict> out;
  for (int i = 0; i < draws; ++i) {
    const double alpha = uni(g, 0.1, 1.0);
    const double c1 = uni(g, 1e-3, 5.0);
    const double b = uni(g, 1e-3, 5.0);
    const double y0 = uni(g, 1e-3, 5.0);
    const double T = uni(g, 0.1, 2.0);
    out.push_back(verify_gronwall_const(alpha, c1, b, y0, T, n));
  }
  return out;
}

std::vector<Verdict> sweep_gronwall_var(int draws, std::uint64_t seed, int n) {
  std::mt19937_64 g(seed);
  std::vector<Verdict> out;
  for (int i = 0; i < draws; ++i) {
    const double alpha = uni(g, 0.1, 1.0);
    const double c1 = uni(g, 1e-3, 5.0);
    const double y0 = uni(g, 0.0, 5.0);
    const double T = uni(g, 0.1, 2.0);
    const double a0 = uni(g, 0.0, 2.0), a1 = uni(g, 0.0, 2.0), a2 = uni(g, 0.0, 2.0);
    const double om = uni(g, 0.5, 10.0), ph = uni(g, 0.0, 6.28);
    std::vector<double> f(n + 1);
    for (int j = 0; j <= n; ++j) {
      const double t = T * j / n;
      const double sn = std::sin(om * t + ph);
      f[j] = a0 + a1 * sn * sn + a2 * t;
    }
    out.push_back(verify_gronwall_var(alpha, c1, f, y0, T, n));
  }
  return out;
}

std::vector<Verdict> sweep_power_inequality(int draws, std::uint64_t seed, int n) {
  std::mt19937_64 g(seed);
  std::vector<Verdict> out;
  for (int i = 0; i < draws; ++i) {
    PowerLemmaParams p;
    p.alpha = uni(g, 0.2, 1.0);
    p.k_exp = uni(g, 0.05, 0.85);
    p.m_exp = uni(g, p.k_exp + 0.05, 0.95);
    p.a_c = uni(g, 0.0, 2.0);
    p.beta_c = uni(g, 0.0, 2.0);
    const double b = uni(g, 0.0, 2.0);
    p.b_fn = [b](double) { return b; };
    // keeps y >= 1 along the solution, which the lemma's proof uses
    p.c4 = p.a_c + p.beta_c + uni(g, 0.0, 2.0);
    p.eps = uni(g, 0.2, 2.0);
    p.y0 = uni(g, 1.0, 3.0);
    p.T = uni(g, 0.2, 2.0);
    p.n = n;
    out.push_back(verify_power_inequality(p));
  }
  return out;
}

std::vector<Verdict> sweep_moser(int draws, std::uint64_t seed, int n) {
  std::mt19937_64 g(seed);
  std::vector<Verdict> out;
  for (int i = 0; i < draws; ++i) {
    MoserCheckParams p;
    p.a_bar = uni(g, 1.05, 3.0);
    p.r = uni(g, 0.05, 1.0);
    p.K = uni(g, 1.0, 1.5);
    p.y0_sup = uni(g, 0.0, 1.5);
    p.gamma1 = 3.0;
    p.gamma2 = uni(g, 0.2, 2.9);
    p.alpha = uni(g, 0.2, 1.0);
    // T^a/(a Gamma(a)) in [1/(2 a_bar), 1]
    const double c = uni(g, 0.5 / p.a_bar, 1.0);
    p.T = std::pow(c * gamma_fn(p.alpha + 1.0), 1.0 / p.alpha);
    p.n = n;
    out.push_back(verify_moser(p));
  }
  return out;
}

} // namespace fracrd
