#include "fracrd/solver.hpp"

#include "fracrd/errors.hpp"
#include "fracrd/mlf.hpp"
#include "fracrd/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracrd {

void ModelParams::validate() const {
  auto bad = [](const char* key, const char* what) {
    throw DomainError(std::string(key) + ": " + what);
  };
  if (!std::isfinite(alpha) || !(alpha > 0.0 && alpha <= 1.0))
    bad("alpha", "must lie in (0,1]");
  if (!std::isfinite(s) || !(s > 0.0 && s <= 1.0))
    bad("s", "must lie in (0,1]");
  if (!std::isfinite(mu) || mu < 0.0)
    bad("mu", "must be non-negative");
  if (!std::isfinite(k) || k < 0.0)
    bad("k", "must be non-negative");
  if (!std::isfinite(gamma) || gamma < 0.0)
    bad("gamma", "must be non-negative");
  if (m && (!std::isfinite(*m) || !(*m > 0.0 && *m <= 1.0)))
    bad("m", "must lie in (0,1]");
}

TheoryRegime ModelParams::theory_regime() const {
  TheoryRegime r;
  r.gamma_above_one = gamma > 1.0;
  r.decay_window = gamma > 1.0 && k > 0.0 && gamma < mu / (4.0 * k);
  return r;
}

Norms grid_norms(const GridField& u) {
  const auto w = u.domain.quadrature_weights();
  Norms n;
  double l2 = 0.0;
  for (std::size_t p = 0; p < u.values.size(); ++p) {
    const double v = u.values[p];
    n.l1 += w[p] * std::abs(v);
    l2 += w[p] * v * v;
    n.mass += w[p] * v;
    if (!(std::abs(v) <= n.linf))
      n.linf = std::isnan(v) ? std::numeric_limits<double>::infinity() : std::abs(v);
  }
  n.l2 = std::sqrt(l2);
  return n;
}

const char* scheme_name(Scheme s) {
  switch (s) {
  case Scheme::mild:
    return "mild";
  case Scheme::l1:
    return "l1";
  case Scheme::pme:
    return "pme";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "mild")
    return Scheme::mild;
  if (name == "l1")
    return Scheme::l1;
  if (name == "pme")
    return Scheme::pme;
  throw DomainError("scheme: expected mild, l1 or pme, got '" + name + "'");
}

Trajectory::Trajectory(const SpectralField& u0) : basis(u0.basis) {
  if (!basis)
    throw DomainError("Trajectory: initial state has no basis");
  times.push_back(0.0);
  states.push_back(u0.coeffs);
  norms.push_back(grid_norms(reconstruct(u0)));
}

Trajectory Trajectory::truncated(std::size_t n) const {
  if (n >= size())
    throw DomainError("Trajectory::truncated: index out of range");
  Trajectory t;
  t.basis = basis;
  t.times.assign(times.begin(), times.begin() + n + 1);
  t.states.assign(states.begin(), states.begin() + n + 1);
  t.norms.assign(norms.begin(), norms.begin() + n + 1);
  t.history.assign(history.begin(), history.begin() + std::min(history.size(), n + 1));
  t.clip_count = clip_count;
  t.clip_samples = clip_samples;
  t.scratch = scratch;
  const std::size_t M = basis->n_modes();
  if (t.scratch.fbar.size() > n * M)
    t.scratch.fbar.resize(n * M);
  if (t.scratch.dc.size() > n * M)
    t.scratch.dc.resize(n * M);
  return t;
}

GridField reaction_term(const GridField& u, const ModelParams& p, const KernelSpec& J) {
  GridField f(u.domain);
  const bool nonlocal = p.mu != 0.0 && p.k != 0.0;
  GridField conv;
  if (nonlocal)
    conv = convolve(J, u);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double v = u.values[i];
    const double competition = nonlocal ? 1.0 - p.k * conv.values[i] : 1.0;
    f.values[i] = p.mu * v * v * competition - p.gamma * v;
  }
  return f;
}

std::vector<double> reaction_coeffs(const SpectralField& c, const ModelParams& p, const KernelSpec& J) {
  if (p.mu == 0.0 && p.gamma == 0.0)
    return std::vector<double>(c.coeffs.size(), 0.0);
  return project(reaction_term(reconstruct(c), p, J), c.basis).coeffs;
}

SpectralField propagate_linear(const SpectralField& u0, double t, const ModelParams& p) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("propagate_linear: t must be non-negative");
  SpectralField out = u0;
  if (t == 0.0)
    return out;
  const double ta = std::pow(t, p.alpha);
  for (std::size_t j = 0; j < out.coeffs.size(); ++j) {
    const double lam = std::pow(u0.basis->lambdas()[j], p.s);
    out.coeffs[j] *= mlf(p.alpha, 1.0, -lam * ta);
  }
  return out;
}

BlowupReport blowup_bilateral_bounds(const GridField& u0, const EigenBasis& basis, double alpha) {
  if (!(u0.domain == basis.domain()))
    throw DomainError("blowup_bilateral_bounds: field and basis live on different grids");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("blowup_bilateral_bounds: alpha must lie in (0,1]");
  BlowupReport r;
  const auto& w = basis.weights();
  const auto& e1 = basis.e1();
  double H0 = 0.0;
  for (std::size_t p = 0; p < e1.size(); ++p)
    H0 += w[p] * u0.values[p] * e1[p];
  r.H0 = H0;
  r.hypothesis_met = H0 >= 1.0 + basis.lambda1();
  const double g = std::tgamma(alpha + 1.0);
  r.t_lower = std::pow(g / (4.0 * (H0 + 0.5)), 1.0 / alpha);
  r.t_upper = H0 > 0.0 ? std::pow(g / H0, 1.0 / alpha) : std::numeric_limits<double>::infinity();
  return r;
}

namespace {

bool crossed(const Trajectory& t, double threshold) {
  return t.blown_up || !(t.norms.back().linf < threshold);
}

} // namespace

BlowupReport detect_blowup(const Trajectory& traj, double threshold, const Stepper& step) {
  if (traj.empty())
    throw DomainError("detect_blowup: empty trajectory");
  BlowupReport r;
  r.threshold = threshold;
  std::size_t hit = traj.size();
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (!(traj.norms[i].linf < threshold)) {
      hit = i;
      break;
    }
  if (hit == traj.size() && traj.blown_up)
    hit = traj.size() - 1;
  if (hit == traj.size())
    return r;
  r.detected = true;
  if (hit == 0 || !step) {
    r.t_blow_numeric = traj.times[hit];
    return r;
  }

  Trajectory work = traj.truncated(hit - 1);
  double h = traj.times[hit] - traj.times[hit - 1];
  for (int level = 0; level < 4; ++level) {
    h *= 0.5;
    Trajectory trial = work;
    step(trial, h);
    if (!crossed(trial, threshold))
      work = std::move(trial);
  }
  r.t_blow_numeric = work.times.back() + 0.5 * h;
  return r;
}

RunResult run_scheme(const SpectralField& u0, const ModelParams& p, const KernelSpec& J,
                     const RunOptions& opt) {
  p.validate();
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt))
    throw DomainError("dt: must be positive");
  if (!(opt.t_final > 0.0) || !std::isfinite(opt.t_final))
    throw DomainError("t_final: must be positive");
  if (opt.scheme == Scheme::pme && !p.m)
    throw DomainError("m: required by the pme scheme");

  RunResult res;
  res.traj = Trajectory(u0);
  const double linf0 = res.traj.norms.front().linf;
  const double threshold = opt.blowup_threshold > 0.0 ? opt.blowup_threshold : 1e6 * linf0;

  Stepper step;
  switch (opt.scheme) {
  case Scheme::mild:
    step = [&](Trajectory& t, double h) { step_mild(t, h, p, J); };
    break;
  case Scheme::l1:
    step = [&](Trajectory& t, double h) { step_l1(t, h, p, J); };
    break;
  case Scheme::pme:
    step = [&](Trajectory& t, double h) { step_pme(t, h, p); };
    break;
  }

  const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::round(opt.t_final / opt.dt)));
  const double dt = opt.t_final / n_steps;
  for (std::size_t n = 0; n < n_steps; ++n) {
    step(res.traj, dt);
    if (crossed(res.traj, threshold))
      break;
  }
  const auto bounds = blowup_bilateral_bounds(reconstruct(u0), *u0.basis, p.alpha);
  res.blowup = detect_blowup(res.traj, threshold, step);
  res.blowup.H0 = bounds.H0;
  res.blowup.t_lower = bounds.t_lower;
  res.blowup.t_upper = bounds.t_upper;
  res.blowup.hypothesis_met = bounds.hypothesis_met;
  return res;
}

} // namespace fracrd
