#include "fracrd/errors.hpp"
#include "fracrd/solver.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace fracrd {

RunReport run_report(const Trajectory& traj, const ModelParams& p, AnalysisConstants& consts,
                     const ReportExtras& extras) {
  if (traj.empty())
    throw DomainError("run_report: empty trajectory");
  RunReport r;
  r.times = traj.times;
  r.norms = traj.norms;
  r.scheme = extras.scheme;
  r.envelope_tol = extras.envelope_tol;
  r.clip_count = traj.clip_count;
  r.clip_samples = traj.clip_samples;
  for (const auto& n : traj.norms)
    r.sup_linf = std::max(r.sup_linf, n.linf);
  r.sigma = p.gamma - p.mu * r.sup_linf;
  consts.sigma = r.sigma;

  if (r.sigma > 0.0 && std::isfinite(r.sup_linf)) {
    r.envelope = decay_envelope(traj.norms.front().linf, *traj.basis, p, r.sigma, traj.times);
    r.envelope_dominated = true;
    for (std::size_t i = 0; i < r.times.size(); ++i)
      if (!(traj.norms[i].linf <= r.envelope[i] * (1.0 + r.envelope_tol)))
        r.envelope_dominated = false;
  }

  if (extras.blowup)
    r.blowup = *extras.blowup;
  r.regime = p.theory_regime();
  r.equilibria = constant_roots(p);

  const int N = traj.basis->domain().dimension;
  if (N == 1 || consts.eta > 0.0) {
    r.kstar_value = kstar(p, consts, N);
    r.kstar_applies = true;
    r.k_above_kstar = p.k > r.kstar_value;
  }
  if (r.blowup.detected) {
    r.status = "blowup";
    // the analysis only knows nonnegative blow-up; a negative excursion is the explicit
    // reaction outrunning the step
    if (traj.norms.back().mass < 0.0)
      r.message = "sup norm crossed the threshold with negative mass; likely a step-size "
                  "instability, try a smaller run.dt";
  }
  return r;
}

namespace {

nlohmann::ordered_json num(double v) {
  if (std::isfinite(v))
    return v;
  return nullptr;
}

nlohmann::ordered_json norms_json(const Norms& n) {
  nlohmann::ordered_json j;
  j["L1"] = num(n.l1);
  j["L2"] = num(n.l2);
  j["Linf"] = num(n.linf);
  j["mass"] = num(n.mass);
  return j;
}

} // namespace

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["status"] = status;
  j["message"] = message;
  j["scheme"] = scheme;
  j["n_samples"] = times.size();
  j["t_final"] = times.empty() ? nullptr : num(times.back());
  j["initial_norms"] = norms.empty() ? nlohmann::ordered_json() : norms_json(norms.front());
  j["final_norms"] = norms.empty() ? nlohmann::ordered_json() : norms_json(norms.back());
  j["sup_linf"] = num(sup_linf);
  j["sigma"] = num(sigma);
  j["envelope_applicable"] = !envelope.empty();
  j["envelope_dominated"] = envelope_dominated;
  j["envelope_tol"] = envelope_tol;

  nlohmann::ordered_json b;
  b["detected"] = blowup.detected;
  b["t_blow_numeric"] = blowup.t_blow_numeric ? num(*blowup.t_blow_numeric) : nullptr;
  b["threshold"] = num(blowup.threshold);
  b["H0"] = num(blowup.H0);
  b["t_lower"] = num(blowup.t_lower);
  b["t_upper"] = num(blowup.t_upper);
  b["hypothesis_met"] = blowup.hypothesis_met;
  j["blowup"] = b;

  nlohmann::ordered_json th;
  th["gamma_above_one"] = regime.gamma_above_one;
  th["decay_window"] = regime.decay_window;
  j["theory_regime"] = th;

  nlohmann::ordered_json eq;
  eq["exists"] = equilibria.exists;
  eq["a"] = equilibria.exists ? num(equilibria.a) : nullptr;
  eq["A"] = equilibria.exists ? num(equilibria.A) : nullptr;
  j["equilibria"] = eq;

  nlohmann::ordered_json ks;
  ks["applies"] = kstar_applies;
  ks["value"] = kstar_applies ? num(kstar_value) : nullptr;
  ks["k_above_kstar"] = k_above_kstar;
  j["kstar"] = ks;

  nlohmann::ordered_json cl;
  cl["count"] = clip_count;
  cl["samples"] = clip_samples;
  j["clipping"] = cl;
  return j.dump(2);
}

} // namespace fracrd
