#pragma once

#include "fracrd/kernel.hpp"
#include "fracrd/l1_start.hpp"
#include "fracrd/spectral.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fracrd {

struct TheoryRegime {
  bool gamma_above_one = false;  // gamma > 1
  bool decay_window = false;     // 1 < gamma < mu / (4k)
};

struct ModelParams {
  double alpha = 0.5;
  double s = 1.0;
  double mu = 1.0;
  double k = 1.0;
  double gamma = 1.5;
  std::optional<double> m;

  // Throws DomainError naming the offending field.
  void validate() const;
  TheoryRegime theory_regime() const;
};

struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double mass = 0.0;
};

Norms grid_norms(const GridField& u);

enum class Scheme { mild, l1, pme };
const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

// Time history of one run. Coefficient vectors are stored for every step;
// the reaction history feeds the memory integral of the mild scheme.
struct Trajectory {
  BasisPtr basis;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<Norms> norms;
  std::vector<std::vector<double>> history;
  bool blown_up = false;
  std::size_t clip_count = 0;
  std::size_t clip_samples = 0;

  Trajectory() = default;
  explicit Trajectory(const SpectralField& u0);

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  SpectralField state(std::size_t i) const { return SpectralField(basis, states.at(i)); }
  SpectralField back() const { return state(size() - 1); }
  // Copy of the first n+1 samples, scheme scratch included.
  Trajectory truncated(std::size_t n) const;

  // scheme scratch; not part of the observable state
  struct Scratch {
    std::optional<Scheme> scheme;
    double dt = 0.0;          // common step while the grid is uniform
    bool uniform = true;
    double alpha = 0.0, s = 0.0;
    std::vector<double> lag_e;   // E_{alpha,1}(-Lambda_j (l dt)^alpha), flat [l*M + j]
    std::vector<double> fbar;    // segment averages of the reaction, flat [i*M + j]
    std::vector<double> dc;      // c_{i+1} - c_i, flat [i*M + j]
    detail::L1Start l1;          // uniform L1 coefficients and starting weights
    std::vector<std::vector<double>> start_block;  // states of nodes 1..Q from the starting solve
  } scratch;
};

// Pointwise mu u^2 (1 - k J*u) - gamma u.
GridField reaction_term(const GridField& u, const ModelParams& p, const KernelSpec& J);
// Projected reaction coefficients of a spectral state.
std::vector<double> reaction_coeffs(const SpectralField& c, const ModelParams& p, const KernelSpec& J);

SpectralField propagate_linear(const SpectralField& u0, double t, const ModelParams& p);

void step_mild(Trajectory& traj, double dt, const ModelParams& p, const KernelSpec& J);
void step_l1(Trajectory& traj, double dt, const ModelParams& p, const KernelSpec& J);
// L1 step of the porous-medium variant. The diffusion -Lambda P[(u^+)^m] is
// linearly implicit with the secant diffusivity (u^+)^{m-1} frozen at the
// current state; the reaction is explicit. m = 1 reduces to step_l1's update.
void step_pme(Trajectory& traj, double dt, const ModelParams& p);

// Largest dt the explicit reaction of step_pme tolerates at the current state.
double pme_stable_dt(const Trajectory& traj, const ModelParams& p);

struct BlowupReport {
  bool detected = false;
  std::optional<double> t_blow_numeric;
  double threshold = 0.0;
  double H0 = 0.0;
  double t_lower = 0.0;
  double t_upper = 0.0;
  bool hypothesis_met = false;
};

BlowupReport blowup_bilateral_bounds(const GridField& u0, const EigenBasis& basis, double alpha);

using Stepper = std::function<void(Trajectory&, double)>;
// First time ||u||_inf >= threshold. The crossing step is re-run with halved
// steps until the crossing is bracketed within dt/16; step is the scheme that
// produced traj and is only used for that refinement.
BlowupReport detect_blowup(const Trajectory& traj, double threshold, const Stepper& step);

struct AnalysisConstants {
  double C_GN = 1.0;
  double eta = 0.0;
  double sigma = 0.0;
};

double kstar(const ModelParams& p, const AnalysisConstants& consts, int N);

struct EquilibriaReport {
  double a = 0.0;
  double A = 0.0;
  bool exists = false;
  double residual = 0.0;  // max |mu r (1 - k r) - gamma| over both roots
};

EquilibriaReport constant_roots(const ModelParams& p);

// Pointwise h and h' of the Lyapunov functional.
double lyapunov_density(double u, const EquilibriaReport& eq);
double lyapunov_density_derivative(double u, const EquilibriaReport& eq);
double lyapunov_h(const GridField& u, const EquilibriaReport& eq);

std::vector<double> decay_envelope(double u0_norm, const EigenBasis& basis, const ModelParams& p,
                                   double sigma, const std::vector<double>& times);

// int (u - v) phi(x/R) dx with phi(x) = (1 + |x|^2)^{-beta/2}.
double weighted_l1_gap(const GridField& u, const GridField& v, double beta_exp, double R,
                       const DomainSpec& domain);

// Largest Gagliardo-Nirenberg quotient over random band-limited fields; a lower bound for C_GN.
double gn_probe(const BasisPtr& basis, int n_fields = 200, std::uint64_t seed = 1);

struct RunOptions {
  Scheme scheme = Scheme::mild;
  double dt = 1e-2;
  double t_final = 1.0;
  // absolute sup-norm threshold; <= 0 means 1e6 * ||u0||_inf
  double blowup_threshold = 0.0;
};

struct RunResult {
  Trajectory traj;
  BlowupReport blowup;
  bool step_error = false;
  std::string message;
};

// Marches to t_final or until the sup norm crosses the threshold.
RunResult run_scheme(const SpectralField& u0, const ModelParams& p, const KernelSpec& J,
                     const RunOptions& opt);

struct RunReport {
  std::vector<double> times;
  std::vector<Norms> norms;
  std::vector<double> envelope;
  bool envelope_dominated = false;
  double envelope_tol = 1e-2;
  double sup_linf = 0.0;
  double sigma = 0.0;
  BlowupReport blowup;
  TheoryRegime regime;
  EquilibriaReport equilibria;
  double kstar_value = 0.0;
  bool kstar_applies = false;
  bool k_above_kstar = true;
  std::size_t clip_count = 0;
  std::size_t clip_samples = 0;
  std::string scheme;
  std::string status = "ok";
  std::string message;

  std::string to_json() const;
};

struct ReportExtras {
  std::optional<BlowupReport> blowup;
  std::string scheme;
  double envelope_tol = 1e-2;
};

RunReport run_report(const Trajectory& traj, const ModelParams& p, AnalysisConstants& consts,
                     const ReportExtras& extras);

} // namespace fracrd
