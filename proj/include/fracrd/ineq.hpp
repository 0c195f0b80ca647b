#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fracrd {

struct CaputoIvp {
  double alpha = 0.5;
  std::function<double(double, double)> rhs;  // rhs(t, y)
  double y0 = 0.0;
  double T = 1.0;
  int n = 1000;
  // Stop marching once y exceeds this value (blow-up runs).
  std::optional<double> stop_above;
  // Starting weights for the t^{q alpha} terms of the solution (see L1Start).
  // Without them the scheme is first order and O(h^alpha) at the first nodes.
  bool corrected = true;

  void validate() const;
};

struct ScalarTrajectory {
  std::vector<double> t;
  std::vector<double> y;
  bool stopped = false;          // crossed stop_above or lost the implicit root
  std::optional<double> t_stop;  // first node past stop_above
};

// Implicit L1 scheme on a uniform grid (Crank-Nicolson when alpha = 1). Each
// nodal equation is solved by fixed-point iteration with a Newton fallback.
ScalarTrajectory caputo_solve(const CaputoIvp& p);

struct RiccatiResult {
  ScalarTrajectory traj;
  std::optional<double> t_blow;
  bool conclusive = false;
};

// w(t) = E_alpha(t^alpha) w0 + int_0^t (t-s)^{alpha-1} E_{alpha,alpha}((t-s)^alpha) w(s)^2 ds,
// i.e. the Volterra form of D^alpha w = w (1 + w).
RiccatiResult riccati_volterra(double alpha, double w0, double T, int n, double cap = 1e8);

struct Verdict {
  std::string lemma;
  std::string params;  // JSON object
  double max_violation = 0.0;  // max over the grid of (lhs - rhs); <= slack means pass
  double slack = 0.0;
  bool pass = false;
  std::string to_json() const;
};

Verdict verify_gronwall_const(double alpha, double c1, double b, double y0, double T, int n);

// f is sampled at the n+1 grid nodes of [0, T].
Verdict verify_gronwall_var(double alpha, double c1, const std::vector<double>& f, double y0,
                            double T, int n);

struct PowerLemmaParams {
  double alpha = 0.5;
  double k_exp = 0.3;
  double m_exp = 0.7;
  double a_c = 1.0;
  std::function<double(double)> b_fn = [](double) { return 1.0; };
  double beta_c = 1.0;
  double c4 = 1.0;
  double eps = 1.0;
  double y0 = 1.0;
  double T = 1.0;
  int n = 2000;
};

// Explicit right-hand side of the power-type inequality lemma at time t.
double power_inequality_bound(const PowerLemmaParams& p, double t);
Verdict verify_power_inequality(const PowerLemmaParams& p);

// Closed form of the iteration bound; +infinity when it overflows.
double moser_bound(int k, double a_bar, double r, double K, double y0_sup, double alpha, double T);

struct MoserCheckParams {
  int k_max = 3;
  double a_bar = 1.0;
  double r = 0.5;
  double K = 1.0;
  double y0_sup = 1.0;
  double gamma1 = 3.0;
  double gamma2 = 1.0;
  double alpha = 0.5;
  double T = 1.0;
  int n = 1000;
};

// Two-level recursion y_k <= (T^a/(a Gamma(a))) 2 a_k max{K^{3^k}, (bound_{k-1})^3}
// started from max{y0_sup, K}; the closed form above should dominate it.
double moser_iterated_bound(int k, double a_bar, double r, double K, double y0_sup, double alpha,
                            double T);

// Solves the comparison equations D^alpha y_k = -y_k + a_k (y_{k-1}^g1 + y_{k-1}^g2),
// y_k(0) = K^{3^k}, y_0 = y0_sup, for k = 1..k_max and checks them against the closed form.
Verdict verify_moser(const MoserCheckParams& p);

// Seeded random admissible draws, one verdict each.
std::vector<Verdict> sweep_gronwall_const(int draws, std::uint64_t seed, int n = 1000);
std::vector<Verdict> sweep_gronwall_var(int draws, std::uint64_t seed, int n = 1000);
std::vector<Verdict> sweep_power_inequality(int draws, std::uint64_t seed, int n = 1000);
std::vector<Verdict> sweep_moser(int draws, std::uint64_t seed, int n = 400);

} // namespace fracrd
