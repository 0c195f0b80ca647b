#pragma once

namespace fracrd {

struct MlfQuery {
  double alpha;
  double beta;
  double z;

  MlfQuery(double alpha, double beta, double z);
};

// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.
//
// Small |z| is summed directly. Large negative z uses the algebraic
// asymptotic expansion when it truncates below double precision, and
// everything else goes through numerical inversion of the Laplace transform
// s^{alpha-beta}/(s^alpha - z) on an optimal parabolic contour (Garrappa,
// SIAM J. Numer. Anal. 53 (2015)).
double mlf(const MlfQuery& q);
double mlf(double alpha, double beta, double z);

// d/dt E_{alpha,1}(-lambda t^alpha) = -lambda t^{alpha-1} E_{alpha,alpha}(-lambda t^alpha)
double mlf_time_derivative(double alpha, double lambda, double t);

namespace detail {

enum class MlfRegime { taylor, asymptotic, inversion, exponential };

MlfRegime mlf_regime(double alpha, double beta, double z);
double mlf_taylor(double alpha, double beta, double z);
// Returns false if the expansion does not reach full precision.
bool mlf_asymptotic(double alpha, double beta, double z, double& value);
double mlf_inversion(double alpha, double beta, double z);
double mlf_exp_recurrence(double beta, double z);

} // namespace detail

} // namespace fracrd
