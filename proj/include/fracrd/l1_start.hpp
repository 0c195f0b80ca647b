#pragma once

#include <vector>

namespace fracrd::detail {

// Starting weights for the uniform L1 formula (Lubich-type correction).
// The solution of a Caputo problem behaves like a series in t^{q alpha}
// near 0, which the plain L1 formula resolves only to first order. At node m
//   D^alpha y(t_m) ~ sum_i d_i (y_{i+1} - y_i) + h^{-alpha} sum_q w_{m,q} (y_q - y_0)
// with w chosen so the formula is exact on t^{q alpha}, q alpha < 1.
class L1Start {
public:
  // With starting = false only the plain coefficients are provided.
  explicit L1Start(double alpha = 1.0, bool starting = true);

  int order() const { return static_cast<int>(sig_.size()); }
  double alpha() const { return alpha_; }
  // Plain L1 coefficients (l+1)^{1-alpha} - l^{1-alpha}.
  double b(int l);
  // w_{m,q}, q = 1..order(), for node m >= 1.
  const double* weights(int m);

private:
  void grow(int n);

  double alpha_;
  std::vector<double> sig_;
  std::vector<double> b_;
  std::vector<std::vector<double>> pd_;  // (i+1)^sig - i^sig
  std::vector<double> w_;                // flat [(m-1)*order + q]
};

// Dense Gaussian elimination with partial pivoting; A is n x n row-major, overwritten.
void solve_dense(std::vector<double> A, std::vector<double>& x, int n);

} // namespace fracrd::detail
