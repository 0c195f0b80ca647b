#include "fracrd/l1_start.hpp"

#include "fracrd/errors.hpp"

#include <cmath>
#include <utility>

namespace fracrd::detail {

namespace {
constexpr int kMaxOrder = 4;
}

L1Start::L1Start(double alpha, bool starting) : alpha_(alpha) {
  if (starting && alpha < 1.0)
    for (int q = 1; q <= kMaxOrder && q * alpha < 1.0 - 1e-9; ++q)
      sig_.push_back(q * alpha);
}

void L1Start::grow(int n) {
  while (static_cast<int>(b_.size()) < n) {
    const double l = static_cast<double>(b_.size());
    b_.push_back(std::pow(l + 1.0, 1.0 - alpha_) - (l == 0.0 ? 0.0 : std::pow(l, 1.0 - alpha_)));
  }
  pd_.resize(sig_.size());
  for (std::size_t p = 0; p < sig_.size(); ++p)
    while (static_cast<int>(pd_[p].size()) < n) {
      const double i = static_cast<double>(pd_[p].size());
      pd_[p].push_back(std::pow(i + 1.0, sig_[p]) - (i == 0.0 ? 0.0 : std::pow(i, sig_[p])));
    }
}

double L1Start::b(int l) {
  grow(l + 1);
  return b_[l];
}

const double* L1Start::weights(int m) {
  const int Q = order();
  if (Q == 0)
    return nullptr;
  if (static_cast<int>(w_.size()) >= m * Q)
    return w_.data() + (m - 1) * Q;
  grow(m);
  const double g2 = std::tgamma(2.0 - alpha_);
  while (static_cast<int>(w_.size()) < m * Q) {
    const int node = static_cast<int>(w_.size()) / Q + 1;
    std::vector<double> A(Q * Q), r(Q);
    for (int p = 0; p < Q; ++p) {
      const double s = sig_[p];
      for (int q = 1; q <= Q; ++q)
        A[p * Q + q - 1] = std::pow(static_cast<double>(q), s);
      double l1 = 0.0;
      for (int i = 0; i < node; ++i)
        l1 += b_[node - 1 - i] * pd_[p][i];
      r[p] = std::tgamma(s + 1.0) / std::tgamma(s + 1.0 - alpha_) * std::pow(node, s - alpha_) - l1 / g2;
    }
    solve_dense(std::move(A), r, Q);
    w_.insert(w_.end(), r.begin(), r.end());
  }
  return w_.data() + (m - 1) * Q;
}

void solve_dense(std::vector<double> A, std::vector<double>& x, int n) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k]))
        piv = i;
    if (A[piv * n + k] == 0.0)
      throw PrecisionError("solve_dense: singular matrix", 0.0);
    if (piv != k) {
      for (int j = 0; j < n; ++j)
        std::swap(A[k * n + j], A[piv * n + j]);
      std::swap(x[k], x[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = A[i * n + k] / A[k * n + k];
      for (int j = k; j < n; ++j)
        A[i * n + j] -= f * A[k * n + j];
      x[i] -= f * x[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    double s = x[k];
    for (int j = k + 1; j < n; ++j)
      s -= A[k * n + j] * x[j];
    x[k] = s / A[k * n + k];
  }
}

} // namespace fracrd::detail
