#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace fracrd {

// Interval (dimension 1) or rectangle (dimension 2) with a closed uniform grid.
// grid_points[i] counts intervals along axis i, so there are grid_points[i]+1
// nodes per axis including both boundary nodes.
struct DomainSpec {
  int dimension = 1;
  std::vector<double> lengths{1.0};
  std::vector<int> grid_points{64};

  void validate() const;
  double measure() const;
  double spacing(int axis) const { return lengths[axis] / grid_points[axis]; }
  std::size_t nodes(int axis) const { return static_cast<std::size_t>(grid_points[axis]) + 1; }
  std::size_t size() const;
  // Coordinates of flat node index p (row-major, axis 0 slowest).
  std::array<double, 2> coords(std::size_t p) const;
  // Composite trapezoid weights for the closed grid.
  std::vector<double> quadrature_weights() const;

  bool operator==(const DomainSpec&) const = default;
};

class EigenBasis {
public:
  EigenBasis(DomainSpec domain, int n_modes);

  const DomainSpec& domain() const { return domain_; }
  int n_modes() const { return n_modes_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  double lambda1() const { return lambdas_.front(); }
  // Mode j sampled on the grid (length domain().size()).
  const double* mode(int j) const { return modes_.data() + static_cast<std::size_t>(j) * npts_; }
  std::array<int, 2> mode_index(int j) const { return index_[j]; }
  const std::vector<double>& weights() const { return weights_; }
  // First eigenfunction scaled to unit integral.
  const std::vector<double>& e1() const { return e1_; }

  // Analytic eigenfunction j evaluated off-grid.
  double eval(int j, double x, double y = 0.0) const;

private:
  DomainSpec domain_;
  int n_modes_;
  std::size_t npts_;
  std::vector<double> lambdas_;
  std::vector<std::array<int, 2>> index_;
  std::vector<double> modes_;
  std::vector<double> weights_;
  std::vector<double> e1_;
};

using BasisPtr = std::shared_ptr<const EigenBasis>;

struct GridField {
  DomainSpec domain;
  std::vector<double> values;

  GridField() = default;
  explicit GridField(const DomainSpec& d) : domain(d), values(d.size(), 0.0) {}
  GridField(const DomainSpec& d, std::vector<double> v);

  double integral() const;
  double l1_norm() const;
  double l2_norm() const;
  double linf_norm() const;
};

struct SpectralField {
  BasisPtr basis;
  std::vector<double> coeffs;

  SpectralField() = default;
  explicit SpectralField(BasisPtr b);
  SpectralField(BasisPtr b, std::vector<double> c);

  double l2_norm() const;
};

BasisPtr build_basis(const DomainSpec& domain, int n_modes);

// Grid field sampled from a function of the node coordinates.
template <class F> GridField sample(const DomainSpec& d, F&& f) {
  GridField g(d);
  for (std::size_t p = 0; p < g.values.size(); ++p) {
    const auto x = d.coords(p);
    g.values[p] = f(x[0], x[1]);
  }
  return g;
}

SpectralField project(const GridField& u, const BasisPtr& basis);
GridField reconstruct(const SpectralField& c);
SpectralField apply_fractional_laplacian(const SpectralField& c, double s);
double fractional_sobolev_norm(const SpectralField& c, double s);

// sum_j lambda_j^power c_j^2; power = 1 gives the squared gradient norm.
double spectral_seminorm_sq(const SpectralField& c, double power);

// CSV with "# key=value" metadata lines, then one value per line.
void write_csv(std::ostream& os, const GridField& g);
void write_csv(std::ostream& os, const SpectralField& c);
SpectralField read_spectral_csv(std::istream& is, const BasisPtr& basis);

} // namespace fracrd
