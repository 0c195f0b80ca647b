#pragma once

#include "fracrd/spectral.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracrd {

enum class KernelKind { uniform, gaussian_floor, tabulated };

struct ValidationReport {
  double mass = 0.0;
  double min_value = 0.0;
  std::size_t negative_count = 0;
  double eta = 0.0;
  bool mass_ok = false;
  bool floor_ok = false;
  bool sign_ok = false;
  bool pass() const { return mass_ok && floor_ok && sign_ok; }
  std::string to_json() const;
};

// Competition kernel J. Differences are evaluated per axis; in two dimensions
// gaussian_floor is radial and tabulated is a tensor product of the 1D table.
class KernelSpec {
public:
  static KernelSpec uniform(double eta);
  // c * (G_width + floor), c fixed so the mass over a cell of measure |Omega| is one.
  static KernelSpec gaussian_floor(double width, double floor, double eta);
  // Piecewise-linear table of (offset, value); treated as even when all offsets are >= 0.
  static KernelSpec tabulated(std::vector<double> offsets, std::vector<double> values, double eta);
  static KernelSpec tabulated_csv(std::istream& is, double eta);

  KernelKind kind() const { return kind_; }
  double eta() const { return eta_; }
  double width() const { return width_; }
  double floor_level() const { return floor_; }

  // Fixes the domain-dependent normalization and runs the checks.
  ValidationReport validate(const DomainSpec& domain);
  bool validated() const { return report_.has_value(); }
  const std::optional<ValidationReport>& report() const { return report_; }
  const DomainSpec& domain() const { return domain_; }

  // J at a difference vector.
  double operator()(double dx, double dy = 0.0) const;
  double sup_value() const;

private:
  double profile(double d) const;

  KernelKind kind_ = KernelKind::uniform;
  double eta_ = 0.0;
  double width_ = 0.0;
  double floor_ = 0.0;
  double scale_ = 1.0;
  std::vector<double> offsets_, values_;
  bool even_ = false;
  DomainSpec domain_;
  std::optional<ValidationReport> report_;
};

ValidationReport validate_kernel(KernelSpec& J, const DomainSpec& domain);

// (J*u)(x) = int_Omega J(x-y) u(y) dy by grid quadrature.
GridField convolve(const KernelSpec& J, const GridField& u);
// Reference O(n^2) / O(n^4) quadrature with no structural shortcuts.
GridField convolve_direct(const KernelSpec& J, const GridField& u);

} // namespace fracrd
