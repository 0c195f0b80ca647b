#include "fracrd/kernel.hpp"

#include "fracrd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace fracrd {

namespace {

constexpr double kMassTol = 1e-6;

double gauss1(double d, double w) {
  return std::exp(-0.5 * d * d / (w * w)) / (std::sqrt(2.0 * std::numbers::pi) * w);
}

} // namespace

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["mass"] = mass;
  j["mass_ok"] = mass_ok;
  j["min"] = min_value;
  j["eta"] = eta;
  j["floor_ok"] = floor_ok;
  j["negative_count"] = negative_count;
  j["sign_ok"] = sign_ok;
  j["pass"] = pass();
  return j.dump();
}

KernelSpec KernelSpec::uniform(double eta) {
  KernelSpec k;
  k.kind_ = KernelKind::uniform;
  k.eta_ = eta;
  return k;
}

KernelSpec KernelSpec::gaussian_floor(double width, double floor, double eta) {
  if (!(width > 0.0) || !std::isfinite(width))
    throw DomainError("kernel: gaussian width must be positive");
  if (!(floor >= 0.0) || !std::isfinite(floor))
    throw DomainError("kernel: floor must be non-negative");
  KernelSpec k;
  k.kind_ = KernelKind::gaussian_floor;
  k.width_ = width;
  k.floor_ = floor;
  k.eta_ = eta;
  return k;
}

KernelSpec KernelSpec::tabulated(std::vector<double> offsets, std::vector<double> values, double eta) {
  if (offsets.size() != values.size() || offsets.size() < 2)
    throw DomainError("kernel: table needs at least two (offset, value) pairs");
  std::vector<std::size_t> order(offsets.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return offsets[a] < offsets[b]; });
  KernelSpec k;
  k.kind_ = KernelKind::tabulated;
  k.eta_ = eta;
  for (auto i : order) {
    if (!std::isfinite(offsets[i]) || !std::isfinite(values[i]))
      throw DomainError("kernel: non-finite table entry");
    if (!k.offsets_.empty() && offsets[i] == k.offsets_.back())
      throw DomainError("kernel: duplicate table offset");
    k.offsets_.push_back(offsets[i]);
    k.values_.push_back(values[i]);
  }
  k.even_ = k.offsets_.front() >= 0.0;
  return k;
}

KernelSpec KernelSpec::tabulated_csv(std::istream& is, double eta) {
  std::vector<double> off, val;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#')
      continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a >> b)) {
      // tolerate a text header on the first data line
      if (off.empty() && lineno == 1)
        continue;
      throw DomainError("kernel: malformed table line " + std::to_string(lineno));
    }
    off.push_back(a);
    val.push_back(b);
  }
  return tabulated(std::move(off), std::move(val), eta);
}

double KernelSpec::profile(double d) const {
  if (even_)
    d = std::abs(d);
  if (d < offsets_.front() || d > offsets_.back())
    return 0.0;
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), d);
  if (it == offsets_.end())
    return values_.back();
  const std::size_t i = static_cast<std::size_t>(it - offsets_.begin());
  const double x0 = offsets_[i - 1], x1 = offsets_[i];
  const double t = (d - x0) / (x1 - x0);
  return (1.0 - t) * values_[i - 1] + t * values_[i];
}

double KernelSpec::operator()(double dx, double dy) const {
  const bool two = domain_.dimension == 2;
  switch (kind_) {
  case KernelKind::uniform:
    return scale_;
  case KernelKind::gaussian_floor: {
    double g = gauss1(dx, width_);
    if (two)
      g *= gauss1(dy, width_);
    return scale_ * (g + floor_);
  }
  case KernelKind::tabulated: {
    double v = profile(dx);
    if (two)
      v *= profile(dy);
    return v;
  }
  }
  return 0.0;
}

double KernelSpec::sup_value() const {
  switch (kind_) {
  case KernelKind::uniform:
    return scale_;
  case KernelKind::gaussian_floor:
    return (*this)(0.0, 0.0);
  case KernelKind::tabulated: {
    double m = 0.0;
    for (double v : values_)
      m = std::max(m, std::abs(v));
    return domain_.dimension == 2 ? m * m : m;
  }
  }
  return 0.0;
}

ValidationReport KernelSpec::validate(const DomainSpec& domain) {
  domain.validate();
  domain_ = domain;
  const int dim = domain.dimension;

  switch (kind_) {
  case KernelKind::uniform:
    scale_ = 1.0 / domain.measure();
    break;
  case KernelKind::gaussian_floor: {
    double gmass = 1.0;
    for (int a = 0; a < dim; ++a)
      gmass *= std::erf(domain.lengths[a] / (2.0 * std::sqrt(2.0) * width_));
    scale_ = 1.0 / (gmass + floor_ * domain.measure());
    break;
  }
  case KernelKind::tabulated:
    scale_ = 1.0;
    break;
  }

  ValidationReport r;
  r.eta = eta_;

  // mass over the centred cell of measure |Omega|; composite Simpson on a
  // fine grid so that the quadrature error stays well below the tolerance
  {
    std::vector<std::vector<double>> x(dim), w(dim);
    for (int a = 0; a < dim; ++a) {
      const int n = std::max(2048, 2 * domain.grid_points[a]);
      const double L = domain.lengths[a], h = L / n;
      for (int i = 0; i <= n; ++i) {
        x[a].push_back(-0.5 * L + i * h);
        w[a].push_back(h / 3.0 * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0)));
      }
    }
    double mass = 0.0;
    if (dim == 1) {
      for (std::size_t i = 0; i < x[0].size(); ++i)
        mass += w[0][i] * (*this)(x[0][i]);
    } else {
      for (std::size_t i = 0; i < x[0].size(); ++i)
        for (std::size_t j = 0; j < x[1].size(); ++j)
          mass += w[0][i] * w[1][j] * (*this)(x[0][i], x[1][j]);
    }
    r.mass = mass;
    r.mass_ok = std::abs(mass - 1.0) <= kMassTol;
  }

  // infimum and sign over every grid difference
  {
    double mn = std::numeric_limits<double>::infinity();
    std::size_t neg = 0;
    const int n0 = domain.grid_points[0];
    const double h0 = domain.spacing(0);
    if (dim == 1) {
      for (int m = -n0; m <= n0; ++m) {
        const double v = (*this)(m * h0);
        mn = std::min(mn, v);
        neg += v < 0.0;
      }
    } else {
      const int n1 = domain.grid_points[1];
      const double h1 = domain.spacing(1);
      for (int m = -n0; m <= n0; ++m)
        for (int l = -n1; l <= n1; ++l) {
          const double v = (*this)(m * h0, l * h1);
          mn = std::min(mn, v);
          neg += v < 0.0;
        }
    }
    r.min_value = mn;
    r.negative_count = neg;
    r.sign_ok = neg == 0;
    r.floor_ok = mn >= eta_;
  }

  report_ = r;
  return r;
}

ValidationReport validate_kernel(KernelSpec& J, const DomainSpec& domain) { return J.validate(domain); }

namespace {

void require_ready(const KernelSpec& J, const GridField& u) {
  if (!J.validated())
    throw PreconditionError("convolve: kernel has not been validated");
  if (!J.report()->pass())
    throw PreconditionError("convolve: kernel failed validation " + J.report()->to_json());
  if (!(u.domain == J.domain()) || u.values.size() != u.domain.size())
    throw DomainError("convolve: field and kernel were set up on different grids");
}

// Matrix K[i*n+i'] = w_{i'} * f(x_i - x_{i'}) along one axis.
std::vector<double> axis_matrix(const DomainSpec& d, int axis, auto&& f) {
  const std::size_t n = d.nodes(axis);
  const double h = d.spacing(axis);
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double w = (k == 0 || k == n - 1) ? 0.5 * h : h;
      K[i * n + k] = w * f((static_cast<double>(i) - static_cast<double>(k)) * h);
    }
  return K;
}

// out(i,j) = sum_{i',j'} A(i,i') B(j,j') u(i',j')
std::vector<double> apply_separable(const std::vector<double>& A, const std::vector<double>& B,
                                    const std::vector<double>& u, std::size_t nx, std::size_t ny) {
  std::vector<double> tmp(nx * ny, 0.0), out(nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < ny; ++l)
        s += B[j * ny + l] * u[i * ny + l];
      tmp[i * ny + j] = s;
    }
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t k = 0; k < nx; ++k) {
      const double a = A[i * nx + k];
      if (a == 0.0)
        continue;
      for (std::size_t j = 0; j < ny; ++j)
        out[i * ny + j] += a * tmp[k * ny + j];
    }
  return out;
}

} // namespace

GridField convolve_direct(const KernelSpec& J, const GridField& u) {
  require_ready(J, u);
  const auto& d = u.domain;
  const auto w = d.quadrature_weights();
  GridField out(d);
  const std::size_t n = u.values.size();
  for (std::size_t p = 0; p < n; ++p) {
    const auto x = d.coords(p);
    double s = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      const auto y = d.coords(q);
      s += w[q] * J(x[0] - y[0], x[1] - y[1]) * u.values[q];
    }
    out.values[p] = s;
  }
  return out;
}

GridField convolve(const KernelSpec& J, const GridField& u) {
  require_ready(J, u);
  const auto& d = u.domain;
  if (J.kind() == KernelKind::uniform) {
    GridField out(d);
    std::fill(out.values.begin(), out.values.end(), J(0.0, 0.0) * u.integral());
    return out;
  }
  if (d.dimension == 1)
    return convolve_direct(J, u);

  const std::size_t nx = d.nodes(0), ny = d.nodes(1);
  GridField out(d);
  if (J.kind() == KernelKind::gaussian_floor) {
    const double w = J.width();
    const auto A = axis_matrix(d, 0, [w](double t) { return gauss1(t, w); });
    const auto B = axis_matrix(d, 1, [w](double t) { return gauss1(t, w); });
    // J = c (g(dx) g(dy) + floor); recover c from J(0,0)
    const double g0 = gauss1(0.0, w) * gauss1(0.0, w);
    const double c = J(0.0, 0.0) / (g0 + J.floor_level());
    out.values = apply_separable(A, B, u.values, nx, ny);
    const double base = J.floor_level() * u.integral();
    for (double& v : out.values)
      v = c * (v + base);
    return out;
  }
  const auto A = axis_matrix(d, 0, [&J](double t) { return J(t, 0.0) / J(0.0, 0.0); });
  const auto B = axis_matrix(d, 1, [&J](double t) { return J(0.0, t); });
  // tensor table: J(dx,dy) = T(dx) T(dy) = [J(dx,0)/T(0)] * J(0,dy)
  if (J(0.0, 0.0) == 0.0)
    return convolve_direct(J, u);
  out.values = apply_separable(A, B, u.values, nx, ny);
  return out;
}

} // namespace fracrd
