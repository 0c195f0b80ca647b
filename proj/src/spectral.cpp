#include "fracrd/spectral.hpp"

#include "fracrd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

namespace fracrd {

constexpr double pi = std::numbers::pi;

void DomainSpec::validate() const {
  if (dimension != 1 && dimension != 2)
    throw DomainError("domain: dimension must be 1 or 2");
  if (lengths.size() != static_cast<std::size_t>(dimension) ||
      grid_points.size() != static_cast<std::size_t>(dimension))
    throw DomainError("domain: lengths/grid arity does not match dimension");
  for (int i = 0; i < dimension; ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
      throw DomainError("domain: lengths must be positive");
    if (grid_points[i] < 16)
      throw DomainError("domain: grid resolution must be at least 16");
  }
}

double DomainSpec::measure() const {
  double m = 1.0;
  for (int i = 0; i < dimension; ++i)
    m *= lengths[i];
  return m;
}

std::size_t DomainSpec::size() const {
  std::size_t n = 1;
  for (int i = 0; i < dimension; ++i)
    n *= nodes(i);
  return n;
}

std::array<double, 2> DomainSpec::coords(std::size_t p) const {
  if (dimension == 1)
    return {p * spacing(0), 0.0};
  const std::size_t ny = nodes(1);
  return {(p / ny) * spacing(0), (p % ny) * spacing(1)};
}

std::vector<double> DomainSpec::quadrature_weights() const {
  auto axis = [&](int a) {
    std::vector<double> w(nodes(a), spacing(a));
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
  };
  const auto w0 = axis(0);
  if (dimension == 1)
    return w0;
  const auto w1 = axis(1);
  std::vector<double> w;
  w.reserve(size());
  for (double a : w0)
    for (double b : w1)
      w.push_back(a * b);
  return w;
}

namespace {

bool on_boundary(const DomainSpec& d, std::size_t p) {
  if (d.dimension == 1)
    return p == 0 || p + 1 == d.nodes(0);
  const std::size_t n1 = d.nodes(1);
  const std::size_t i = p / n1, k = p % n1;
  return i == 0 || i + 1 == d.nodes(0) || k == 0 || k + 1 == n1;
}

} // namespace

EigenBasis::EigenBasis(DomainSpec domain, int n_modes)
    : domain_(std::move(domain)), n_modes_(n_modes) {
  domain_.validate();
  if (n_modes < 1)
    throw DomainError("build_basis: n_modes must be at least 1");
  npts_ = domain_.size();

  // Any of the first n_modes eigenvalues has per-axis index <= n_modes.
  std::vector<std::tuple<double, int, int>> cand;
  const int kmax = n_modes;
  if (domain_.dimension == 1) {
    for (int j = 1; j <= kmax; ++j)
      cand.emplace_back(std::pow(j * pi / domain_.lengths[0], 2), j, 0);
  } else {
    for (int a = 1; a <= kmax; ++a)
      for (int b = 1; b <= kmax; ++b)
        cand.emplace_back(std::pow(a * pi / domain_.lengths[0], 2) +
                              std::pow(b * pi / domain_.lengths[1], 2),
                          a, b);
  }
  std::sort(cand.begin(), cand.end());
  cand.resize(n_modes);

  for (const auto& [lam, a, b] : cand) {
    if (2 * a >= domain_.grid_points[0] ||
        (domain_.dimension == 2 && 2 * b >= domain_.grid_points[1])) {
      std::ostringstream msg;
      msg << "build_basis: mode (" << a << "," << b << ") exceeds the Nyquist limit of the grid";
      throw ResolutionError(msg.str());
    }
    lambdas_.push_back(lam);
    index_.push_back({a, b});
  }

  weights_ = domain_.quadrature_weights();
  modes_.resize(npts_ * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    double* m = modes_.data() + j * npts_;
    for (std::size_t p = 0; p < npts_; ++p) {
      const auto x = domain_.coords(p);
      // boundary nodes are exact zeros rather than sin(k pi) roundoff
      m[p] = on_boundary(domain_, p) ? 0.0 : eval(j, x[0], x[1]);
    }
  }

  double mass = 0.0;
  for (std::size_t p = 0; p < npts_; ++p)
    mass += weights_[p] * mode(0)[p];
  e1_.assign(mode(0), mode(0) + npts_);
  for (double& v : e1_)
    v /= mass;
}

double EigenBasis::eval(int j, double x, double y) const {
  const auto [a, b] = index_.at(j);
  const double L0 = domain_.lengths[0];
  double v = std::sqrt(2.0 / L0) * std::sin(a * pi * x / L0);
  if (domain_.dimension == 2) {
    const double L1 = domain_.lengths[1];
    v *= std::sqrt(2.0 / L1) * std::sin(b * pi * y / L1);
  }
  return v;
}

BasisPtr build_basis(const DomainSpec& domain, int n_modes) {
  return std::make_shared<const EigenBasis>(domain, n_modes);
}

GridField::GridField(const DomainSpec& d, std::vector<double> v) : domain(d), values(std::move(v)) {
  if (values.size() != domain.size())
    throw DomainError("GridField: value count does not match the grid");
}

double GridField::integral() const {
  const auto w = domain.quadrature_weights();
  double s = 0.0;
  for (std::size_t p = 0; p < values.size(); ++p)
    s += w[p] * values[p];
  return s;
}

double GridField::l1_norm() const {
  const auto w = domain.quadrature_weights();
  double s = 0.0;
  for (std::size_t p = 0; p < values.size(); ++p)
    s += w[p] * std::abs(values[p]);
  return s;
}

double GridField::l2_norm() const {
  const auto w = domain.quadrature_weights();
  double s = 0.0;
  for (std::size_t p = 0; p < values.size(); ++p)
    s += w[p] * values[p] * values[p];
  return std::sqrt(s);
}

double GridField::linf_norm() const {
  double m = 0.0;
  for (double v : values)
    m = std::max(m, std::abs(v));
  return m;
}

SpectralField::SpectralField(BasisPtr b) : basis(std::move(b)) {
  if (!basis)
    throw DomainError("SpectralField: null basis");
  coeffs.assign(basis->n_modes(), 0.0);
}

SpectralField::SpectralField(BasisPtr b, std::vector<double> c)
    : basis(std::move(b)), coeffs(std::move(c)) {
  if (!basis)
    throw DomainError("SpectralField: null basis");
  if (coeffs.size() != static_cast<std::size_t>(basis->n_modes()))
    throw DomainError("SpectralField: coefficient count does not match the basis");
}

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (double c : coeffs)
    s += c * c;
  return std::sqrt(s);
}

SpectralField project(const GridField& u, const BasisPtr& basis) {
  if (!(u.domain == basis->domain()) || u.values.size() != basis->domain().size())
    throw DomainError("project: field and basis live on different grids");
  SpectralField c(basis);
  const auto& w = basis->weights();
  const std::size_t n = u.values.size();
  for (int j = 0; j < basis->n_modes(); ++j) {
    const double* m = basis->mode(j);
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      s += w[p] * u.values[p] * m[p];
    c.coeffs[j] = s;
  }
  return c;
}

GridField reconstruct(const SpectralField& c) {
  if (!c.basis || c.coeffs.size() != static_cast<std::size_t>(c.basis->n_modes()))
    throw DomainError("reconstruct: malformed spectral field");
  GridField g(c.basis->domain());
  const std::size_t n = g.values.size();
  for (int j = 0; j < c.basis->n_modes(); ++j) {
    const double cj = c.coeffs[j];
    if (cj == 0.0)
      continue;
    const double* m = c.basis->mode(j);
    for (std::size_t p = 0; p < n; ++p)
      g.values[p] += cj * m[p];
  }
  return g;
}

SpectralField apply_fractional_laplacian(const SpectralField& c, double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw DomainError("apply_fractional_laplacian: s must lie in (0,1]");
  SpectralField out = c;
  for (std::size_t j = 0; j < out.coeffs.size(); ++j)
    out.coeffs[j] *= std::pow(c.basis->lambdas()[j], s);
  return out;
}

double fractional_sobolev_norm(const SpectralField& c, double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw DomainError("fractional_sobolev_norm: s must lie in [0,1]");
  return std::sqrt(spectral_seminorm_sq(c, 2.0 * s));
}

double spectral_seminorm_sq(const SpectralField& c, double power) {
  double acc = 0.0;
  for (std::size_t j = 0; j < c.coeffs.size(); ++j)
    acc += std::pow(c.basis->lambdas()[j], power) * c.coeffs[j] * c.coeffs[j];
  return acc;
}

namespace {

void write_domain_header(std::ostream& os, const DomainSpec& d) {
  os << "# dimension=" << d.dimension << "\n# lengths=";
  for (int i = 0; i < d.dimension; ++i)
    os << (i ? "," : "") << d.lengths[i];
  os << "\n# grid=";
  for (int i = 0; i < d.dimension; ++i)
    os << (i ? "," : "") << d.grid_points[i];
  os << "\n";
}

} // namespace

void write_csv(std::ostream& os, const GridField& g) {
  write_domain_header(os, g.domain);
  os << "# kind=grid\n# points=" << g.values.size() << "\n";
  os << std::setprecision(17);
  for (double v : g.values)
    os << v << "\n";
}

void write_csv(std::ostream& os, const SpectralField& c) {
  write_domain_header(os, c.basis->domain());
  os << "# kind=spectral\n# n_modes=" << c.coeffs.size() << "\n";
  os << std::setprecision(17);
  for (double v : c.coeffs)
    os << v << "\n";
}

SpectralField read_spectral_csv(std::istream& is, const BasisPtr& basis) {
  std::vector<double> c;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      throw DomainError("read_spectral_csv: bad value '" + line + "'");
    }
    c.push_back(v);
  }
  return SpectralField(basis, std::move(c));
}

} // namespace fracrd
