#include "fracrd/config.hpp"

#include "fracrd/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace fracrd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(key, item));
  if (out.empty())
    throw ConfigError(key, "expected a comma-separated list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

struct KeyDef {
  const char* section;
  const char* name;
  Setter set;
};

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"domain", "lengths",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.domain.lengths = to_list(k, v);
         c.domain.dimension = static_cast<int>(c.domain.lengths.size());
       }},
      {"domain", "grid",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.domain.grid_points.clear();
         for (double g : to_list(k, v)) {
           if (g != std::floor(g))
             throw ConfigError(k, "grid sizes must be integers");
           c.domain.grid_points.push_back(static_cast<int>(g));
         }
       }},
      {"domain", "n_modes",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.n_modes = to_int(k, v); }},
      {"model", "alpha",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.model.alpha = to_double(k, v); }},
      {"model", "s",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.model.s = to_double(k, v); }},
      {"model", "mu",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.model.mu = to_double(k, v); }},
      {"model", "k",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.model.k = to_double(k, v); }},
      {"model", "gamma",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.model.gamma = to_double(k, v); }},
      {"model", "m",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.model.m = to_double(k, v); }},
      {"kernel", "kind",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "uniform")
           c.kernel.kind = KernelKind::uniform;
         else if (t == "gaussian_floor")
           c.kernel.kind = KernelKind::gaussian_floor;
         else if (t == "tabulated")
           c.kernel.kind = KernelKind::tabulated;
         else
           throw ConfigError(k, "expected uniform, gaussian_floor or tabulated, got '" + t + "'");
       }},
      {"kernel", "eta",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.kernel.eta = to_double(k, v); }},
      {"kernel", "width",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.kernel.width = to_double(k, v); }},
      {"kernel", "floor",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.kernel.floor = to_double(k, v); }},
      {"kernel", "table",
       [](RunConfig& c, const std::string&, const std::string& v) { c.kernel.table = trim(v); }},
      {"run", "scheme",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.run.scheme = parse_scheme(trim(v));
         } catch (const DomainError&) {
           throw ConfigError(k, "expected mild, l1 or pme, got '" + trim(v) + "'");
         }
       }},
      {"run", "dt",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.run.dt = to_double(k, v); }},
      {"run", "t_final",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.run.t_final = to_double(k, v); }},
      {"run", "blowup_threshold",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.run.blowup_threshold = to_double(k, v);
       }},
      {"run", "c_gn",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (trim(v) == "probe")
           c.c_gn.reset();
         else
           c.c_gn = to_double(k, v);
       }},
      {"run", "seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const int s = to_int(k, v);
         if (s < 0)
           throw ConfigError(k, "must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"run", "output",
       [](RunConfig& c, const std::string&, const std::string& v) { c.output = trim(v); }},
      {"run", "u0",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "sine")
           c.u0 = InitialShape::sine;
         else if (t == "phi1")
           c.u0 = InitialShape::phi1;
         else if (t == "e1")
           c.u0 = InitialShape::e1;
         else if (t == "coeffs")
           c.u0 = InitialShape::coeffs;
         else
           throw ConfigError(k, "expected sine, phi1, e1 or coeffs, got '" + t + "'");
       }},
      {"run", "u0_amplitude",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.u0_amplitude = to_double(k, v); }},
      {"run", "u0_H0",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.u0_H0 = to_double(k, v); }},
      {"run", "u0_coeffs",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.u0_coeffs = to_list(k, v); }},
  };
  return table;
}

const KeyDef* find_key(const std::string& section, const std::string& name) {
  for (const auto& d : key_table())
    if (section == d.section && name == d.name)
      return &d;
  return nullptr;
}

// Resolves "section.key" or a bare key name.
const KeyDef* resolve(const std::string& key) {
  const auto dot = key.find('.');
  if (dot != std::string::npos)
    return find_key(key.substr(0, dot), key.substr(dot + 1));
  const KeyDef* hit = nullptr;
  for (const auto& d : key_table())
    if (key == d.name) {
      if (hit)
        return nullptr;
      hit = &d;
    }
  return hit;
}

std::string full_name(const KeyDef& d) { return std::string(d.section) + "." + d.name; }

} // namespace

void RunConfig::validate() const {
  try {
    domain.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(what.find("grid") != std::string::npos ? "domain.grid" : "domain.lengths", what);
  }
  if (n_modes < 1)
    throw ConfigError("domain.n_modes", "must be at least 1");
  try {
    model.validate();
  } catch (const DomainError& e) {
    const std::string what = e.what();
    throw ConfigError("model." + what.substr(0, what.find(':')), what.substr(what.find(':') + 2));
  }
  if (!(kernel.eta > 0.0))
    throw ConfigError("kernel.eta", "must be positive");
  if (kernel.kind == KernelKind::gaussian_floor) {
    if (!(kernel.width > 0.0))
      throw ConfigError("kernel.width", "must be positive");
    if (!(kernel.floor >= 0.0))
      throw ConfigError("kernel.floor", "must be non-negative");
  }
  if (kernel.kind == KernelKind::tabulated && kernel.table.empty())
    throw ConfigError("kernel.table", "required for a tabulated kernel");
  if (!(run.dt > 0.0))
    throw ConfigError("run.dt", "must be positive");
  if (!(run.t_final > 0.0))
    throw ConfigError("run.t_final", "must be positive");
  if (run.dt > run.t_final)
    throw ConfigError("run.dt", "exceeds t_final");
  if (run.t_final / run.dt > 1e6)
    throw ConfigError("run.dt", "more than 1e6 steps requested");
  if (run.blowup_threshold < 0.0)
    throw ConfigError("run.blowup_threshold", "must be non-negative (0 selects the default)");
  if (run.scheme == Scheme::pme && !model.m)
    throw ConfigError("model.m", "required by the pme scheme");
  if (c_gn && !(*c_gn > 0.0))
    throw ConfigError("run.c_gn", "must be positive or 'probe'");
  if (u0 == InitialShape::e1 && u0_H0 && !(*u0_H0 >= 0.0))
    throw ConfigError("run.u0_H0", "must be non-negative");
  if (u0 == InitialShape::coeffs) {
    if (u0_coeffs.empty())
      throw ConfigError("run.u0_coeffs", "required for u0 = coeffs");
    if (static_cast<int>(u0_coeffs.size()) > n_modes)
      throw ConfigError("run.u0_coeffs", "more coefficients than modes");
  }
}

RunConfig parse_config(std::istream& is, const std::string& base_dir) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed configuration: ") + e.message() + " (line " +
                              std::to_string(e.line()) + ")");
  }
  RunConfig cfg;
  cfg.base_dir = base_dir;
  std::vector<std::string> unknown;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      unknown.push_back(section + " (outside any section)");
      continue;
    }
    for (const auto& [name, value] : body) {
      const KeyDef* d = find_key(section, name);
      if (!d) {
        unknown.push_back(section + "." + name);
        continue;
      }
      d->set(cfg, full_name(*d), value.data());
    }
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown)
      list += (list.empty() ? "" : ", ") + u;
    throw ConfigError(unknown.front(), "unknown keys: " + list);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("", "cannot open configuration file '" + path + "'");
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(in, dir.empty() ? "." : dir.string());
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const KeyDef* d = resolve(key);
  if (!d)
    throw ConfigError(key, "unknown configuration key");
  d->set(cfg, full_name(*d), value);
}

const std::vector<std::string>& sweepable_keys() {
  static const std::vector<std::string> keys = {
      "model.alpha", "model.s",      "model.mu",        "model.k",      "model.gamma",
      "model.m",     "kernel.eta",   "run.dt",          "run.t_final",  "run.u0_amplitude",
      "run.u0_H0",   "run.seed",     "domain.n_modes"};
  return keys;
}

std::string canonical_sweep_key(const std::string& key) {
  const KeyDef* d = resolve(key);
  if (!d)
    throw ConfigError(key, "unknown configuration key");
  const std::string name = full_name(*d);
  const auto& keys = sweepable_keys();
  if (std::find(keys.begin(), keys.end(), name) == keys.end())
    throw ConfigError(key, "not sweepable");
  return name;
}

KernelSpec make_kernel(const RunConfig& cfg) {
  switch (cfg.kernel.kind) {
  case KernelKind::uniform:
    return KernelSpec::uniform(cfg.kernel.eta);
  case KernelKind::gaussian_floor:
    return KernelSpec::gaussian_floor(cfg.kernel.width, cfg.kernel.floor, cfg.kernel.eta);
  case KernelKind::tabulated: {
    std::filesystem::path p(cfg.kernel.table);
    if (p.is_relative())
      p = std::filesystem::path(cfg.base_dir) / p;
    std::ifstream in(p);
    if (!in)
      throw ConfigError("kernel.table", "cannot open '" + p.string() + "'");
    try {
      return KernelSpec::tabulated_csv(in, cfg.kernel.eta);
    } catch (const DomainError& e) {
      throw ConfigError("kernel.table", e.what());
    }
  }
  }
  throw ConfigError("kernel.kind", "unsupported");
}

GridField make_initial(const RunConfig& cfg, const BasisPtr& basis) {
  const DomainSpec& d = basis->domain();
  switch (cfg.u0) {
  case InitialShape::sine:
    return sample(d, [&](double x, double y) {
      double v = cfg.u0_amplitude * std::sin(M_PI * x / d.lengths[0]);
      if (d.dimension == 2)
        v *= std::sin(M_PI * y / d.lengths[1]);
      return v;
    });
  case InitialShape::phi1:
    return sample(d, [&](double x, double y) { return cfg.u0_amplitude * basis->eval(0, x, y); });
  case InitialShape::e1: {
    const auto& e1 = basis->e1();
    double scale = cfg.u0_amplitude;
    if (cfg.u0_H0) {
      const auto& w = basis->weights();
      double ee = 0.0;
      for (std::size_t i = 0; i < e1.size(); ++i)
        ee += w[i] * e1[i] * e1[i];
      scale = *cfg.u0_H0 / ee;
    }
    std::vector<double> v(e1.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = scale * e1[i];
    return GridField(d, std::move(v));
  }
  case InitialShape::coeffs: {
    SpectralField c(basis);
    for (std::size_t j = 0; j < cfg.u0_coeffs.size(); ++j)
      c.coeffs[j] = cfg.u0_amplitude * cfg.u0_coeffs[j];
    return reconstruct(c);
  }
  }
  throw ConfigError("run.u0", "unsupported");
}

} // namespace fracrd
