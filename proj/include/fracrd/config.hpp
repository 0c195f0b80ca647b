#pragma once

#include "fracrd/kernel.hpp"
#include "fracrd/solver.hpp"
#include "fracrd/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracrd {

enum class InitialShape { sine, phi1, e1, coeffs };

struct KernelConfig {
  KernelKind kind = KernelKind::uniform;
  double eta = 0.5;
  double width = 0.1;
  double floor = 0.5;
  std::string table;  // CSV path, relative to the config file
};

// Parsed run configuration. Sections [domain], [model], [kernel], [run].
struct RunConfig {
  DomainSpec domain;
  int n_modes = 16;
  ModelParams model;
  KernelConfig kernel;
  RunOptions run;
  std::optional<double> c_gn;  // unset means probe
  std::uint64_t seed = 1;
  std::string output = "fracrd_out";
  InitialShape u0 = InitialShape::sine;
  double u0_amplitude = 1.0;
  std::optional<double> u0_H0;        // e1 shape: scale so that int u0 e1 = H0
  std::vector<double> u0_coeffs;      // coeffs shape
  std::string base_dir = ".";

  // Range checks that do not need the basis. Throws ConfigError.
  void validate() const;
};

RunConfig parse_config(std::istream& is, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

// Sets one key ("section.key" or a bare key that is unique across sections).
// Throws ConfigError for unknown keys or unparsable values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Keys accepted by set_config_value in a sweep.
const std::vector<std::string>& sweepable_keys();
// Canonical "section.key" form of a sweepable key; throws ConfigError otherwise.
std::string canonical_sweep_key(const std::string& key);

KernelSpec make_kernel(const RunConfig& cfg);
GridField make_initial(const RunConfig& cfg, const BasisPtr& basis);

} // namespace fracrd
