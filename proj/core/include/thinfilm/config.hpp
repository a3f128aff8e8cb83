#pragma once

#include "thinfilm/energy.hpp"
#include "thinfilm/fields.hpp"
#include "thinfilm/limits.hpp"
#include "thinfilm/sweep.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace thinfilm {

struct MinimizeSettings {
  int max_iterations = 500;
  double grad_tol = 1e-12;
  std::string step_rule = "lbfgs";  // lbfgs | steepest
  int history = 10;
  double perturbation = 0.0;         // amplitude of the random start, in lattice spacings
  int n1 = 8, n2 = 8, nu = 2;
  double epsilon = 1.0;
  bool restricted = false;
};

struct RunConfig {
  AtomisticModel model;
  std::shared_ptr<DisplacementField> field;
  std::string field_family;
  // Force density on S; empty when absent.
  std::vector<TrigTerm> force_f1, force_f2, force_f3;
  bool has_force = false;
  Regime regime = Regime::ultrathin;
  std::vector<SweepLevel> levels;
  double length1 = 1.0;
  double length2 = 1.0;
  int quad_m = 256;
  std::size_t diagnostics_max_cells = std::size_t{1} << 22;
  std::uint64_t seed = 1;
  MinimizeSettings minimize;

  SweepOptions sweep_options() const;
  ForceDensity force_density() const;
};

/// Parses the JSON run description. Throws ConfigError on missing or malformed keys.
/// A seed override replaces the file's seed before any random field is drawn.
RunConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);
RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

Regime parse_regime(const std::string& tag);
std::string regime_name(Regime r);

}  // namespace thinfilm
