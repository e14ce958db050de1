#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include <nld/equations.hpp>
#include <nld/grid.hpp>
#include <nld/ode.hpp>
#include <nld/types.hpp>

namespace nld::cli {

/// njl, soler or p:<value>
struct ModelChoice {
  enum class Family { Njl, Soler, Interpolating } family = Family::Njl;
  double p = 1.0;

  static ModelChoice parse(std::string const& text);
  std::string name() const;
  ModuleLaw law() const;
  /// The explicitly written models; empty for the interpolating family.
  std::optional<Model> model() const;
};

struct OdeOptions {
  double r_start = 1.0; // units of 1/m
  double r_end = 10.0;
  std::optional<double> x0; // default: exact branch
  std::optional<double> g0;
  double rtol = 1e-9;
  double atol = 1e-12;
};

struct RunConfig {
  ModelChoice model{};
  double mass = 1.0;
  std::optional<double> energy; // default m
  std::optional<double> l;      // default 1/2
  FieldGrid grid{};
  std::uint64_t seed = 42;
  double tol = 1e-8;
  double identity_tol = 1e-10;
  SingularMask mask{};
  std::string out;
  std::string format; // empty: per-command default
  std::optional<std::pair<int, int>> scan_el;
  OdeOptions ode{};
  /// Whether model and grid were given explicitly (flag or config file);
  /// ode and locus pick their own defaults otherwise.
  bool model_set = false;
  bool grid_set = false;

  ModelSpec spec() const;
  void validate() const;
};

/// Parse "a,b" / "a,b,c,d" style lists.
std::pair<int, int> parse_scan_el(std::string const& text);
FieldGrid parse_grid(std::string const& text, FieldGrid base);
SingularMask parse_mask(std::string const& text);

/// Apply the keys of a JSON config object on top of cfg.
void apply_json(RunConfig& cfg, nlohmann::json const& j);
RunConfig load_config_file(std::string const& path, RunConfig base = {});

nlohmann::ordered_json describe(RunConfig const& cfg);

} // namespace nld::cli
