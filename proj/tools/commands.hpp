#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include <nld/grid.hpp>

#include "run_config.hpp"

namespace nld::cli {

using ordered_json = nlohmann::ordered_json;

struct SuiteResult {
  std::string name;
  /// identity suites hold for any field; model suites test the solutions
  bool identity = false;
  ResidualStats stats{};
  double tolerance = 0.0;
  std::string error; // first evaluation failure, if any

  bool pass() const { return error.empty() && stats.count > 0 && stats.max <= tolerance; }
};

struct VerifyReport {
  std::vector<SuiteResult> suites;

  bool pass() const;
  std::vector<std::string> failing() const;
  SuiteResult const& suite(std::string const& name) const;
};

/// Number of random points used by the finite-difference suites.
inline constexpr std::size_t kRandomPoints = 50;
inline constexpr std::size_t kRandomSpinors = 1000;

VerifyReport run_verify(RunConfig const& cfg);
ordered_json to_json(VerifyReport const& report, RunConfig const& cfg);
void write_verify_csv(std::ostream& os, VerifyReport const& report);

/// r-major rows r,theta,phi2,sin_beta,cos_beta,X,masked.
void write_fieldmap_csv(std::ostream& os, RunConfig const& cfg);
ordered_json fieldmap_json(RunConfig const& cfg);

/// Integrates the Soler system; trajectory rows go to csv when non-null.
/// Throws SpanCrossesSingularRadius on spans containing 1/(2m).
ordered_json run_ode(RunConfig const& cfg, std::ostream* csv);
ordered_json run_scan(RunConfig const& cfg, int n_E, int n_l);

ordered_json run_locus(RunConfig const& cfg);

/// Whole pipeline: verify, locus, default ODE run and 11x11 scan.
ordered_json run_report(RunConfig const& cfg, int& exit_code);

/// Entry point shared by the executable and the tests.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

} // namespace nld::cli
