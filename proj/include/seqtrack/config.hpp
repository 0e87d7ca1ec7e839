#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "seqtrack/boundary.hpp"
#include "seqtrack/model.hpp"
#include "seqtrack/ode.hpp"
#include "seqtrack/simulate.hpp"

namespace seqtrack {

std::string_view version() noexcept;

struct NumericsConfig {
  double epsilon = 1e-4;
  double ode_tol = 1e-10;
  double root_tol = 1e-12;
  FitTolerances fit;
};

struct OutputConfig {
  /// Directory for reports and relative dump paths; empty means cwd.
  std::string dir;
  /// "json" or "csv" for the table printed to stdout.
  std::string format = "json";
};

/// Everything a run needs. `sim.seed` doubles as the master seed; the clip
/// margin lives in `sim.clip`.
struct RunConfig {
  ModelParams model = ModelParams::reference();
  SimConfig sim;
  NumericsConfig numerics;
  OutputConfig output;
  std::size_t paths = 10'000;
  unsigned threads = 0;

  PhiOptions phi_options() const;
  RootOptions root_options() const;
  /// Throws ValidationError naming the first bad key.
  void validate() const;
};

/// Parses a config document.
///
///   {"model": {"lambda", "mu", "alpha", "c1", "c2"},
///    "sim": {"dt", "horizon", "x0", "scheme", "noise_substeps", "clip", "paths", "threads"},
///    "numerics": {"epsilon", "ode_tol", "root_tol", "continuous_fit", "smooth_fit",
///                 "ode_residual", "sign_margin", "grid_points"},
///    "output": {"dir", "format"},
///    "seed": 123}
///
/// The five model keys may also sit at the top level. All five are required;
/// the other sections are optional. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved config in the same layout parse_config reads.
nlohmann::json to_json(const RunConfig& cfg);

std::string_view to_string(FilterScheme s) noexcept;
FilterScheme scheme_from_string(const std::string& s);

}  // namespace seqtrack
