#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "seqtrack/model.hpp"

namespace seqtrack {

enum class FilterScheme : std::uint8_t {
  /// M += -2 lambda M dt + mu (1 - M^2)(dX - mu M dt)
  EulerMaruyama,
  /// Euler plus the Ito correction -mu^2 M (1 - M^2)((dX - mu M dt)^2 - dt).
  Milstein,
};

struct SimConfig {
  double dt = 1e-3;
  double horizon = 50.0;
  /// Initial posterior mean; theta_0 = +1 with probability (1 + x0)/2.
  double x0 = 0.0;
  std::uint64_t seed = 20151209;
  FilterScheme scheme = FilterScheme::EulerMaruyama;
  /// The filter is clamped to [-1 + clip, 1 - clip].
  double clip = 1e-9;
  /// Each observation increment sums this many Gaussian draws of variance
  /// dt/noise_substeps. A run at (dt, 2) sees the same Brownian path as a
  /// run at (dt/2, 1) with the same seed.
  int noise_substeps = 1;

  /// Throws ValidationError.
  void validate() const;
  /// Number of steps N; the grid is t_k = k dt for k = 0..N.
  std::size_t steps() const;
};

/// Random engine for one (seed, path, stream) triple.
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index, std::uint64_t stream);

/// Hidden signal sampled exactly: initial state and continuous jump times,
/// plus its values on the grid (cadlag: the value at t_k includes a jump at
/// t_k).
struct ThetaPath {
  Side initial = Side::Up;
  std::vector<double> jump_times;
  std::vector<std::int8_t> values;

  /// int_{t0}^{t1} theta_s ds.
  double integral(double t0, double t1) const;
};

/// A control path on the simulation grid.
struct ControlPath {
  Side a_init = Side::Up;  // A_{0-}
  std::vector<std::int8_t> values;
  std::vector<std::size_t> switch_steps;
};

struct PathBundle {
  double dt = 0;
  std::vector<double> t;
  ThetaPath theta;
  std::vector<double> x_obs;
  std::vector<double> m;
  std::optional<ControlPath> control;

  std::size_t steps() const noexcept { return t.empty() ? 0 : t.size() - 1; }
};

ThetaPath simulate_theta(const ModelParams& p, const SimConfig& cfg, std::uint64_t path_index);

/// X_0 = 0 and X_{k+1} - X_k = mu int theta ds + sqrt(dt) Z.
std::vector<double> simulate_observation(const ModelParams& p, const ThetaPath& theta,
                                         const SimConfig& cfg, std::uint64_t path_index);

/// Posterior mean of theta driven by the observation path.
/// Throws GridMismatch if x_path does not have steps() + 1 entries.
std::vector<double> filter_posterior_mean(const ModelParams& p, std::span<const double> x_path,
                                          const SimConfig& cfg);

/// theta, X and M for one path index.
PathBundle simulate_path(const ModelParams& p, const SimConfig& cfg, std::uint64_t path_index);

}  // namespace seqtrack
