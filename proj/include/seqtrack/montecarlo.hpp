#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqtrack/model.hpp"
#include "seqtrack/policy.hpp"
#include "seqtrack/simulate.hpp"

namespace seqtrack {

/// Sample mean of i.i.d. replications with its standard error and a normal
/// 95% interval. `tail_bound` is the worst-case bias from horizon truncation.
struct CostEstimate {
  double mean = 0;
  double std_error = 0;
  double variance = 0;
  std::size_t n = 0;
  double ci_low = 0;
  double ci_high = 0;
  double tail_bound = 0;

  bool covers(double v, double allowance = 0.0) const noexcept {
    return v >= ci_low - allowance && v <= ci_high + allowance;
  }
};

/// Throws DomainError for fewer than two samples.
CostEstimate make_estimate(std::span<const double> samples, double tail_bound = 0.0);

/// Mean and standard error of a[i] - b[i].
struct PairedDifference {
  double mean = 0;
  double std_error = 0;
  std::size_t n = 0;
};
PairedDifference paired_difference(std::span<const double> a, std::span<const double> b);

struct McOptions {
  std::size_t n_paths = 10'000;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct PolicyEvaluation {
  Policy policy;
  CostEstimate theta_form;
  CostEstimate m_form;
  /// Per-path totals, indexed by path.
  std::vector<double> theta_costs;
  std::vector<double> m_costs;
  double mean_switches = 0;

  const CostEstimate& estimate(CostForm f) const {
    return f == CostForm::ThetaForm ? theta_form : m_form;
  }
  const std::vector<double>& costs(CostForm f) const {
    return f == CostForm::ThetaForm ? theta_costs : m_costs;
  }
};

/// Evaluates every policy on the same simulated paths (common random
/// numbers). Path i always uses the streams of (sim.seed, i), so the result
/// does not depend on the thread count.
std::vector<PolicyEvaluation> evaluate_policies(const ModelParams& p,
                                                std::span<const Policy> policies,
                                                const SimConfig& sim, const McOptions& mc);

/// Estimates J(x0, A) for one policy in both cost forms.
PolicyEvaluation estimate_cost(const ModelParams& p, const Policy& policy, const SimConfig& sim,
                               const McOptions& mc);

struct SweepRow {
  double B;
  CostEstimate theta_form;
  CostEstimate m_form;
  /// This row minus the argmin row, paired across paths.
  PairedDifference vs_best;
};

struct SweepResult {
  CostForm form = CostForm::MForm;
  std::vector<SweepRow> rows;
  std::optional<std::size_t> argmin;
  /// Thresholds whose 95% interval overlaps the argmin's.
  std::vector<double> overlap_set;
  /// Optional baseline evaluated on the same paths (e.g. never switching).
  std::optional<PolicyEvaluation> baseline;
};

/// Threshold(B) for every B in the grid, on common random numbers.
/// An empty grid yields an empty table.
SweepResult threshold_sweep(const ModelParams& p, const SimConfig& sim,
                            std::span<const double> B_grid, const McOptions& mc,
                            CostForm form = CostForm::MForm, Side a_init = Side::Up,
                            bool with_never_baseline = false);

struct LaplaceOptions {
  std::size_t n_paths = 10'000;
  double dt = 1e-3;
  /// Paths still above the level at this time contribute zero.
  double horizon = 60.0;
  std::uint64_t seed = 7;
};

/// Monte Carlo estimate of E_x[exp(-alpha T_y)] for y < x, where T_y is the
/// first time the posterior-mean diffusion reaches y. Crossings between grid
/// points are detected with the Brownian-bridge probability.
CostEstimate hitting_laplace_mc(const ModelParams& p, double x, double y,
                                const LaplaceOptions& opts = {});

}  // namespace seqtrack
