#include "seqtrack/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "seqtrack/errors.hpp"

namespace seqtrack {

namespace {

constexpr std::uint64_t kLaplaceStream = 2;

// Runs body(i) for i in [0, n). Each index is handled exactly once; the
// first exception is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; !failed && (i = next.fetch_add(1)) < n;) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

CostEstimate make_estimate(std::span<const double> samples, double tail_bound) {
  if (samples.size() < 2) throw DomainError("make_estimate: need at least two samples");
  CostEstimate e;
  e.n = samples.size();
  const double n = static_cast<double>(e.n);
  e.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0;
  for (double v : samples) ss += (v - e.mean) * (v - e.mean);
  e.variance = ss / (n - 1);
  e.std_error = std::sqrt(e.variance / n);
  e.ci_low = e.mean - 1.96 * e.std_error;
  e.ci_high = e.mean + 1.96 * e.std_error;
  e.tail_bound = tail_bound;
  return e;
}

PairedDifference paired_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("paired_difference: length mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const CostEstimate e = make_estimate(d);
  return {e.mean, e.std_error, e.n};
}

std::vector<PolicyEvaluation> evaluate_policies(const ModelParams& p,
                                                std::span<const Policy> policies,
                                                const SimConfig& sim, const McOptions& mc) {
  sim.validate();
  if (mc.n_paths < 2) throw ValidationError("paths", "paths: need at least two replications");
  for (const auto& pol : policies) pol.validate();

  const std::size_t n = mc.n_paths, np = policies.size();
  std::vector<PolicyEvaluation> out(np);
  std::vector<std::vector<std::size_t>> switches(np, std::vector<std::size_t>(n));
  for (std::size_t j = 0; j < np; ++j) {
    out[j].policy = policies[j];
    out[j].theta_costs.resize(n);
    out[j].m_costs.resize(n);
  }
  double tail = 0;
  parallel_for(n, mc.threads, [&](std::size_t i) {
    PathBundle b = simulate_path(p, sim, i);
    for (std::size_t j = 0; j < np; ++j) {
      b.control = run_policy(policies[j], b);
      const CostAccumulator th = cost_theta_form(p, b);
      const CostAccumulator mf = cost_m_form(p, b);
      out[j].theta_costs[i] = th.total();
      out[j].m_costs[i] = mf.total();
      switches[j][i] = th.switches;
      if (i == 0 && j == 0) tail = th.tail_bound;
    }
  });
  for (std::size_t j = 0; j < np; ++j) {
    out[j].theta_form = make_estimate(out[j].theta_costs, tail);
    out[j].m_form = make_estimate(out[j].m_costs, tail);
    out[j].mean_switches =
        std::accumulate(switches[j].begin(), switches[j].end(), 0.0) / static_cast<double>(n);
  }
  return out;
}

PolicyEvaluation estimate_cost(const ModelParams& p, const Policy& policy, const SimConfig& sim,
                               const McOptions& mc) {
  return std::move(evaluate_policies(p, std::span(&policy, 1), sim, mc).front());
}

SweepResult threshold_sweep(const ModelParams& p, const SimConfig& sim,
                            std::span<const double> B_grid, const McOptions& mc, CostForm form,
                            Side a_init, bool with_never_baseline) {
  SweepResult res;
  res.form = form;
  if (B_grid.empty()) return res;

  std::vector<Policy> policies;
  for (double B : B_grid) policies.push_back(Policy::threshold(B, a_init));
  if (with_never_baseline) policies.push_back(Policy::never(a_init));
  auto evals = evaluate_policies(p, policies, sim, mc);
  if (with_never_baseline) {
    res.baseline = std::move(evals.back());
    evals.pop_back();
  }

  std::size_t best = 0;
  for (std::size_t j = 1; j < evals.size(); ++j) {
    if (evals[j].estimate(form).mean < evals[best].estimate(form).mean) best = j;
  }
  res.argmin = best;
  const CostEstimate& b = evals[best].estimate(form);
  for (std::size_t j = 0; j < evals.size(); ++j) {
    const CostEstimate& e = evals[j].estimate(form);
    SweepRow row{B_grid[j], evals[j].theta_form, evals[j].m_form,
                 paired_difference(evals[j].costs(form), evals[best].costs(form))};
    res.rows.push_back(row);
    if (e.ci_low <= b.ci_high) res.overlap_set.push_back(B_grid[j]);
  }
  return res;
}

CostEstimate hitting_laplace_mc(const ModelParams& p, double x, double y,
                                const LaplaceOptions& opts) {
  if (!(y < x && y > -1 && x < 1)) throw DomainError("hitting_laplace_mc: need -1 < y < x < 1");
  if (opts.n_paths < 2) throw ValidationError("paths", "paths: need at least two replications");
  if (!(opts.dt > 0 && opts.horizon > opts.dt)) {
    throw ValidationError("dt", "dt: need 0 < dt < horizon");
  }
  const double dt = opts.dt, sq = std::sqrt(dt), mu = p.mu(), two_lambda = 2.0 * p.lambda();
  const auto n_steps = static_cast<std::size_t>(std::ceil(opts.horizon / dt));
  std::vector<double> samples(opts.n_paths);
  for (std::size_t i = 0; i < opts.n_paths; ++i) {
    auto eng = path_engine(opts.seed, i, kLaplaceStream);
    boost::random::normal_distribution<double> normal;
    boost::random::uniform_01<double> unif;
    double m = x, hit = -1;
    for (std::size_t k = 0; k < n_steps; ++k) {
      const double sigma = mu * (1.0 - m * m);
      double next = m - two_lambda * m * dt + sigma * sq * normal(eng);
      next = std::clamp(next, -1.0 + 1e-12, 1.0 - 1e-12);
      const double t = k * dt;
      if (next <= y) {
        hit = t + dt * (m - y) / (m - next);
        break;
      }
      const double bridge = std::exp(-2.0 * (m - y) * (next - y) / (sigma * sigma * dt));
      if (unif(eng) < bridge) {
        hit = t + 0.5 * dt;
        break;
      }
      m = next;
    }
    samples[i] = hit < 0 ? 0.0 : std::exp(-p.alpha() * hit);
  }
  return make_estimate(samples, std::exp(-p.alpha() * opts.horizon));
}

}  // namespace seqtrack
