#include "seqtrack/simulate.hpp"

#include <algorithm>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <string>

#include "seqtrack/errors.hpp"

namespace seqtrack {

namespace {

constexpr std::uint64_t kThetaStream = 0;
constexpr std::uint64_t kNoiseStream = 1;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw ValidationError("dt", "dt: must be > 0");
  if (!(horizon >= dt) || !std::isfinite(horizon)) {
    throw ValidationError("horizon", "horizon: must be >= dt");
  }
  if (!(x0 >= -1.0 && x0 <= 1.0)) throw ValidationError("x0", "x0: must lie in [-1, 1]");
  if (!(clip > 0 && clip < 0.5)) throw ValidationError("clip", "clip: must lie in (0, 0.5)");
  if (noise_substeps < 1) {
    throw ValidationError("noise_substeps", "noise_substeps: must be >= 1");
  }
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index, std::uint64_t stream) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(path_index + 0x632be59bd9b4e019ULL));
  const std::uint64_t c = splitmix64(b ^ splitmix64(stream + 0x8cb92ba72f3d8dd7ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

double ThetaPath::integral(double t0, double t1) const {
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t0);
  double s = sign(initial) * ((it - jump_times.begin()) % 2 == 0 ? 1.0 : -1.0);
  double acc = 0;
  double from = t0;
  for (; it != jump_times.end() && *it < t1; ++it) {
    acc += s * (*it - from);
    from = *it;
    s = -s;
  }
  return acc + s * (t1 - from);
}

ThetaPath simulate_theta(const ModelParams& p, const SimConfig& cfg, std::uint64_t path_index) {
  cfg.validate();
  auto eng = path_engine(cfg.seed, path_index, kThetaStream);
  boost::random::uniform_01<double> unif;
  boost::random::exponential_distribution<double> hold(p.lambda());

  ThetaPath th;
  th.initial = unif(eng) < 0.5 * (1.0 + cfg.x0) ? Side::Up : Side::Down;
  const std::size_t n = cfg.steps();
  const double t_end = n * cfg.dt;
  for (double t = hold(eng); t <= t_end; t += hold(eng)) th.jump_times.push_back(t);

  th.values.resize(n + 1);
  std::size_t next = 0;
  std::int8_t s = static_cast<std::int8_t>(sign(th.initial));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = k * cfg.dt;
    while (next < th.jump_times.size() && th.jump_times[next] <= t) {
      s = static_cast<std::int8_t>(-s);
      ++next;
    }
    th.values[k] = s;
  }
  return th;
}

std::vector<double> simulate_observation(const ModelParams& p, const ThetaPath& theta,
                                         const SimConfig& cfg, std::uint64_t path_index) {
  cfg.validate();
  const std::size_t n = cfg.steps();
  if (theta.values.size() != n + 1) {
    throw GridMismatch("simulate_observation: theta has " + std::to_string(theta.values.size()) +
                       " points, grid has " + std::to_string(n + 1));
  }
  auto eng = path_engine(cfg.seed, path_index, kNoiseStream);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  const double sub_sd = std::sqrt(cfg.dt / cfg.noise_substeps);

  std::vector<double> x(n + 1);
  x[0] = 0.0;
  auto jump = theta.jump_times.begin();
  double s = sign(theta.initial);
  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = k * cfg.dt, t1 = (k + 1) * cfg.dt;
    // int theta over [t0, t1], walking the jump list forward.
    double drift = 0, from = t0;
    for (; jump != theta.jump_times.end() && *jump < t1; ++jump) {
      drift += s * (*jump - from);
      from = *jump;
      s = -s;
    }
    drift += s * (t1 - from);
    double noise = 0;
    for (int j = 0; j < cfg.noise_substeps; ++j) noise += normal(eng);
    x[k + 1] = x[k] + p.mu() * drift + sub_sd * noise;
  }
  return x;
}

std::vector<double> filter_posterior_mean(const ModelParams& p, std::span<const double> x_path,
                                          const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.steps();
  if (x_path.size() != n + 1) {
    throw GridMismatch("filter_posterior_mean: observation path has " +
                       std::to_string(x_path.size()) + " points, grid has " +
                       std::to_string(n + 1));
  }
  const double lo = -1.0 + cfg.clip, hi = 1.0 - cfg.clip;
  const double dt = cfg.dt, mu = p.mu(), two_lambda = 2.0 * p.lambda();
  const bool milstein = cfg.scheme == FilterScheme::Milstein;

  std::vector<double> m(n + 1);
  double cur = std::clamp(cfg.x0, lo, hi);
  m[0] = cur;
  for (std::size_t k = 0; k < n; ++k) {
    const double innovation = (x_path[k + 1] - x_path[k]) - mu * cur * dt;
    const double spread = 1.0 - cur * cur;
    double next = cur - two_lambda * cur * dt + mu * spread * innovation;
    if (milstein) next -= mu * mu * cur * spread * (innovation * innovation - dt);
    cur = std::clamp(next, lo, hi);
    m[k + 1] = cur;
  }
  return m;
}

PathBundle simulate_path(const ModelParams& p, const SimConfig& cfg, std::uint64_t path_index) {
  PathBundle b;
  b.dt = cfg.dt;
  b.theta = simulate_theta(p, cfg, path_index);
  b.x_obs = simulate_observation(p, b.theta, cfg, path_index);
  b.m = filter_posterior_mean(p, b.x_obs, cfg);
  const std::size_t n = cfg.steps();
  b.t.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) b.t[k] = k * cfg.dt;
  return b;
}

}  // namespace seqtrack
