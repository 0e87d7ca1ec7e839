#pragma once

#include <cstdint>
#include <string_view>

namespace seqtrack {

/// Problem inputs for tracking a symmetric two-state Markov drift.
///
/// The hidden signal theta jumps between -1 and +1 with intensity `lambda`,
/// and is observed through X_t = int mu*theta ds + W_t. A tracker pays unit
/// running cost while it disagrees with theta, `c1` per switch and an extra
/// `c2` when the switch lands on the wrong side. Everything is discounted at
/// rate `alpha`.
///
/// The derived constants beta = 1/(2 lambda + alpha) and
/// gamma = (c1 + c2/2) / (beta + c2/2) are computed once at construction.
class ModelParams {
 public:
  /// Throws ValidationError naming the first offending key.
  ModelParams(double lambda, double mu, double alpha, double c1, double c2);

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  double alpha() const noexcept { return alpha_; }
  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }

  /// Same model with a different fixed switching cost.
  ModelParams with_c1(double c1) const { return {lambda_, mu_, alpha_, c1, c2_}; }

  /// lambda = alpha = 1/4, mu = 1, c1 = 1/4, c2 = 0.
  static ModelParams reference();

 private:
  double lambda_, mu_, alpha_, c1_, c2_;
  double beta_, gamma_;
};

enum class Regime : std::uint8_t { Switching, NeverSwitch };

/// A value of the control (and of the hidden signal): -1 or +1.
enum class Side : std::int8_t { Down = -1, Up = 1 };

constexpr int sign(Side s) noexcept { return static_cast<int>(s); }
constexpr Side opposite(Side s) noexcept { return s == Side::Up ? Side::Down : Side::Up; }
/// Throws DomainError unless v is -1 or +1.
Side side_from_int(int v);

std::string_view to_string(Regime r) noexcept;

/// Switching iff c1 < beta. The boundary case c1 == beta never switches.
Regime regime(const ModelParams& p) noexcept;

/// Particular solution of L V = -(1 - x)/2; also the cost of never switching
/// away from +1 started at posterior mean x. Defined on [-1, 1].
double v_tilde(const ModelParams& p, double x);
double v_tilde_prime(const ModelParams& p) noexcept;

/// L f(x) = mu^2/2 (1 - x^2)^2 f'' - 2 lambda x f' - alpha f on (-1, 1).
double l_residual(const ModelParams& p, double x, double f, double f1, double f2);

/// Second derivative of any solution of L f = 0, read off the ODE itself.
double homogeneous_second_derivative(const ModelParams& p, double x, double f, double f1);

/// (1 - x)(1 + x) without cancellation near |x| = 1.
inline double one_minus_sq(double x) noexcept { return (1.0 - x) * (1.0 + x); }

}  // namespace seqtrack
