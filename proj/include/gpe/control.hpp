#pragma once

#include <memory>
#include <random>
#include <vector>

namespace gpe {

/// Scalar control law u(t) on [0, T].
///
/// Piecewise-constant signals hold values[j] on [j*Delta, (j+1)*Delta) with
/// Delta = T / values.size(); the last piece is closed at T. Sampled signals
/// interpolate linearly between values on a uniform grid including both
/// endpoints. A sinusoid-perturbed signal is base(t) + A sin(2 pi n t / T).
class ControlSignal
{
 public:
  enum class Kind
  {
    zero,
    piecewise_constant,
    sampled,
    sinusoid_perturbed,
  };

  ControlSignal() = default;  // zero on [0, 1]

  static ControlSignal zero(double horizon);
  static ControlSignal piecewise_constant(double horizon, std::vector<double> values);
  static ControlSignal sampled(double horizon, std::vector<double> values);
  static ControlSignal sinusoid_perturbed(ControlSignal base, double amplitude, int frequency);

  /// Piecewise-constant control with `pieces` i.i.d. standard normal values,
  /// rescaled so that ||u||_{L^r([0,T])} equals `norm` exactly.
  static ControlSignal random_piecewise(double horizon, int pieces, double norm, double r,
                                        std::mt19937_64& rng);

  Kind kind() const noexcept { return kind_; }
  double horizon() const noexcept { return horizon_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double amplitude() const noexcept { return amplitude_; }
  int frequency() const noexcept { return frequency_; }
  const ControlSignal* base() const noexcept { return base_.get(); }

  double operator()(double t) const;

  /// Exact integral of u over [a, b] (clamped to [0, T]).
  double integral(double a, double b) const;

  /// Exact integral of |u| over [a, b].
  double abs_integral(double a, double b) const;

  /// ||u||_{L^r([a,b])}; r = 1 and r = 2 are exact for piecewise-constant
  /// and sampled signals.
  double lr_norm(double r, double a, double b) const;
  double lr_norm(double r) const { return lr_norm(r, 0.0, horizon_); }

  /// Multiplies every value (and the perturbation amplitude) by `factor`.
  ControlSignal scaled(double factor) const;

 private:
  Kind kind_ = Kind::zero;
  double horizon_ = 1.0;
  std::vector<double> values_;
  double amplitude_ = 0.0;
  int frequency_ = 0;
  std::shared_ptr<const ControlSignal> base_;

  double piece_width() const;
};

}  // namespace gpe
