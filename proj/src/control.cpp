#include "gpe/control.hpp"

#include "gpe/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace gpe {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGlNodes{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                         0.9061798459386640};
constexpr std::array<double, 5> kGlWeights{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                           0.4786286704993665, 0.2369268850561891};

// Integral of |v(s)| over [0, h] for v linear from v0 to v1.
double abs_linear(double v0, double v1, double h)
{
  if ((v0 >= 0.0 && v1 >= 0.0) || (v0 <= 0.0 && v1 <= 0.0)) return 0.5 * h * std::abs(v0 + v1);
  return 0.5 * h * (v0 * v0 + v1 * v1) / (std::abs(v0) + std::abs(v1));
}

}  // namespace

ControlSignal ControlSignal::zero(double horizon)
{
  if (!(horizon > 0.0)) throw ValidationError("T", "control horizon must be positive");
  ControlSignal u;
  u.horizon_ = horizon;
  return u;
}

ControlSignal ControlSignal::piecewise_constant(double horizon, std::vector<double> values)
{
  if (!(horizon > 0.0)) throw ValidationError("T", "control horizon must be positive");
  if (values.empty()) throw ValidationError("control.values", "must not be empty");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("control.values", "must be finite");
  ControlSignal u;
  u.kind_ = Kind::piecewise_constant;
  u.horizon_ = horizon;
  u.values_ = std::move(values);
  return u;
}

ControlSignal ControlSignal::sampled(double horizon, std::vector<double> values)
{
  if (!(horizon > 0.0)) throw ValidationError("T", "control horizon must be positive");
  if (values.size() < 2) throw ValidationError("control.values", "sampled control needs at least 2 samples");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("control.values", "must be finite");
  ControlSignal u;
  u.kind_ = Kind::sampled;
  u.horizon_ = horizon;
  u.values_ = std::move(values);
  return u;
}

ControlSignal ControlSignal::sinusoid_perturbed(ControlSignal base, double amplitude, int frequency)
{
  if (!std::isfinite(amplitude)) throw ValidationError("control.amplitude", "must be finite");
  if (frequency < 0) throw ValidationError("control.frequency", "must be nonnegative");
  ControlSignal u;
  u.kind_ = Kind::sinusoid_perturbed;
  u.horizon_ = base.horizon();
  u.amplitude_ = amplitude;
  u.frequency_ = frequency;
  u.base_ = std::make_shared<const ControlSignal>(std::move(base));
  return u;
}

ControlSignal ControlSignal::random_piecewise(double horizon, int pieces, double norm, double r,
                                              std::mt19937_64& rng)
{
  if (pieces < 1) throw ValidationError("control.pieces", "must be positive");
  if (!(norm >= 0.0)) throw ValidationError("control.norm", "must be nonnegative");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> values(pieces);
  for (double& v : values) v = gauss(rng);
  ControlSignal u = piecewise_constant(horizon, std::move(values));
  const double current = u.lr_norm(r);
  return u.scaled(current > 0.0 ? norm / current : 0.0);
}

double ControlSignal::piece_width() const
{
  if (kind_ == Kind::piecewise_constant) return horizon_ / static_cast<double>(values_.size());
  if (kind_ == Kind::sampled) return horizon_ / static_cast<double>(values_.size() - 1);
  return horizon_;
}

double ControlSignal::operator()(double t) const
{
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::piecewise_constant: {
      const double h = piece_width();
      const auto j = static_cast<long>(std::floor(std::clamp(t, 0.0, horizon_) / h));
      return values_[static_cast<std::size_t>(std::clamp<long>(j, 0, static_cast<long>(values_.size()) - 1))];
    }
    case Kind::sampled: {
      const double h = piece_width();
      const double tc = std::clamp(t, 0.0, horizon_);
      const auto last = static_cast<long>(values_.size()) - 2;
      const long j = std::clamp<long>(static_cast<long>(std::floor(tc / h)), 0, last);
      const double theta = (tc - j * h) / h;
      return (1.0 - theta) * values_[j] + theta * values_[j + 1];
    }
    case Kind::sinusoid_perturbed:
      return (*base_)(t) + amplitude_ * std::sin(2.0 * std::numbers::pi * frequency_ * t / horizon_);
  }
  return 0.0;
}

double ControlSignal::integral(double a, double b) const
{
  a = std::clamp(a, 0.0, horizon_);
  b = std::clamp(b, 0.0, horizon_);
  if (b <= a) return 0.0;
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::piecewise_constant: {
      const double h = piece_width();
      const auto n = static_cast<long>(values_.size());
      const long first = std::clamp<long>(static_cast<long>(std::floor(a / h)), 0, n - 1);
      double acc = 0.0;
      for (long j = first; j < n; ++j) {
        const double lo = std::max(a, j * h);
        const double hi = j == n - 1 ? b : std::min(b, (j + 1) * h);
        if (hi <= lo) {
          if (j * h >= b) break;
          continue;
        }
        acc += values_[j] * (hi - lo);
      }
      return acc;
    }
    case Kind::sampled: {
      const double h = piece_width();
      const auto segments = static_cast<long>(values_.size()) - 1;
      const long first = std::clamp<long>(static_cast<long>(std::floor(a / h)), 0, segments - 1);
      double acc = 0.0;
      for (long j = first; j < segments && j * h < b; ++j) {
        const double lo = std::max(a, j * h);
        const double hi = j == segments - 1 ? b : std::min(b, (j + 1) * h);
        if (hi <= lo) continue;
        acc += 0.5 * (hi - lo) * ((*this)(lo) + (*this)(hi));
      }
      return acc;
    }
    case Kind::sinusoid_perturbed: {
      if (frequency_ == 0) return base_->integral(a, b);
      const double omega = 2.0 * std::numbers::pi * frequency_ / horizon_;
      return base_->integral(a, b) + amplitude_ / omega * (std::cos(omega * a) - std::cos(omega * b));
    }
  }
  return 0.0;
}

double ControlSignal::abs_integral(double a, double b) const
{
  if (kind_ == Kind::sampled) {
    a = std::clamp(a, 0.0, horizon_);
    b = std::clamp(b, 0.0, horizon_);
    const double h = piece_width();
    const auto segments = static_cast<long>(values_.size()) - 1;
    double acc = 0.0;
    for (long j = 0; j < segments; ++j) {
      const double lo = std::max(a, j * h);
      const double hi = j == segments - 1 ? b : std::min(b, (j + 1) * h);
      if (hi > lo) acc += abs_linear((*this)(lo), (*this)(hi), hi - lo);
    }
    return acc;
  }
  return lr_norm(1.0, a, b);
}

double ControlSignal::lr_norm(double r, double a, double b) const
{
  if (!(r >= 1.0) || std::isinf(r)) throw ValidationError("r", "L^r norm needs finite r >= 1");
  a = std::clamp(a, 0.0, horizon_);
  b = std::clamp(b, 0.0, horizon_);
  if (b <= a || kind_ == Kind::zero) return 0.0;

  if (kind_ == Kind::piecewise_constant) {
    const double h = piece_width();
    const auto n = static_cast<long>(values_.size());
    double acc = 0.0;
    for (long j = 0; j < n; ++j) {
      const double lo = std::max(a, j * h);
      const double hi = j == n - 1 ? b : std::min(b, (j + 1) * h);
      if (hi > lo) acc += std::pow(std::abs(values_[j]), r) * (hi - lo);
    }
    return std::pow(acc, 1.0 / r);
  }
  if (kind_ == Kind::sampled && r == 1.0) return abs_integral(a, b);
  if (kind_ == Kind::sampled && r == 2.0) {
    const double h = piece_width();
    const auto segments = static_cast<long>(values_.size()) - 1;
    double acc = 0.0;
    for (long j = 0; j < segments; ++j) {
      const double lo = std::max(a, j * h);
      const double hi = j == segments - 1 ? b : std::min(b, (j + 1) * h);
      if (hi <= lo) continue;
      const double v0 = (*this)(lo), v1 = (*this)(hi);
      acc += (hi - lo) * (v0 * v0 + v0 * v1 + v1 * v1) / 3.0;
    }
    return std::sqrt(acc);
  }

  // Composite Gauss-Legendre on panels aligned with the base signal's pieces
  // and fine enough to resolve the sinusoid.
  double panel = horizon_ / 64.0;
  const ControlSignal* inner = this;
  while (inner->kind_ == Kind::sinusoid_perturbed) {
    if (inner->frequency_ > 0) panel = std::min(panel, horizon_ / (64.0 * inner->frequency_));
    inner = inner->base_.get();
  }
  std::vector<double> breaks{a};
  if (inner->kind_ == Kind::piecewise_constant || inner->kind_ == Kind::sampled) {
    const double h = inner->piece_width();
    for (long j = static_cast<long>(std::floor(a / h)) + 1; j * h < b; ++j)
      if (j * h > a) breaks.push_back(j * h);
  }
  breaks.push_back(b);

  double acc = 0.0;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double lo = breaks[s], hi = breaks[s + 1];
    const auto panels = std::max<long>(1, static_cast<long>(std::ceil((hi - lo) / panel)));
    const double width = (hi - lo) / static_cast<double>(panels);
    for (long j = 0; j < panels; ++j) {
      const double mid = lo + (j + 0.5) * width;
      for (std::size_t q = 0; q < kGlNodes.size(); ++q)
        acc += kGlWeights[q] * 0.5 * width * std::pow(std::abs((*this)(mid + 0.5 * width * kGlNodes[q])), r);
    }
  }
  return std::pow(acc, 1.0 / r);
}

ControlSignal ControlSignal::scaled(double factor) const
{
  ControlSignal u = *this;
  for (double& v : u.values_) v *= factor;
  u.amplitude_ *= factor;
  if (base_) u.base_ = std::make_shared<const ControlSignal>(base_->scaled(factor));
  return u;
}

}  // namespace gpe
