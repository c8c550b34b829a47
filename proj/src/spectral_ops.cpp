#include "gpe/spectral_ops.hpp"

#include "gpe/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gpe {

namespace {

void require_match(const HermiteBasis& basis, const SpectralField& f)
{
  if (f.dim != basis.dim() || f.n_modes != basis.n_modes() || f.coeffs.size() != basis.spectral_size())
    throw ValidationError("field", "spectral field does not match basis dimension/truncation");
}

double uniform_grid_max(const HermiteBasis& basis, const SpectralField& f)
{
  const std::span<const double> nodes = basis.nodes();
  const double x_max = nodes.back();
  const int n = 4 * basis.n_nodes() + 1;
  std::vector<double> points(n);
  for (int i = 0; i < n; ++i) points[i] = -x_max + 2.0 * x_max * i / (n - 1);
  const GridField fine = synthesize_at(basis, f, points);
  double m = 0.0;
  for (const Complex& v : fine.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

SpectralField apply_fractional_h(const HermiteBasis& basis, const SpectralField& f, double s)
{
  require_match(basis, f);
  SpectralField out = f;
  const auto lambda = basis.eigenvalues();
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] *= std::pow(lambda[k], s);
  return out;
}

double sobolev_norm(const HermiteBasis& basis, const SpectralField& f, double s)
{
  require_match(basis, f);
  const auto lambda = basis.eigenvalues();
  double acc = 0.0;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    const double w = s == 0.0 ? 1.0 : std::pow(lambda[k], s);
    acc += w * std::norm(f.coeffs[k]);
  }
  return std::sqrt(acc);
}

double lp_norm(const HermiteBasis& basis, const GridField& g, double p)
{
  if (!(p >= 1.0)) throw ValidationError("p", "must be >= 1");
  if (g.values.size() != basis.grid_size()) throw ValidationError("field", "grid field does not match basis");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const Complex& v : g.values) m = std::max(m, std::abs(v));
    return m;
  }
  const auto w = basis.grid_weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) acc += w[i] * std::pow(std::abs(g.values[i]), p);
  return std::pow(acc, 1.0 / p);
}

double linf_norm(const HermiteBasis& basis, const SpectralField& f, LinfMode mode)
{
  const double on_nodes = lp_norm(basis, to_grid(basis, f), kInfinity);
  if (mode == LinfMode::nodes) return on_nodes;
  return std::max(on_nodes, uniform_grid_max(basis, f));
}

double wsp_norm(const HermiteBasis& basis, const SpectralField& f, double s, double p, LinfMode mode)
{
  if (!(s >= 0.0)) throw ValidationError("s", "must be nonnegative");
  if (!(p >= 1.0)) throw ValidationError("p", "must be >= 1");
  const SpectralField lifted = s == 0.0 ? f : apply_fractional_h(basis, f, 0.5 * s);
  if (std::isinf(p)) return linf_norm(basis, lifted, mode);
  return lp_norm(basis, to_grid(basis, lifted), p);
}

Complex eigenphase(double lambda, double t)
{
  const double turns = lambda * (t / (2.0 * std::numbers::pi));
  const double frac = turns - std::round(turns);
  if (frac == 0.0) return {1.0, 0.0};
  if (std::abs(frac) == 0.5) return {-1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * frac);
}

SpectralField free_propagate(const HermiteBasis& basis, const SpectralField& f, double t)
{
  require_match(basis, f);
  SpectralField out = f;
  const auto lambda = basis.eigenvalues();
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] *= eigenphase(lambda[k], t);
  return out;
}

double kato_functional(const HermiteBasis& basis, const SpectralField& phi, double beta, double t0,
                       double t1, int n_time)
{
  require_match(basis, phi);
  if (!(beta >= 0.0) || beta >= 0.5) throw ValidationError("beta", "must satisfy 0 <= beta < 1/2");
  if (n_time < 16) throw ValidationError("n_time", "must be at least 16");
  if (!(t1 > t0)) throw ValidationError("t_window", "requires t0 < t1");

  const SpectralField lifted = apply_fractional_h(basis, phi, 0.5 * beta);
  const auto lambda = basis.eigenvalues();
  const auto weights = basis.grid_weights();
  const auto r2 = basis.grid_radius_sq();

  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < lifted.coeffs.size(); ++k)
    if (lifted.coeffs[k] != Complex{}) support.push_back(k);
  if (support.empty()) return 0.0;

  // Per-node spatial weight W_i <x_i>^{-1}.
  std::vector<double> spatial(basis.grid_size());
  for (std::size_t i = 0; i < spatial.size(); ++i) spatial[i] = weights[i] / std::sqrt(1.0 + r2[i]);

  // Mode values on the grid for sparse synthesis; dense synthesis otherwise.
  const std::size_t grid = basis.grid_size();
  const bool sparse = support.size() * grid <= 4 * basis.spectral_size() * basis.n_nodes();
  std::vector<double> mode_values;
  if (sparse) {
    mode_values.resize(support.size() * grid);
    for (std::size_t m = 0; m < support.size(); ++m) {
      const MultiIndex k = basis.mode_index(support[m]);
      for (std::size_t i = 0; i < grid; ++i) {
        const MultiIndex node = basis.node_index(i);
        double v = 1.0;
        for (int j = 0; j < basis.dim(); ++j) v *= basis.table()(k[j], node[j]);
        mode_values[m * grid + i] = v;
      }
    }
  }

  const double dt = (t1 - t0) / n_time;
  double integral = 0.0;
  std::vector<Complex> values(grid);
  for (int n = 0; n <= n_time; ++n) {
    const double t = t0 + n * dt;
    if (sparse) {
      std::fill(values.begin(), values.end(), Complex{});
      for (std::size_t m = 0; m < support.size(); ++m) {
        const Complex c = lifted.coeffs[support[m]] * eigenphase(lambda[support[m]], t);
        const double* row = mode_values.data() + m * grid;
        for (std::size_t i = 0; i < grid; ++i) values[i] += c * row[i];
      }
    } else {
      values = to_grid(basis, free_propagate(basis, lifted, t)).values;
    }
    double spatial_norm_sq = 0.0;
    for (std::size_t i = 0; i < grid; ++i) spatial_norm_sq += spatial[i] * std::norm(values[i]);
    integral += (n == 0 || n == n_time ? 0.5 : 1.0) * spatial_norm_sq;
  }
  return std::sqrt(integral * dt);
}

bool check_admissible(double q, double r, int dim)
{
  if (!(q >= 2.0) || !(r >= 2.0)) return false;
  if (dim == 2 && q == 2.0 && std::isinf(r)) return false;
  const double lhs = 2.0 / q + dim / r;  // 1/inf == 0
  return std::abs(lhs - 0.5 * dim) <= 1e-12;
}

}  // namespace gpe
