#include "gpe/dynamics.hpp"

#include "gpe/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gpe {

namespace {

// Spectral projection of K psi and of |psi|^2 psi at one time slice.
struct Forcing
{
  std::vector<Complex> potential;
  std::vector<Complex> cubic;
};

Forcing forcing(const HermiteBasis& basis, const Model& model, const SpectralField& psi, bool with_potential)
{
  Forcing out;
  if (!with_potential && model.sigma == 0) return out;
  const GridField grid = to_grid(basis, psi);
  if (with_potential) {
    GridField kpsi = grid;
    for (std::size_t i = 0; i < kpsi.values.size(); ++i) kpsi.values[i] *= model.potential.grid_values[i];
    out.potential = to_spectral(basis, kpsi).coeffs;
  }
  if (model.sigma != 0) {
    GridField cubic = grid;
    for (Complex& v : cubic.values) v *= std::norm(v);
    out.cubic = to_spectral(basis, cubic).coeffs;
  }
  return out;
}

}  // namespace

PicardResult picard_window(const HermiteBasis& basis, const Model& model, const SpectralField& psi_start,
                           double t_start, double t_end, double dt, double tol, int max_iter)
{
  if (!(t_end > t_start)) throw ValidationError("t_final", "window must have positive length");
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (!(tol > 0.0)) throw ValidationError("picard_tol", "must be positive");

  const long n = std::max(1L, std::lround((t_end - t_start) / dt));
  const double h = (t_end - t_start) / static_cast<double>(n);
  const auto lambda = basis.eigenvalues();
  const std::size_t size = basis.spectral_size();

  // Panel integrals of u; the potential term is integrated per panel with the
  // exact control mass, matching the Strang substep.
  std::vector<double> panel_u(n);
  bool any_control = false;
  for (long m = 0; m < n; ++m) {
    panel_u[m] = model.control.integral(t_start + m * h, t_start + (m + 1) * h);
    any_control = any_control || panel_u[m] != 0.0;
  }

  // Zeroth iterate: the free evolution.
  PicardResult result;
  result.path.resize(n + 1);
  for (long j = 0; j <= n; ++j) result.path[j] = free_propagate(basis, psi_start, j * h);

  // Forcing pulled back to t_start: e^{-i(s_m - t_start)H} F(s_m).
  std::vector<std::vector<Complex>> pulled_cubic(n + 1), pulled_potential(n + 1);
  double previous_distance = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (long m = 0; m <= n; ++m) {
      Forcing f = forcing(basis, model, result.path[m], any_control);
      for (std::size_t k = 0; k < f.cubic.size(); ++k) f.cubic[k] *= eigenphase(lambda[k], -m * h);
      for (std::size_t k = 0; k < f.potential.size(); ++k) f.potential[k] *= eigenphase(lambda[k], -m * h);
      pulled_cubic[m] = std::move(f.cubic);
      pulled_potential[m] = std::move(f.potential);
    }

    // Trapezoid per panel: i sigma h (F_m + F_{m+1}) / 2 and -i U_m (KF_m + KF_{m+1}) / 2.
    const Complex cubic_weight(0.0, 0.5 * model.sigma * h);
    std::vector<Complex> accumulated = psi_start.coeffs;
    double distance = 0.0;
    std::vector<SpectralField> next(n + 1);
    next[0] = psi_start;
    for (long j = 1; j <= n; ++j) {
      const long m = j - 1;
      if (!pulled_cubic[m].empty())
        for (std::size_t k = 0; k < size; ++k) accumulated[k] += cubic_weight * (pulled_cubic[m][k] + pulled_cubic[j][k]);
      if (!pulled_potential[m].empty()) {
        const Complex weight(0.0, -0.5 * panel_u[m]);
        for (std::size_t k = 0; k < size; ++k)
          accumulated[k] += weight * (pulled_potential[m][k] + pulled_potential[j][k]);
      }
      SpectralField pulled_state{basis.dim(), basis.n_modes(), accumulated};
      next[j] = free_propagate(basis, pulled_state, j * h);
      distance = std::max(distance, l2_norm(next[j] - result.path[j]));
    }
    result.path = std::move(next);
    result.iterations = iter;
    result.distances.push_back(distance);
    if (iter > 1 && previous_distance > 0.0) result.ratios.push_back(distance / previous_distance);
    previous_distance = distance;
    if (distance <= tol) {
      result.state = result.path.back();
      return result;
    }
  }
  const double last_ratio = result.ratios.empty() ? 0.0 : result.ratios.back();
  throw ConvergenceError(max_iter, last_ratio,
                         "Picard iteration did not reach tolerance in " + std::to_string(max_iter) +
                             " iterations (last contraction ratio " + std::to_string(last_ratio) +
                             "); shorten the window");
}

PicardResult picard_solve(const HermiteBasis& basis, const SimConfig& cfg, double t_final)
{
  cfg.validate();
  if (!(t_final > 0.0) || t_final > cfg.T * (1 + 1e-12)) throw ValidationError("t_final", "must lie in (0, T]");
  const Model model = make_model(basis, cfg);
  return picard_window(basis, model, make_initial_state(basis, cfg.initial_state), 0.0, t_final, cfg.dt,
                       cfg.picard_tol, cfg.picard_max_iter);
}

}  // namespace gpe
