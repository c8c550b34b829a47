#include "gpe/dynamics.hpp"

#include "gpe/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>

namespace gpe {

SpectralField make_initial_state(const HermiteBasis& basis, const InitialState& spec)
{
  SpectralField f = SpectralField::zeros(basis);
  const int d = basis.dim();
  switch (spec.kind) {
    case InitialState::Kind::eigenstate:
      return SpectralField::eigenstate(basis, spec.mode);

    case InitialState::Kind::coherent: {
      // Per-axis coefficients e^{-|a|^2/2} a^k / sqrt(k!), a = (x0 + i p) / sqrt(2).
      std::vector<std::vector<Complex>> axis(d, std::vector<Complex>(basis.n_modes()));
      for (int j = 0; j < d; ++j) {
        const double x0 = spec.position.empty() ? 0.0 : spec.position[j];
        const double p0 = spec.momentum.empty() ? 0.0 : spec.momentum[j];
        const Complex alpha = Complex(x0, p0) / std::numbers::sqrt2;
        axis[j][0] = std::exp(-0.5 * std::norm(alpha));
        for (int k = 1; k < basis.n_modes(); ++k) axis[j][k] = axis[j][k - 1] * alpha / std::sqrt(double(k));
      }
      for (std::size_t flat = 0; flat < f.coeffs.size(); ++flat) {
        const MultiIndex k = basis.mode_index(flat);
        Complex c = 1.0;
        for (int j = 0; j < d; ++j) c *= axis[j][k[j]];
        f.coeffs[flat] = c;
      }
      break;
    }

    case InitialState::Kind::random: {
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
      const auto lambda = basis.eigenvalues();
      for (std::size_t k = 0; k < f.coeffs.size(); ++k)
        f.coeffs[k] = std::polar(std::pow(lambda[k], -(spec.decay + 0.5)), phase(rng));
      break;
    }
  }
  const double norm = l2_norm(f);
  return (1.0 / norm) * f;
}

void SimConfig::validate() const
{
  check_basis_args(dim, n_modes, quad_factor);
  if (sigma < -1 || sigma > 1) throw ValidationError("sigma", "must be -1, 0 or 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T", "must be positive and finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be positive and finite");
  if (dt > T) throw ValidationError("dt", "must not exceed T");
  if (record_times.empty()) throw ValidationError("record_times", "must not be empty");
  for (double t : record_times)
    if (!(t >= 0.0) || t > T * (1 + 1e-12)) throw ValidationError("record_times", "must lie in [0, T]");
  if (!(picard_tol > 0.0)) throw ValidationError("picard_tol", "must be positive");
  if (picard_max_iter < 1) throw ValidationError("picard_max_iter", "must be at least 1");
  if (!(picard_window > 0.0)) throw ValidationError("picard_window", "must be positive");
  for (double s : sobolev_s)
    if (!(s >= 0.0)) throw ValidationError("sobolev_s", "indices must be nonnegative");
  if (residual_k < 0) throw ValidationError("residual.k", "must be nonnegative");
  if (!(residual_beta >= 0.0) || residual_beta >= 0.5) throw ValidationError("residual.beta", "must lie in [0, 1/2)");
  if (!(divergence_h1 > 0.0)) throw ValidationError("divergence_h1", "must be positive");
  std::size_t grid = 1;
  for (int j = 0; j < dim; ++j) grid *= static_cast<std::size_t>(n_modes) * quad_factor;
  validate_potential_spec(potential, dim, grid);
  if (std::abs(control.horizon() - T) > 1e-12 * T && control.kind() != ControlSignal::Kind::zero)
    throw ValidationError("control", "control horizon must equal T");

  switch (initial_state.kind) {
    case InitialState::Kind::eigenstate:
      for (int j = 0; j < dim; ++j)
        if (initial_state.mode[j] < 0 || initial_state.mode[j] >= n_modes)
          throw ValidationError("initial_state.k", "mode index outside truncation");
      break;
    case InitialState::Kind::coherent:
      if (!initial_state.position.empty() && static_cast<int>(initial_state.position.size()) != dim)
        throw ValidationError("initial_state.position", "must have one entry per dimension");
      if (!initial_state.momentum.empty() && static_cast<int>(initial_state.momentum.size()) != dim)
        throw ValidationError("initial_state.momentum", "must have one entry per dimension");
      break;
    case InitialState::Kind::random:
      if (!(initial_state.decay >= 0.0)) throw ValidationError("initial_state.decay", "must be nonnegative");
      break;
  }
}

double effective_step(const SimConfig& cfg)
{
  const long n_steps = std::max(1L, static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9)));
  return cfg.T / static_cast<double>(n_steps);
}

std::vector<double> uniform_times(double T, int count)
{
  if (count < 2) return {T};
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = T * i / (count - 1);
  return t;
}

Model make_model(const HermiteBasis& basis, const SimConfig& cfg)
{
  return Model{cfg.sigma, realize_potential(basis, cfg.potential, std::max(2, cfg.residual_k + 1)), cfg.control};
}

GridField grid_nonlinear_phase(const GridField& values, int sigma, std::span<const double> k_values,
                               double control_integral, double dt)
{
  if (k_values.size() != values.values.size()) throw ValidationError("K", "potential/grid size mismatch");
  GridField out = values;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double theta = k_values[i] * control_integral - sigma * std::norm(values.values[i]) * dt;
    out.values[i] *= std::polar(1.0, -theta);
  }
  return out;
}

SpectralField strang_step(const HermiteBasis& basis, const SpectralField& state, double t, double dt,
                          const Model& model)
{
  const double control_integral = model.control.integral(t, t + dt);
  SpectralField half = free_propagate(basis, state, 0.5 * dt);
  if (control_integral != 0.0 || model.sigma != 0) {
    const GridField grid = to_grid(basis, half);
    half = to_spectral(basis, grid_nonlinear_phase(grid, model.sigma, model.potential.grid_values,
                                                   control_integral, dt));
  }
  return free_propagate(basis, half, 0.5 * dt);
}

SpectralField strang_march(const HermiteBasis& basis, SpectralField state, double t0, double dt, long steps,
                           const Model& model)
{
  for (long j = 0; j < steps; ++j) state = strang_step(basis, state, t0 + j * dt, dt, model);
  return state;
}

double energy(const HermiteBasis& basis, const SpectralField& state)
{
  const auto lambda = basis.eigenvalues();
  double quadratic = 0.0, mass = 0.0;
  for (std::size_t k = 0; k < state.coeffs.size(); ++k) {
    const double a = std::norm(state.coeffs[k]);
    quadratic += lambda[k] * a;
    mass += a;
  }
  const GridField grid = to_grid(basis, state);
  const auto w = basis.grid_weights();
  double quartic = 0.0;
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const double a = std::norm(grid.values[i]);
    quartic += w[i] * a * a;
  }
  return quadratic + mass + 0.5 * quartic;
}

namespace {

TrajectoryRecord make_record(const HermiteBasis& basis, const SimConfig& cfg, double t, const SpectralField& state,
                             const SpectralField& psi0)
{
  TrajectoryRecord r;
  r.t = t;
  r.state = state;
  r.l2 = l2_norm(state);
  r.energy = energy(basis, state);
  for (double s : cfg.sobolev_s) r.sobolev.push_back(sobolev_norm(basis, state, s));
  r.residual_sobolev =
      sobolev_norm(basis, state - free_propagate(basis, psi0, t), cfg.residual_k + cfg.residual_beta);
  r.linf = linf_norm(basis, state, basis.dim() == 1 ? LinfMode::refined : LinfMode::nodes);
  return r;
}

void guard(const HermiteBasis& basis, const SimConfig& cfg, const SpectralField& state, double t)
{
  const double h1 = sobolev_norm(basis, state, 1.0);
  if (!(h1 <= cfg.divergence_h1))
    throw DivergenceError(t, h1, "H^1 norm " + std::to_string(h1) + " exceeded divergence guard at t = " +
                                     std::to_string(t));
}

}  // namespace

std::vector<TrajectoryRecord> simulate(const HermiteBasis& basis, const SimConfig& cfg)
{
  return simulate_from(basis, cfg, make_initial_state(basis, cfg.initial_state));
}

std::vector<TrajectoryRecord> simulate_from(const HermiteBasis& basis, const SimConfig& cfg,
                                            const SpectralField& psi0)
{
  cfg.validate();
  if (basis.dim() != cfg.dim || basis.n_modes() != cfg.n_modes)
    throw ValidationError("n_modes", "basis does not match configuration");
  const Model model = make_model(basis, cfg);

  const double h = effective_step(cfg);
  const long n_steps = std::lround(cfg.T / h);

  std::map<long, SpectralField> wanted;
  std::vector<long> record_steps;
  for (double t : cfg.record_times) {
    const long j = std::clamp(std::lround(t / h), 0L, n_steps);
    record_steps.push_back(j);
    wanted.emplace(j, SpectralField{});
  }
  const long last_needed = wanted.rbegin()->first;

  auto store = [&](long j, const SpectralField& s) {
    if (auto it = wanted.find(j); it != wanted.end()) it->second = s;
  };
  store(0, psi0);

  if (cfg.integrator == Integrator::strang) {
    SpectralField state = psi0;
    for (long j = 0; j < last_needed; ++j) {
      state = strang_step(basis, state, j * h, h, model);
      guard(basis, cfg, state, (j + 1) * h);
      store(j + 1, state);
    }
  } else {
    const long window = std::max(1L, std::lround(cfg.picard_window / h));
    SpectralField state = psi0;
    for (long a = 0; a < last_needed; a += window) {
      const long b = std::min(a + window, n_steps);
      const PicardResult res =
          picard_window(basis, model, state, a * h, b * h, h, cfg.picard_tol, cfg.picard_max_iter);
      for (long j = a + 1; j <= b; ++j) {
        guard(basis, cfg, res.path[j - a], j * h);
        store(j, res.path[j - a]);
      }
      state = res.state;
    }
  }

  std::vector<TrajectoryRecord> records;
  records.reserve(record_steps.size());
  for (long j : record_steps) records.push_back(make_record(basis, cfg, j * h, wanted.at(j), psi0));
  return records;
}

Integrator parse_integrator(const std::string& name)
{
  if (name == "strang") return Integrator::strang;
  if (name == "picard") return Integrator::picard;
  throw ValidationError("integrator", "unknown integrator '" + name + "'");
}

}  // namespace gpe
