#pragma once

// Time evolution of  i psi_t + H psi = u(t) K(x) psi - sigma |psi|^2 psi,
// i.e.  psi_t = i H psi - i u K psi + i sigma |psi|^2 psi.

#include "gpe/control.hpp"
#include "gpe/hermite.hpp"
#include "gpe/potential.hpp"
#include "gpe/spectral_ops.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gpe {

struct InitialState
{
  enum class Kind
  {
    eigenstate,
    coherent,
    random,
  };

  Kind kind = Kind::eigenstate;
  MultiIndex mode{};               ///< eigenstate index
  std::vector<double> position;    ///< coherent-state center (empty = origin)
  std::vector<double> momentum;    ///< coherent-state momentum (empty = 0)
  double decay = 1.0;              ///< random: |c_k| ~ lambda_k^{-(decay + 1/2)}
  std::uint64_t seed = 0;
};

SpectralField make_initial_state(const HermiteBasis& basis, const InitialState& spec);

enum class Integrator
{
  strang,
  picard,
};

struct SimConfig
{
  int dim = 1;
  int n_modes = 32;
  int quad_factor = 2;
  int sigma = 0;
  double T = 1.0;
  double dt = 1e-3;
  InitialState initial_state;
  PotentialSpec potential;
  ControlSignal control;
  std::vector<double> record_times{0.0, 1.0};
  Integrator integrator = Integrator::strang;
  double picard_tol = 1e-12;
  int picard_max_iter = 60;
  double picard_window = 0.1;

  /// Sobolev indices reported in every record.
  std::vector<double> sobolev_s{0.0, 1.0, 2.0};
  /// Residual ||psi(t) - e^{itH} psi0|| is reported in H^{residual_k + residual_beta}.
  int residual_k = 0;
  double residual_beta = 0.0;
  /// Abort when ||psi(t)||_{H^1} exceeds this.
  double divergence_h1 = 1e6;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// The step actually taken: T divided into ceil(T / dt) equal steps.
double effective_step(const SimConfig& cfg);

/// `count` equally spaced times in [0, T], both ends included.
std::vector<double> uniform_times(double T, int count);

/// A SimConfig realized on a basis: K on the nodes plus the control law.
struct Model
{
  int sigma = 0;
  Potential potential;
  ControlSignal control;
};

Model make_model(const HermiteBasis& basis, const SimConfig& cfg);

struct TrajectoryRecord
{
  double t = 0.0;
  SpectralField state;
  double l2 = 0.0;
  double energy = 0.0;
  std::vector<double> sobolev;  ///< aligned with SimConfig::sobolev_s
  double residual_sobolev = 0.0;
  double linf = 0.0;
};

/// psi -> exp(-i [K_i U - sigma |psi_i|^2 dt]) psi, pointwise; U is the
/// control integral over the step. Moduli are unchanged.
GridField grid_nonlinear_phase(const GridField& values, int sigma, std::span<const double> k_values, double control_integral,
                               double dt);

/// One Strang step: half free flow, exact pointwise potential/nonlinear
/// phase over [t, t + dt], half free flow.
SpectralField strang_step(const HermiteBasis& basis, const SpectralField& state, double t, double dt,
                          const Model& model);

/// Energy sum_k lambda_k |c_k|^2 + ||psi||^2 + 1/2 ||psi||_{L^4}^4.
double energy(const HermiteBasis& basis, const SpectralField& state);

/// Marches from the configured initial state to T and returns one record per
/// entry of cfg.record_times, each snapped to the nearest integrator step.
std::vector<TrajectoryRecord> simulate(const HermiteBasis& basis, const SimConfig& cfg);

/// Same, starting from an explicit state instead of cfg.initial_state.
std::vector<TrajectoryRecord> simulate_from(const HermiteBasis& basis, const SimConfig& cfg,
                                            const SpectralField& psi0);

/// Strang march of `state` over n steps of size dt from time t0.
SpectralField strang_march(const HermiteBasis& basis, SpectralField state, double t0, double dt, long steps,
                           const Model& model);

struct PicardResult
{
  SpectralField state;               ///< psi(t_final)
  std::vector<SpectralField> path;   ///< psi on the uniform s-grid, path.front() = psi(t_start)
  int iterations = 0;
  std::vector<double> distances;     ///< sup_s ||psi^{(m+1)} - psi^{(m)}||_{L2} per iteration
  std::vector<double> ratios;        ///< successive distance ratios
};

/// Fixed point of the Duhamel map on [t_start, t_end] with initial value
/// psi_start, trapezoid rule on a uniform s-grid of spacing ~dt. Throws
/// ConvergenceError if `max_iter` iterations do not reach `tol`.
PicardResult picard_window(const HermiteBasis& basis, const Model& model, const SpectralField& psi_start,
                           double t_start, double t_end, double dt, double tol, int max_iter);

/// Picard solve from cfg.initial_state over [0, t_final] in one window.
PicardResult picard_solve(const HermiteBasis& basis, const SimConfig& cfg, double t_final);

Integrator parse_integrator(const std::string& name);

}  // namespace gpe
