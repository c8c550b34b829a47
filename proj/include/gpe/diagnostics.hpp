#pragma once

// Measurable functionals over trajectories: smoothing residuals, Hoelder
// quotients, Strichartz norms, weak-control continuity, coefficient-tail
// profiles and the Groenwall / energy envelopes.

#include "gpe/dynamics.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gpe {

struct TimedField
{
  double t = 0.0;
  SpectralField field;
};

/// psi(t) - e^{itH} psi0 for every record.
std::vector<TimedField> residual_states(const HermiteBasis& basis, std::span<const TrajectoryRecord> trajectory,
                                        const SpectralField& psi0);

/// (t, ||psi(t) - e^{itH} psi0||_{H^{k + beta}}). Requires 0 <= beta < 1/2.
std::vector<std::pair<double, double>> smoothing_residual_series(const HermiteBasis& basis,
                                                                 std::span<const TrajectoryRecord> trajectory,
                                                                 const SpectralField& psi0, int k, double beta);

struct HolderEstimate
{
  double alpha = 0.0;
  double quotient_sup = 0.0;   ///< sup ||f(t1) - f(t2)|| / |t1 - t2|^alpha
  double fitted_alpha = 0.0;   ///< log-log least-squares slope
  bool fitted_defined = false; ///< false when fewer than 8 nonzero pairs
  int pairs = 0;
};

/// Hoelder quotient of a field-valued series in H^{sobolev_index}, over all
/// pairs with |t1 - t2| >= min_separation.
HolderEstimate holder_quotient(const HermiteBasis& basis, std::span<const TimedField> series, double sobolev_index,
                               double alpha, double min_separation);

struct StrichartzReport
{
  double q = 0.0;
  double r = 0.0;
  double s = 0.0;
  double value = 0.0;
  bool admissible = false;
};

/// ||psi||_{L^q_t W^{s,r}_x} over the record times (trapezoid in t; q = inf
/// is the max). Non-admissible pairs are rejected unless `whitelisted`.
StrichartzReport strichartz_norm(const HermiteBasis& basis, std::span<const TrajectoryRecord> trajectory, double q,
                                 double r, double s, bool whitelisted = false);

struct WeakLimitPoint
{
  int n = 0;
  double error = 0.0;
};

/// err(n) = ||psi_{u_n}(T) - psi_u(T)||_{H^s} for u_n = u + A sin(2 pi n t / T).
std::vector<WeakLimitPoint> weak_limit_experiment(const HermiteBasis& basis, const SimConfig& cfg,
                                                  std::span<const int> n_list, double amplitude, double s = 0.0);

struct TailProfile
{
  double sobolev_weight = 0.0;
  std::vector<double> cutoffs;
  std::vector<double> tail_mass;  ///< sum over lambda_k > cutoff of lambda_k^weight |c_k|^2
};

TailProfile tail_profile(const HermiteBasis& basis, const SpectralField& f, double sobolev_weight,
                         std::span<const double> cutoffs);

/// Eigenvalue at per-axis mode index j in dimension d: 2j + d.
double cutoff_at_mode(const HermiteBasis& basis, int j);

struct AttainableSample
{
  int index = 0;
  double t = 0.0;
  double control_l2 = 0.0;
  TailProfile profile;
};

struct AttainableOptions
{
  int n_samples = 64;
  double control_l2 = 1.0;  ///< every sampled control has exactly this L2([0,T]) norm
  std::uint64_t seed = 0;
  int k = 0;
  double beta = 0.4;
  int pieces = 16;
  std::vector<double> cutoffs;  ///< empty: lambda at N/4, N/2 and 3N/4
};

/// Residual tail profiles over random controls and random times in [0, T].
/// Sample i depends only on (seed, i).
std::vector<AttainableSample> attainable_ensemble(const HermiteBasis& basis, const SimConfig& cfg_template,
                                                  const AttainableOptions& options);

/// Pointwise-in-time check of an envelope: `holds` when margin >= -slack.
struct EnvelopeCheck
{
  bool holds = false;
  double margin = 0.0;  ///< min over records of (bound - observed)
  double slack = 0.0;
};

/// Largest exponent rate log(||psi(t)||_{H^k} / ||psi0||_{H^k}) / (||K|| int_0^t |u|)
/// observed on a trajectory; zero when nothing grows.
double calibrate_gronwall_constant(const HermiteBasis& basis, std::span<const TrajectoryRecord> trajectory, int k,
                                   double k_norm, const ControlSignal& control);

/// ||[H^{k/2}, P K P] H^{-k/2}|| / ||K||_{W^{k,inf}} for the Galerkin projection
/// P onto the basis. The H^k norm of the semi-discrete bilinear flow grows at
/// most at rate |u(t)| times the commutator norm, so this is a constant for
/// which the Groenwall envelope holds. Zero for k = 0. Requires at most 1024
/// basis functions.
double gronwall_generator_constant(const HermiteBasis& basis, const Potential& potential, int k);

/// ||psi(t)||_{H^k} <= ||psi0||_{H^k} exp(c_hat ||K||_{W^{k,inf}} int_0^t |u|).
/// The slack is 1e-12 relative, for round-off only.
EnvelopeCheck gronwall_check(const HermiteBasis& basis, std::span<const TrajectoryRecord> trajectory, int k,
                             double k_norm, const ControlSignal& control, double c_hat);

/// E(t) <= (E(0)^{1/2} + 2 grad_sup ||psi0||_{L2} int_0^t |u|)^2 within the
/// splitting tolerance 10 dt^2 E(0).
EnvelopeCheck energy_bound_check(std::span<const TrajectoryRecord> trajectory, double grad_sup,
                                 const ControlSignal& control, double dt);

struct KatoPoint
{
  int k = 0;
  double value = 0.0;   ///< kato_functional(h_k)
  double sobolev = 0.0; ///< ||H^{beta/2} h_k||_{L2}
};

/// Kato functional of the 1-D eigenstates h_0..h_{k_max}.
std::vector<KatoPoint> kato_scan(const HermiteBasis& basis, double beta, int k_max, double t0, double t1,
                                 int n_time = 256);

struct ConvergencePoint
{
  double dt = 0.0;
  double error = 0.0;  ///< L2 distance to the reference solution at T
};

struct ConvergenceStudy
{
  std::vector<ConvergencePoint> points;
  double reference_dt = 0.0;
  double slope = 0.0;  ///< least-squares slope of log error vs log dt
};

/// Strang self-convergence at time cfg.T against a run with step
/// min(dts) / ref_divisor.
ConvergenceStudy strang_convergence(const HermiteBasis& basis, const SimConfig& cfg, std::span<const double> dts,
                                    int ref_divisor = 16);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace gpe
