#include "gpe/diagnostics.hpp"

#include "gpe/error.hpp"
#include "gpe/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace gpe {

std::vector<TimedField> residual_states(const HermiteBasis& basis, std::span<const TrajectoryRecord> trajectory,
                                        const SpectralField& psi0)
{
  std::vector<TimedField> out;
  out.reserve(trajectory.size());
  for (const TrajectoryRecord& r : trajectory) {
    // exactly zero at t = 0: e^{i0H} is the identity
    SpectralField residual = r.t == 0.0 ? r.state - psi0 : r.state - free_propagate(basis, psi0, r.t);
    out.push_back({r.t, std::move(residual)});
  }
  return out;
}

std::vector<std::pair<double, double>> smoothing_residual_series(const HermiteBasis& basis,
                                                                 std::span<const TrajectoryRecord> trajectory,
                                                                 const SpectralField& psi0, int k, double beta)
{
  if (!(beta >= 0.0 && beta < 0.5)) throw ValidationError("beta", "must lie in [0, 1/2)");
  if (k < 0) throw ValidationError("k", "must be non-negative");
  std::vector<std::pair<double, double>> out;
  for (const TimedField& r : residual_states(basis, trajectory, psi0))
    out.emplace_back(r.t, sobolev_norm(basis, r.field, k + beta));
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("series", "need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

HolderEstimate holder_quotient(const HermiteBasis& basis, std::span<const TimedField> series, double sobolev_index,
                               double alpha, double min_separation)
{
  if (series.size() < 2) throw ValidationError("series", "need at least two samples");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha", "must lie in (0, 1]");

  HolderEstimate est;
  est.alpha = alpha;
  std::vector<double> gaps, diffs;
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t j = i + 1; j < series.size(); ++j) {
      const double gap = std::abs(series[j].t - series[i].t);
      if (gap <= 0.0 || gap < min_separation * (1 - 1e-9)) continue;
      const double diff = sobolev_norm(basis, series[j].field - series[i].field, sobolev_index);
      ++est.pairs;
      est.quotient_sup = std::max(est.quotient_sup, diff / std::pow(gap, alpha));
      if (diff > 0.0) {
        gaps.push_back(gap);
        diffs.push_back(diff);
      }
    }
  }
  if (gaps.size() >= 8) {
    est.fitted_alpha = loglog_slope(gaps, diffs);
    est.fitted_defined = std::isfinite(est.fitted_alpha);
  }
  return est;
}

StrichartzReport strichartz_norm(const HermiteBasis& basis, std::span<const TrajectoryRecord> trajectory, double q,
                                 double r, double s, bool whitelisted)
{
  StrichartzReport rep;
  rep.q = q;
  rep.r = r;
  rep.s = s;
  rep.admissible = check_admissible(q, r, basis.dim());
  if (!rep.admissible && !whitelisted)
    throw ValidationError("strichartz", "pair (q, r) is not admissible in dimension " + std::to_string(basis.dim()));
  if (trajectory.empty()) throw ValidationError("trajectory", "must not be empty");

  std::vector<double> values;
  for (const TrajectoryRecord& rec : trajectory) values.push_back(wsp_norm(basis, rec.state, s, r));
  if (std::isinf(q) || trajectory.size() == 1) {
    rep.value = *std::max_element(values.begin(), values.end());
    return rep;
  }
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    integral += 0.5 * (trajectory[i + 1].t - trajectory[i].t) * (std::pow(values[i], q) + std::pow(values[i + 1], q));
  rep.value = std::pow(integral, 1.0 / q);
  return rep;
}

std::vector<WeakLimitPoint> weak_limit_experiment(const HermiteBasis& basis, const SimConfig& cfg,
                                                  std::span<const int> n_list, double amplitude, double s)
{
  if (n_list.empty()) throw ValidationError("n_list", "must not be empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ValidationError("n_list", "frequencies must be positive");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ValidationError("n_list", "must be strictly increasing");
  }
  if (!(amplitude >= 0.0)) throw ValidationError("amplitude", "must be non-negative");

  SimConfig base = cfg;
  base.record_times = {cfg.T};
  const SpectralField reference = simulate(basis, base).back().state;

  std::vector<WeakLimitPoint> out(n_list.size());
  parallel_for(n_list.size(), [&](std::size_t i) {
    SimConfig run = base;
    run.control = ControlSignal::sinusoid_perturbed(cfg.control, amplitude, n_list[i]);
    const SpectralField end = simulate(basis, run).back().state;
    out[i] = {n_list[i], sobolev_norm(basis, end - reference, s)};
  });
  return out;
}

TailProfile tail_profile(const HermiteBasis& basis, const SpectralField& f, double sobolev_weight,
                         std::span<const double> cutoffs)
{
  TailProfile p;
  p.sobolev_weight = sobolev_weight;
  p.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  std::sort(p.cutoffs.begin(), p.cutoffs.end());
  const auto lambda = basis.eigenvalues();

  // Per-eigenvalue weighted mass, then suffix sums over the sorted spectrum.
  std::vector<std::pair<double, double>> mass;
  mass.reserve(f.coeffs.size());
  for (std::size_t k = 0; k < f.coeffs.size(); ++k)
    mass.emplace_back(lambda[k], std::pow(lambda[k], sobolev_weight) * std::norm(f.coeffs[k]));
  std::sort(mass.begin(), mass.end());
  std::vector<double> suffix(mass.size() + 1, 0.0);
  for (std::size_t i = mass.size(); i-- > 0;) suffix[i] = suffix[i + 1] + mass[i].second;

  for (double cut : p.cutoffs) {
    const auto it = std::upper_bound(mass.begin(), mass.end(), cut,
                                     [](double c, const std::pair<double, double>& m) { return c < m.first; });
    p.tail_mass.push_back(suffix[static_cast<std::size_t>(it - mass.begin())]);
  }
  return p;
}

double cutoff_at_mode(const HermiteBasis& basis, int j) { return 2.0 * j + basis.dim(); }

std::vector<AttainableSample> attainable_ensemble(const HermiteBasis& basis, const SimConfig& cfg_template,
                                                  const AttainableOptions& options)
{
  if (options.n_samples < 1) throw ValidationError("n_samples", "must be at least 1");
  if (!(options.control_l2 >= 0.0)) throw ValidationError("control_l2", "must be non-negative");
  if (options.pieces < 1) throw ValidationError("pieces", "must be at least 1");
  if (options.k < 0) throw ValidationError("k", "must be non-negative");
  if (!(options.beta >= 0.0 && options.beta < 0.5)) throw ValidationError("beta", "must lie in [0, 1/2)");

  std::vector<double> cutoffs = options.cutoffs;
  if (cutoffs.empty()) {
    const int n = basis.n_modes();
    cutoffs = {cutoff_at_mode(basis, n / 4), cutoff_at_mode(basis, n / 2), cutoff_at_mode(basis, 3 * n / 4)};
  }
  const SpectralField psi0 = make_initial_state(basis, cfg_template.initial_state);
  const double weight = options.k + options.beta;

  std::vector<AttainableSample> out(options.n_samples);
  parallel_for(out.size(), [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    SimConfig run = cfg_template;
    run.control = options.control_l2 == 0.0
                      ? ControlSignal::zero(run.T)
                      : ControlSignal::random_piecewise(run.T, options.pieces, options.control_l2, 2.0, rng);
    const double t = std::uniform_real_distribution<double>(0.0, run.T)(rng);
    run.record_times = {t};
    const std::vector<TrajectoryRecord> traj = simulate_from(basis, run, psi0);
    const std::vector<TimedField> residual = residual_states(basis, traj, psi0);

    AttainableSample& sample = out[i];
    sample.index = static_cast<int>(i);
    sample.t = residual.front().t;
    sample.control_l2 = run.control.lr_norm(2.0);
    sample.profile = tail_profile(basis, residual.front().field, weight, cutoffs);
  });
  return out;
}

double calibrate_gronwall_constant(const HermiteBasis& basis, std::span<const TrajectoryRecord> trajectory, int k,
                                   double k_norm, const ControlSignal& control)
{
  if (trajectory.empty()) throw ValidationError("trajectory", "must not be empty");
  const double n0 = sobolev_norm(basis, trajectory.front().state, k);
  const double t0 = trajectory.front().t;
  double c_hat = 0.0;
  for (const TrajectoryRecord& r : trajectory) {
    const double mass = k_norm * control.abs_integral(t0, r.t);
    if (mass <= 0.0) continue;
    const double growth = std::log(sobolev_norm(basis, r.state, k) / n0);
    c_hat = std::max(c_hat, growth / mass);
  }
  return c_hat;
}

double gronwall_generator_constant(const HermiteBasis& basis, const Potential& potential, int k)
{
  if (k < 0 || k % 2 != 0) throw ValidationError("k", "must be a non-negative even integer");
  if (static_cast<int>(potential.wkinf_norms.size()) <= k)
    throw ValidationError("k", "potential norms not computed to this order");
  const std::size_t size = basis.spectral_size();
  if (size > 1024) throw ValidationError("n_modes", "generator constant needs at most 1024 basis functions");
  if (k == 0 || potential.wkinf_norms[k] == 0.0) return 0.0;

  // Columns of P K P: project K times each basis function.
  Eigen::MatrixXd m(size, size);
  for (std::size_t j = 0; j < size; ++j) {
    GridField g = to_grid(basis, SpectralField::eigenstate(basis, basis.mode_index(j)));
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] *= potential.grid_values[i];
    const SpectralField col = to_spectral(basis, g);
    for (std::size_t i = 0; i < size; ++i) m(i, j) = col.coeffs[i].real();
  }
  const auto lambda = basis.eigenvalues();
  Eigen::MatrixXd c(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      c(i, j) = (std::pow(lambda[i] / lambda[j], 0.5 * k) - 1.0) * m(i, j);
  const double norm = Eigen::BDCSVD<Eigen::MatrixXd>(c).singularValues()(0);
  return norm / potential.wkinf_norms[k];
}

EnvelopeCheck gronwall_check(const HermiteBasis& basis, std::span<const TrajectoryRecord> trajectory, int k,
                             double k_norm, const ControlSignal& control, double c_hat)
{
  if (trajectory.empty()) throw ValidationError("trajectory", "must not be empty");
  const double n0 = sobolev_norm(basis, trajectory.front().state, k);
  const double t0 = trajectory.front().t;
  EnvelopeCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  out.holds = true;
  for (const TrajectoryRecord& r : trajectory) {
    const double bound = n0 * std::exp(c_hat * k_norm * control.abs_integral(t0, r.t));
    const double margin = bound - sobolev_norm(basis, r.state, k);
    const double slack = 1e-12 * bound;
    out.margin = std::min(out.margin, margin);
    out.slack = std::max(out.slack, slack);
    out.holds = out.holds && margin >= -slack;
  }
  return out;
}

EnvelopeCheck energy_bound_check(std::span<const TrajectoryRecord> trajectory, double grad_sup,
                                 const ControlSignal& control, double dt)
{
  if (trajectory.empty()) throw ValidationError("trajectory", "must not be empty");
  const TrajectoryRecord& first = trajectory.front();
  const double root_e0 = std::sqrt(first.energy);
  EnvelopeCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  out.slack = 10.0 * dt * dt * first.energy;
  for (const TrajectoryRecord& r : trajectory) {
    // (sqrt(E0) + a)^2 expanded, so that the margin at t0 is exactly zero
    const double a = 2.0 * grad_sup * first.l2 * control.abs_integral(first.t, r.t);
    out.margin = std::min(out.margin, (first.energy - r.energy) + a * (2.0 * root_e0 + a));
  }
  out.holds = out.margin >= -out.slack;
  return out;
}

std::vector<KatoPoint> kato_scan(const HermiteBasis& basis, double beta, int k_max, double t0, double t1,
                                 int n_time)
{
  if (basis.dim() != 1) throw ValidationError("dim", "kato scan runs in one dimension");
  if (k_max < 0 || k_max >= basis.n_modes()) throw ValidationError("k_max", "must lie in [0, n_modes)");
  std::vector<KatoPoint> out(static_cast<std::size_t>(k_max) + 1);
  parallel_for(out.size(), [&](std::size_t k) {
    const SpectralField hk = SpectralField::eigenstate(basis, {static_cast<int>(k), 0, 0});
    out[k] = {static_cast<int>(k), kato_functional(basis, hk, beta, t0, t1, n_time),
              sobolev_norm(basis, hk, beta)};
  });
  return out;
}

ConvergenceStudy strang_convergence(const HermiteBasis& basis, const SimConfig& cfg, std::span<const double> dts,
                                    int ref_divisor)
{
  if (dts.size() < 2) throw ValidationError("dts", "need at least two step sizes");
  if (ref_divisor < 2) throw ValidationError("ref_divisor", "must be at least 2");
  for (double dt : dts)
    if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");

  SimConfig base = cfg;
  base.integrator = Integrator::strang;
  base.record_times = {cfg.T};
  ConvergenceStudy study;
  study.reference_dt = *std::min_element(dts.begin(), dts.end()) / ref_divisor;

  std::vector<SpectralField> ends(dts.size() + 1);
  parallel_for(ends.size(), [&](std::size_t i) {
    SimConfig run = base;
    run.dt = i < dts.size() ? dts[i] : study.reference_dt;
    ends[i] = simulate(basis, run).back().state;
  });
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double err = l2_norm(ends[i] - ends.back());
    study.points.push_back({dts[i], err});
    xs.push_back(dts[i]);
    ys.push_back(err);
  }
  study.slope = loglog_slope(xs, ys);
  return study;
}

}  // namespace gpe
