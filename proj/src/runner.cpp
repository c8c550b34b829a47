#include "gpe/runner.hpp"

#include "gpe/diagnostics.hpp"
#include "gpe/error.hpp"

#include <fmt/format.h>

#include <chrono>
#include <ostream>
#include <system_error>

namespace gpe {

namespace {

class Writer
{
 public:
  explicit Writer(const ExperimentConfig& cfg) : cfg_(cfg)
  {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError(cfg.output_dir.string(), "cannot create output directory: " + ec.message());
  }

  void write(const std::string& diagnostic, const RecordTable& table)
  {
    const std::filesystem::path path = cfg_.output_dir / (cfg_.name + "_" + diagnostic + "." + extension(cfg_.format));
    emit_records(table, cfg_.format, path);
    files.push_back(path);
  }

  std::vector<std::filesystem::path> files;

 private:
  const ExperimentConfig& cfg_;
};

std::string sobolev_column(double s) { return "h_" + fmt::format("{}", s); }

void run_simulate(const ExperimentConfig& cfg, Writer& out)
{
  const SimConfig sim = cfg.materialize();
  const HermiteBasis basis = build_basis(sim.dim, sim.n_modes, sim.quad_factor);
  const std::vector<TrajectoryRecord> traj = simulate(basis, sim);

  RecordTable table;
  table.columns = {"t", "l2", "energy"};
  for (double s : sim.sobolev_s) table.columns.push_back(sobolev_column(s));
  table.columns.push_back("residual");
  table.columns.push_back("linf");
  for (const TrajectoryRecord& r : traj) {
    std::vector<Cell> row{r.t, r.l2, r.energy};
    for (double v : r.sobolev) row.emplace_back(v);
    row.emplace_back(r.residual_sobolev);
    row.emplace_back(r.linf);
    table.add_row(std::move(row));
  }
  out.write("trajectory", table);

  if (cfg.strichartz.empty()) return;
  RecordTable norms;
  norms.columns = {"q", "r", "s", "value", "admissible"};
  for (const StrichartzRequest& q : cfg.strichartz) {
    const StrichartzReport rep = strichartz_norm(basis, traj, q.q, q.r, q.s, q.whitelisted);
    norms.add_row({rep.q, rep.r, rep.s, rep.value, std::int64_t{rep.admissible}});
  }
  out.write("strichartz", norms);
}

void run_kato_scan(const ExperimentConfig& cfg, Writer& out)
{
  const SimConfig sim = cfg.materialize();
  const HermiteBasis basis = build_basis(1, sim.n_modes, sim.quad_factor);
  const auto scan = kato_scan(basis, cfg.kato.beta, cfg.kato.k_max, cfg.kato.t0, cfg.kato.t1, cfg.kato.n_time);
  RecordTable table;
  table.columns = {"k", "lambda", "kato", "sobolev"};
  for (const KatoPoint& p : scan)
    table.add_row({std::int64_t{p.k}, basis.eigenvalues()[p.k], p.value, p.sobolev});
  out.write("kato", table);
}

void run_smoothing(const ExperimentConfig& cfg, Writer& out)
{
  const SimConfig sim = cfg.materialize();
  const HermiteBasis basis = build_basis(sim.dim, sim.n_modes, sim.quad_factor);
  const SpectralField psi0 = make_initial_state(basis, sim.initial_state);
  const std::vector<TrajectoryRecord> traj = simulate_from(basis, sim, psi0);
  const SmoothingParams& p = cfg.smoothing;

  RecordTable series;
  series.columns = {"t", "residual"};
  for (auto [t, r] : smoothing_residual_series(basis, traj, psi0, p.k, p.beta)) series.add_row({t, r});
  out.write("residual", series);

  const std::vector<TimedField> states = residual_states(basis, traj, psi0);
  const HolderEstimate est = holder_quotient(basis, states, p.k + p.beta, p.alpha, effective_step(sim));
  RecordTable holder;
  holder.columns = {"alpha", "quotient_sup", "fitted_alpha", "fitted_defined", "pairs"};
  holder.add_row({est.alpha, est.quotient_sup, est.fitted_defined ? est.fitted_alpha : std::nan(""),
                  std::int64_t{est.fitted_defined}, std::int64_t{est.pairs}});
  out.write("holder", holder);
}

void run_attainable(const ExperimentConfig& cfg, Writer& out)
{
  const SimConfig sim = cfg.materialize();
  const HermiteBasis basis = build_basis(sim.dim, sim.n_modes, sim.quad_factor);
  AttainableOptions opt;
  opt.n_samples = cfg.attainable.n_samples;
  opt.control_l2 = cfg.attainable.control_l2;
  opt.seed = cfg.seed;
  opt.k = cfg.attainable.k;
  opt.beta = cfg.attainable.beta;
  opt.pieces = cfg.attainable.pieces;
  for (int m : cfg.attainable.cutoff_modes) opt.cutoffs.push_back(cutoff_at_mode(basis, m));
  const std::vector<AttainableSample> samples = attainable_ensemble(basis, sim, opt);

  RecordTable tails;
  tails.columns = {"sample", "t", "control_l2", "cutoff", "tail_mass"};
  std::vector<double> sup;
  for (const AttainableSample& s : samples) {
    sup.resize(s.profile.cutoffs.size(), 0.0);
    for (std::size_t j = 0; j < s.profile.cutoffs.size(); ++j) {
      tails.add_row({std::int64_t{s.index}, s.t, s.control_l2, s.profile.cutoffs[j], s.profile.tail_mass[j]});
      sup[j] = std::max(sup[j], s.profile.tail_mass[j]);
    }
  }
  out.write("tails", tails);

  RecordTable summary;
  summary.columns = {"cutoff", "sup_tail_mass", "ratio_to_first"};
  const std::vector<double>& cutoffs = samples.front().profile.cutoffs;
  for (std::size_t j = 0; j < cutoffs.size(); ++j)
    summary.add_row({cutoffs[j], sup[j], sup[0] > 0.0 ? sup[j] / sup[0] : std::nan("")});
  out.write("tail_summary", summary);
}

void run_weak_limit(const ExperimentConfig& cfg, Writer& out)
{
  const SimConfig sim = cfg.materialize();
  const HermiteBasis basis = build_basis(sim.dim, sim.n_modes, sim.quad_factor);
  const auto pts = weak_limit_experiment(basis, sim, cfg.weak_limit.n_list, cfg.weak_limit.amplitude, cfg.weak_limit.s);
  RecordTable table;
  table.columns = {"n", "error"};
  for (const WeakLimitPoint& p : pts) table.add_row({std::int64_t{p.n}, p.error});
  out.write("weak_limit", table);
}

void run_convergence(const ExperimentConfig& cfg, Writer& out)
{
  const SimConfig sim = cfg.materialize();
  const HermiteBasis basis = build_basis(sim.dim, sim.n_modes, sim.quad_factor);
  const ConvergenceStudy study = strang_convergence(basis, sim, cfg.convergence.dts, cfg.convergence.ref_divisor);
  RecordTable table;
  table.columns = {"dt", "error"};
  for (const ConvergencePoint& p : study.points) table.add_row({p.dt, p.error});
  out.write("convergence", table);

  RecordTable order;
  order.columns = {"slope", "reference_dt"};
  order.add_row({study.slope, study.reference_dt});
  out.write("order", order);
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg)
{
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Writer out(cfg);
  switch (cfg.experiment) {
    case Experiment::simulate: run_simulate(cfg, out); break;
    case Experiment::kato_scan: run_kato_scan(cfg, out); break;
    case Experiment::smoothing: run_smoothing(cfg, out); break;
    case Experiment::attainable: run_attainable(cfg, out); break;
    case Experiment::weak_limit: run_weak_limit(cfg, out); break;
    case Experiment::convergence: run_convergence(cfg, out); break;
  }
  RunSummary summary;
  summary.experiment = to_string(cfg.experiment);
  summary.name = cfg.name;
  summary.output_dir = cfg.output_dir;
  summary.files = std::move(out.files);
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

int run_from_options(const RunOptions& options, std::ostream& out, std::ostream& err)
{
  try {
    ExperimentConfig cfg = load_experiment_config(options.config);
    if (options.seed_override) cfg.seed = *options.seed_override;
    if (options.output_override) cfg.output_dir = *options.output_override;
    cfg.validate();
    const RunSummary s = run_experiment(cfg);
    out << fmt::format("{} {}: {:.3f} s, {} file(s) in {}\n", s.experiment, s.name, s.wall_seconds, s.files.size(),
                       s.output_dir.string());
    return exit_ok;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return exit_validation;
  } catch (const DivergenceError& e) {
    err << fmt::format("divergence at t = {}: {}\n", e.time(), e.what());
    return exit_divergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace gpe
