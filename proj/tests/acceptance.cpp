// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "gpe/diagnostics.hpp"
#include "gpe/spectral_ops.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace gpe;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Random K: one of the analytic kinds with amplitude, width, center drawn.
// Widths stay >= 1 so the controlled states remain resolved by 64 modes.
PotentialSpec random_potential(std::mt19937_64& rng)
{
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> amp(0.5, 2.0), width(1.0, 2.0), center(-1.0, 1.0);
  PotentialSpec k;
  const PotentialSpec::Kind kinds[] = {PotentialSpec::Kind::gaussian_bump, PotentialSpec::Kind::sech,
                                       PotentialSpec::Kind::polynomial_decay};
  k.kind = kinds[kind(rng)];
  k.amplitude = amp(rng);
  k.width = width(rng);
  k.center = {center(rng)};
  return k;
}

// Resolved initial data: coherent states or random data with decay 2.
InitialState random_initial(std::mt19937_64& rng, int i)
{
  InitialState s;
  if (i % 2 == 0) {
    std::uniform_real_distribution<double> pos(-1.5, 1.5), mom(-1.0, 1.0);
    s.kind = InitialState::Kind::coherent;
    s.position = {pos(rng)};
    s.momentum = {mom(rng)};
  } else {
    s.kind = InitialState::Kind::random;
    s.decay = 2.0;
    s.seed = rng();
  }
  return s;
}

SimConfig random_config(std::mt19937_64& rng, int i, int sigma, int n_modes = 64)
{
  SimConfig cfg;
  cfg.n_modes = n_modes;
  cfg.sigma = sigma;
  cfg.T = 1.0;
  cfg.dt = 1e-3;
  cfg.potential = random_potential(rng);
  std::uniform_real_distribution<double> norm(0.5, 2.0);
  std::uniform_int_distribution<int> pieces(4, 16);
  cfg.control = ControlSignal::random_piecewise(cfg.T, pieces(rng), norm(rng), 2.0, rng);
  cfg.initial_state = random_initial(rng, i);
  cfg.record_times = uniform_times(cfg.T, 11);
  return cfg;
}

SimConfig coherent_bump(int n_modes, int sigma, double T)
{
  SimConfig cfg;
  cfg.n_modes = n_modes;
  cfg.sigma = sigma;
  cfg.T = T;
  cfg.initial_state.kind = InitialState::Kind::coherent;
  cfg.initial_state.position = {1.0};
  cfg.potential.kind = PotentialSpec::Kind::gaussian_bump;
  cfg.record_times = {T};
  return cfg;
}

Outcome transform_round_trip()
{
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  double worst = 0.0;
  const std::pair<int, int> cases[] = {{1, 8}, {1, 32}, {1, 128}, {3, 4}, {3, 8}, {3, 16}};
  for (auto [d, n] : cases) {
    const HermiteBasis basis = build_basis(d, n, 2);
    for (int trial = 0; trial < 100; ++trial) {
      SpectralField f = SpectralField::zeros(basis);
      for (Complex& c : f.coeffs) c = Complex(g(rng), g(rng));
      const SpectralField back = to_spectral(basis, to_grid(basis, f));
      for (std::size_t i = 0; i < f.coeffs.size(); ++i) worst = std::max(worst, std::abs(back.coeffs[i] - f.coeffs[i]));
    }
  }
  const double t = seconds_since(start);
  return {worst <= 1e-12 && t <= 10.0, fmt::format("max coefficient error {:.2e} (<= 1e-12), {:.2f} s (<= 10 s)", worst, t)};
}

Outcome eigenstructure()
{
  const HermiteBasis basis = build_basis(1, 65, 2);
  double worst = 0.0;
  for (int k = 0; k <= 64; ++k) {
    const SpectralField h = SpectralField::eigenstate(basis, {k, 0, 0});
    for (double s : {0.0, 1.0, 2.0, 4.0}) {
      const double expect = std::pow(2.0 * k + 1.0, s / 2.0);
      worst = std::max(worst, std::abs(sobolev_norm(basis, h, s) - expect) / expect);
    }
  }
  return {worst <= 1e-13, fmt::format("max relative error {:.2e} (<= 1e-13)", worst)};
}

Outcome conservation()
{
  const HermiteBasis basis = build_basis(1, 64, 2);
  std::mt19937_64 rng(3);
  double worst = 0.0, top = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SimConfig cfg = random_config(rng, i, i % 2);
    const auto traj = simulate(basis, cfg);
    worst = std::max(worst, std::abs(traj.back().l2 - traj.front().l2) / traj.front().l2);
    top = std::max(top, tail_profile(basis, traj.back().state, 0.0, std::vector<double>{cutoff_at_mode(basis, 47)})
                            .tail_mass[0]);
  }
  return {worst <= 1e-10, fmt::format("max relative L2 drift at T=1 over 20 runs {:.2e} (<= 1e-10); "
                                      "max mass in the top quarter of modes {:.1e}",
                                      worst, top)};
}

Outcome strang_order()
{
  const auto start = std::chrono::steady_clock::now();
  const HermiteBasis basis = build_basis(1, 64, 2);
  SimConfig cfg = coherent_bump(64, 1, 1.0);
  std::mt19937_64 rng(4);
  // 10 pieces: every jump falls on a step boundary for all the step sizes.
  cfg.control = ControlSignal::random_piecewise(cfg.T, 10, 1.0, 2.0, rng);
  const std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4};
  const ConvergenceStudy study = strang_convergence(basis, cfg, dts, 16);
  const double t = seconds_since(start);
  return {std::abs(study.slope - 2.0) <= 0.2 && t <= 60.0,
          fmt::format("self-convergence slope {:.3f} (2.0 +- 0.2), {:.2f} s (<= 60 s)", study.slope, t)};
}

Outcome picard_oracle()
{
  const HermiteBasis basis = build_basis(1, 64, 2);
  std::mt19937_64 rng(5);
  double worst_diff = 0.0;
  int met = 0;
  bool contraction_ok = true;
  for (int i = 0; i < 10; ++i) {
    const int sigma = i % 2;
    SimConfig cfg = random_config(rng, i, sigma);
    cfg.T = 0.1;
    cfg.dt = 1e-4;
    cfg.record_times = {0.1};
    std::uniform_real_distribution<double> norm(0.5, 3.0);
    cfg.control = ControlSignal::random_piecewise(cfg.T, 5, norm(rng), 2.0, rng);
    const PicardResult pic = picard_solve(basis, cfg, 0.1);
    const SpectralField strang = simulate(basis, cfg).back().state;
    worst_diff = std::max(worst_diff, l2_norm(pic.state - strang));

    const Model model = make_model(basis, cfg);
    const double criterion = cfg.control.abs_integral(0.0, 0.1) * model.potential.wkinf_norms[0];
    if (criterion < 0.5) {
      ++met;
      for (double r : pic.ratios) contraction_ok = contraction_ok && r < 1.0;
    }
  }
  return {worst_diff <= 1e-6 && contraction_ok && met > 0,
          fmt::format("max |picard - strang|_L2 {:.2e} (<= 1e-6); contraction ratios < 1 in all {} runs meeting "
                      "||u||_L1 ||K||_inf < 1/2: {}",
                      worst_diff, met, contraction_ok ? "yes" : "no")};
}

Outcome energy_bound()
{
  const HermiteBasis basis = build_basis(1, 64, 2);
  std::mt19937_64 rng(6);
  double worst = 1e300;
  bool holds = true;
  for (int i = 0; i < 20; ++i) {
    const SimConfig cfg = random_config(rng, i, 1);
    const Model model = make_model(basis, cfg);
    const auto traj = simulate(basis, cfg);
    const EnvelopeCheck c = energy_bound_check(traj, model.potential.grad_sup, cfg.control, effective_step(cfg));
    holds = holds && c.holds;
    worst = std::min(worst, c.margin / c.slack);
  }

  SimConfig free_cfg = random_config(rng, 0, 1);
  free_cfg.control = ControlSignal::zero(free_cfg.T);
  const auto traj = simulate(basis, free_cfg);
  const double e0 = traj.front().energy;
  const double h = effective_step(free_cfg);
  double drift = 0.0;
  for (const TrajectoryRecord& r : traj) drift = std::max(drift, std::abs(r.energy - e0));
  const bool conserved = drift <= 10.0 * h * h * e0;
  return {holds && conserved,
          fmt::format("20 controlled runs: min margin / (10 dt^2 E0) {:.3g} (>= -1); u=0 drift {:.2e} (<= {:.2e})", worst,
                      drift, 10.0 * h * h * e0)};
}

Outcome gronwall_envelope()
{
  const HermiteBasis basis = build_basis(1, 64, 2);
  std::mt19937_64 rng(7);
  const SimConfig calibration = random_config(rng, 0, 0);
  const double c_hat = gronwall_generator_constant(basis, make_model(basis, calibration).potential, 2);
  double worst = 1e300;
  bool holds = true;
  for (int i = 0; i < 20; ++i) {
    SimConfig cfg = random_config(rng, i, 0);
    cfg.record_times = uniform_times(cfg.T, 21);
    const Model model = make_model(basis, cfg);
    const auto traj = simulate(basis, cfg);
    for (int k : {0, 2}) {
      const EnvelopeCheck c = gronwall_check(basis, traj, k, model.potential.wkinf_norms[k], cfg.control, c_hat);
      holds = holds && c.margin >= 0.0;
      worst = std::min(worst, c.margin);
    }
  }
  return {holds, fmt::format("c_hat {:.4f}; min envelope margin over 20 runs, k in {{0,2}}: {:.3e} (>= 0)", c_hat, worst)};
}

Outcome kato_plateau()
{
  const auto start = std::chrono::steady_clock::now();
  const HermiteBasis basis = build_basis(1, 288, 2);
  const double pi = std::numbers::pi;
  const auto scan = kato_scan(basis, 0.45, 256, -2.0 * pi, 2.0 * pi, 256);
  double max_value = 0.0;
  for (const KatoPoint& p : scan) max_value = std::max(max_value, p.value);
  const double at16 = scan[16].value;
  const double growth = scan.back().sobolev / scan.front().sobolev;
  const double t = seconds_since(start);
  const bool plateau = max_value <= 3.0 * at16;
  const bool grows = growth > 10.0;
  return {plateau && grows && t <= 120.0,
          fmt::format("plateau max/value(k=16) {:.3f} (<= 3): {}; ||H^(beta/2) h_k|| growth over k <= 256 {:.3f}x "
                      "(> 10x): {}; {:.2f} s (<= 120 s)",
                      max_value / at16, plateau ? "ok" : "fail", growth, grows ? "ok" : "fail", t)};
}

Outcome smoothing_residual()
{
  // u = 0: the residual is psi(t) - e^{itH} psi0 with no forcing at all.
  double free_worst = 0.0;
  {
    const HermiteBasis basis = build_basis(1, 64, 2);
    SimConfig cfg;
    cfg.n_modes = 64;
    cfg.initial_state.kind = InitialState::Kind::random;
    cfg.initial_state.seed = 9;
    cfg.potential.kind = PotentialSpec::Kind::gaussian_bump;
    cfg.control = ControlSignal::zero(cfg.T);
    cfg.record_times = uniform_times(cfg.T, 21);
    const SpectralField psi0 = make_initial_state(basis, cfg.initial_state);
    const auto traj = simulate_from(basis, cfg, psi0);
    for (int k : {0, 2})
      for (auto [t, r] : smoothing_residual_series(basis, traj, psi0, k, 0.4)) free_worst = std::max(free_worst, r);
  }

  const HermiteBasis basis = build_basis(1, 192, 2);
  const int k0s[] = {32, 64, 128};
  std::vector<double> caps;
  for (int k0 : k0s) {
    std::mt19937_64 rng(10);
    double cap = 0.0;
    SimConfig cfg;
    cfg.n_modes = 192;
    cfg.initial_state.mode = {k0, 0, 0};
    cfg.potential.kind = PotentialSpec::Kind::gaussian_bump;
    cfg.record_times = uniform_times(cfg.T, 21);
    const SpectralField psi0 = make_initial_state(basis, cfg.initial_state);
    const double data_norm = sobolev_norm(basis, psi0, 0.4);
    for (int i = 0; i < 20; ++i) {
      cfg.control = ControlSignal::random_piecewise(cfg.T, 10, 1.0, 2.0, rng);
      const auto traj = simulate_from(basis, cfg, psi0);
      for (auto [t, r] : smoothing_residual_series(basis, traj, psi0, 0, 0.4)) cap = std::max(cap, r / data_norm);
    }
    caps.push_back(cap);
  }
  const bool ok = free_worst <= 1e-11 && caps[2] <= 2.0 * caps[0];
  return {ok, fmt::format("u=0 residual {:.2e} (<= 1e-11); caps k0=32,64,128: {:.4f}, {:.4f}, {:.4f} "
                          "(cap(128) <= 2 cap(32))",
                          free_worst, caps[0], caps[1], caps[2])};
}

Outcome weak_control()
{
  const HermiteBasis basis = build_basis(1, 64, 2);
  const std::vector<int> n_list{1, 2, 4, 8, 16, 32, 64};
  bool ok = true;
  std::string detail;
  for (int sigma : {0, 1}) {
    std::vector<std::vector<WeakLimitPoint>> runs;
    for (double dt : {1e-3, 5e-4}) {
      SimConfig cfg = coherent_bump(64, sigma, 1.0);
      cfg.dt = dt;
      std::mt19937_64 rng(77);
      cfg.control = ControlSignal::random_piecewise(cfg.T, 8, 1.0, 2.0, rng);
      runs.push_back(weak_limit_experiment(basis, cfg, n_list, 1.0));
    }
    double change = 0.0;
    for (std::size_t j = 0; j < n_list.size(); ++j)
      change = std::max(change, std::abs(runs[1][j].error - runs[0][j].error) / runs[0][j].error);
    for (const auto& run : runs) ok = ok && run.back().error <= run.front().error / 4.0;
    ok = ok && change <= 0.2;
    detail += fmt::format("{}sigma={}: err(1) {:.4f}, err(64) {:.2e}, max change under dt halving {:.1e}",
                          detail.empty() ? "" : "; ", sigma, runs[0].front().error, runs[0].back().error, change);
  }
  return {ok, detail + " (err(64) <= err(1)/4, change <= 20%)"};
}

Outcome compactness()
{
  std::vector<std::vector<double>> sups;
  for (int n : {64, 128}) {
    const HermiteBasis basis = build_basis(1, n, 2);
    SimConfig cfg = coherent_bump(n, 1, 1.0);
    AttainableOptions opt;
    opt.n_samples = 64;
    opt.control_l2 = 1.0;
    opt.seed = 11;
    for (int m : {16, 32, 48, 96}) opt.cutoffs.push_back(cutoff_at_mode(basis, m));
    const auto samples = attainable_ensemble(basis, cfg, opt);
    std::vector<double> sup(opt.cutoffs.size(), 0.0);
    for (const AttainableSample& s : samples)
      for (std::size_t j = 0; j < sup.size(); ++j) sup[j] = std::max(sup[j], s.profile.tail_mass[j]);
    sups.push_back(sup);
  }
  // Cutoffs at modes 16, 32, 48, 96: N/4 and 3N/4 are (16, 48) for N = 64 and (32, 96) for N = 128.
  const double ratio64 = sups[0][2] / sups[0][0];
  const double ratio128 = sups[1][3] / sups[1][1];
  double doubling = 1.0;
  for (std::size_t j = 0; j < 3; ++j) {
    const double r = sups[1][j] / sups[0][j];
    doubling = std::max({doubling, r, 1.0 / r});
  }
  const bool ok = ratio64 <= 0.05 && ratio128 <= 0.05 && doubling <= 2.0;
  return {ok, fmt::format("sup tail(3N/4) / sup tail(N/4): N=64 {:.2e}, N=128 {:.2e} (<= 0.05); "
                          "worst change N=64 -> 128 at shared cutoffs {:.4f}x (<= 2x)",
                          ratio64, ratio128, doubling)};
}

int run_cli(const std::string& args)
{
  const std::string cmd = std::string(GPE_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism()
{
  const fs::path scratch = fs::temp_directory_path() / "gpe_acceptance_cli";
  fs::remove_all(scratch);
  int configs = 0, identical = 0, files = 0;
  for (const auto& entry : fs::directory_iterator(GPE_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++configs;
    const fs::path a = scratch / entry.path().stem() / "a", b = scratch / entry.path().stem() / "b";
    const std::string base = "run --config " + entry.path().string() + " --output-override ";
    if (run_cli(base + a.string()) != 0 || run_cli(base + b.string()) != 0) continue;
    bool same = fs::exists(a);
    for (const auto& out : fs::directory_iterator(a)) {
      ++files;
      const fs::path twin = b / out.path().filename();
      same = same && fs::exists(twin) && slurp(out.path()) == slurp(twin);
    }
    identical += same;
  }
  int malformed = 0, rejected = 0;
  for (const auto& entry : fs::directory_iterator(GPE_MALFORMED_DIR)) {
    ++malformed;
    rejected += run_cli("run --config " + entry.path().string() + " --output-override " + (scratch / "bad").string()) == 2;
  }
  const bool untouched = !fs::exists(scratch / "bad");
  const bool ok = configs > 0 && identical == configs && malformed > 0 && rejected == malformed && untouched;
  return {ok, fmt::format("{}/{} example configs byte-identical across two runs ({} files); {}/{} malformed configs "
                          "exit 2{}",
                          identical, configs, files, rejected, malformed, untouched ? "" : ", but output was written")};
}

}  // namespace

int main()
{
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"transform round trip", transform_round_trip},
      {"eigenstructure", eigenstructure},
      {"L2 conservation", conservation},
      {"Strang order", strang_order},
      {"Picard oracle", picard_oracle},
      {"energy bound", energy_bound},
      {"Gronwall envelope", gronwall_envelope},
      {"Kato plateau", kato_plateau},
      {"smoothing residual", smoothing_residual},
      {"weak-control continuity", weak_control},
      {"compactness proxy", compactness},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  int id = 0;
  for (const auto& [name, check] : criteria) {
    ++id;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    fmt::print("criterion {:2d} {} {}: {}\n", id, o.pass ? "PASS" : "FAIL", name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", id - failures, id);
  return failures == 0 ? 0 : 1;
}
