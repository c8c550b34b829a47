#include "gpe/config.hpp"

#include "gpe/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace gpe {

using nlohmann::json;

Experiment parse_experiment(const std::string& name)
{
  if (name == "simulate") return Experiment::simulate;
  if (name == "kato-scan") return Experiment::kato_scan;
  if (name == "smoothing") return Experiment::smoothing;
  if (name == "attainable") return Experiment::attainable;
  if (name == "weak-limit") return Experiment::weak_limit;
  if (name == "convergence") return Experiment::convergence;
  throw ValidationError("experiment", "unknown experiment '" + name + "'");
}

std::string to_string(Experiment e)
{
  switch (e) {
    case Experiment::simulate: return "simulate";
    case Experiment::kato_scan: return "kato-scan";
    case Experiment::smoothing: return "smoothing";
    case Experiment::attainable: return "attainable";
    case Experiment::weak_limit: return "weak-limit";
    case Experiment::convergence: return "convergence";
  }
  return "unknown";
}

namespace {

// Strict view of one JSON object: every key must be consumed by some accessor
// before finish(), and every value must have the expected type.
class Reader
{
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) throw ValidationError(path_.empty() ? "config" : path_, "must be a JSON object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key)
  {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& require(const std::string& key)
  {
    if (!has(key)) throw ValidationError(field(key), "is required");
    return j_.at(key);
  }

  double number(const std::string& key, double fallback)
  {
    return has(key) ? as_number(j_.at(key), field(key)) : fallback;
  }

  double number(const std::string& key) { return as_number(require(key), field(key)); }

  /// A number, or the string "inf".
  double extended(const std::string& key, double fallback)
  {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (v.is_string() && v.get<std::string>() == "inf") return kInfinity;
    return as_number(v, field(key));
  }

  int integer(const std::string& key, int fallback) { return has(key) ? as_int(j_.at(key), field(key)) : fallback; }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback)
  {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    // the parser stores every non-negative integer literal as unsigned
    if (!v.is_number_unsigned())
      throw ValidationError(field(key), "must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback)
  {
    return has(key) ? as_string(j_.at(key), field(key)) : fallback;
  }

  std::string string(const std::string& key) { return as_string(require(key), field(key)); }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback)
  {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ValidationError(field(key), "must be an array of numbers");
    std::vector<double> out;
    for (const json& x : v) out.push_back(as_number(x, field(key)));
    return out;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> fallback)
  {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ValidationError(field(key), "must be an array of integers");
    std::vector<int> out;
    for (const json& x : v) out.push_back(as_int(x, field(key)));
    return out;
  }

  bool boolean(const std::string& key, bool fallback)
  {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ValidationError(field(key), "must be true or false");
    return v.get<bool>();
  }

  void finish() const
  {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ValidationError(field(it.key()), "unknown key");
  }

 private:
  static double as_number(const json& v, const std::string& f)
  {
    if (!v.is_number()) throw ValidationError(f, "must be a number");
    return v.get<double>();
  }

  static int as_int(const json& v, const std::string& f)
  {
    if (!v.is_number_integer()) throw ValidationError(f, "must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < -(1LL << 31) || x >= (1LL << 31)) throw ValidationError(f, "integer out of range");
    return static_cast<int>(x);
  }

  static std::string as_string(const json& v, const std::string& f)
  {
    if (!v.is_string()) throw ValidationError(f, "must be a string");
    return v.get<std::string>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ControlSpec parse_control(const json& j, const std::string& path)
{
  Reader r(j, path);
  ControlSpec c;
  const std::string kind = r.string("kind");
  if (kind == "zero") {
    c.kind = ControlSpec::Kind::zero;
  } else if (kind == "piecewise_constant" || kind == "sampled") {
    c.kind = kind == "sampled" ? ControlSpec::Kind::sampled : ControlSpec::Kind::piecewise_constant;
    c.values = r.numbers("values", {});
    if (c.values.empty()) throw ValidationError(r.field("values"), "is required and must not be empty");
  } else if (kind == "random_piecewise") {
    c.kind = ControlSpec::Kind::random_piecewise;
    c.pieces = r.integer("pieces", c.pieces);
    c.norm = r.number("norm", c.norm);
    c.r = r.number("r", c.r);
    if (c.pieces < 1) throw ValidationError(r.field("pieces"), "must be at least 1");
    if (!(c.norm >= 0.0)) throw ValidationError(r.field("norm"), "must be non-negative");
    if (!(c.r >= 1.0)) throw ValidationError(r.field("r"), "must be at least 1");
  } else if (kind == "sinusoid") {
    c.kind = ControlSpec::Kind::sinusoid;
    c.amplitude = r.number("amplitude");
    c.frequency = r.integer("frequency", 1);
    if (c.frequency < 0) throw ValidationError(r.field("frequency"), "must be non-negative");
    c.base = std::make_shared<ControlSpec>(r.has("base") ? parse_control(r.require("base"), r.field("base"))
                                                         : ControlSpec{});
  } else {
    throw ValidationError(r.field("kind"), "unknown control kind '" + kind + "'");
  }
  r.finish();
  return c;
}

void parse_simulation(const json& j, ExperimentConfig& cfg)
{
  Reader r(j, "simulation");
  SimConfig& s = cfg.sim;
  s.dim = r.integer("dim", s.dim);
  s.n_modes = r.integer("n_modes", s.n_modes);
  s.quad_factor = r.integer("quad_factor", s.quad_factor);
  s.sigma = r.integer("sigma", s.sigma);
  s.T = r.number("T", s.T);
  s.dt = r.number("dt", s.dt);
  s.integrator = r.has("integrator") ? parse_integrator(r.string("integrator")) : s.integrator;
  s.divergence_h1 = r.number("divergence_h1", s.divergence_h1);
  s.sobolev_s = r.numbers("sobolev_s", s.sobolev_s);

  if (r.has("picard")) {
    Reader p(r.require("picard"), r.field("picard"));
    s.picard_tol = p.number("tol", s.picard_tol);
    s.picard_max_iter = p.integer("max_iter", s.picard_max_iter);
    s.picard_window = p.number("window", s.picard_window);
    p.finish();
  }

  if (r.has("residual")) {
    Reader p(r.require("residual"), r.field("residual"));
    s.residual_k = p.integer("k", s.residual_k);
    s.residual_beta = p.number("beta", s.residual_beta);
    p.finish();
  }

  if (r.has("initial_state")) {
    Reader p(r.require("initial_state"), r.field("initial_state"));
    const std::string kind = p.string("kind");
    InitialState& st = s.initial_state;
    if (kind == "eigenstate") {
      st.kind = InitialState::Kind::eigenstate;
      const std::size_t axes = static_cast<std::size_t>(std::clamp(s.dim, 1, kMaxDim));
      const std::vector<int> mode = p.integers("mode", std::vector<int>(axes, 0));
      if (mode.size() != axes)
        throw ValidationError(p.field("mode"), "must have one entry per dimension");
      st.mode = {};
      for (std::size_t i = 0; i < mode.size(); ++i) st.mode[i] = mode[i];
    } else if (kind == "coherent") {
      st.kind = InitialState::Kind::coherent;
      st.position = p.numbers("position", {});
      st.momentum = p.numbers("momentum", {});
    } else if (kind == "random") {
      st.kind = InitialState::Kind::random;
      st.decay = p.number("decay", st.decay);
      if (p.has("seed")) cfg.initial_seed = p.unsigned64("seed", 0);
    } else {
      throw ValidationError(p.field("kind"), "unknown initial state '" + kind + "'");
    }
    p.finish();
  }

  if (r.has("potential")) {
    Reader p(r.require("potential"), r.field("potential"));
    PotentialSpec& k = s.potential;
    k.kind = parse_potential_kind(p.string("kind"));
    k.amplitude = p.number("amplitude", k.amplitude);
    if (k.kind != PotentialSpec::Kind::constant && k.kind != PotentialSpec::Kind::sampled)
      k.width = p.number("width", k.width);
    if (k.kind != PotentialSpec::Kind::constant && k.kind != PotentialSpec::Kind::sampled)
      k.center = p.numbers("center", {});
    if (k.kind == PotentialSpec::Kind::sampled) k.sampled_values = p.numbers("values", {});
    p.finish();
  }

  if (r.has("control")) cfg.control = parse_control(r.require("control"), r.field("control"));

  if (r.has("record_times")) {
    const json& v = r.require("record_times");
    if (v.is_object()) {
      Reader p(v, r.field("record_times"));
      const int count = p.integer("count", 11);
      if (count < 1) throw ValidationError(p.field("count"), "must be at least 1");
      p.finish();
      s.record_times = uniform_times(s.T, count);
    } else {
      s.record_times = r.numbers("record_times", {});
    }
  } else {
    s.record_times = uniform_times(s.T, 11);
  }
  r.finish();
}

void parse_strichartz(const json& j, ExperimentConfig& cfg)
{
  if (!j.is_array()) throw ValidationError("strichartz", "must be an array of {q, r, s} objects");
  for (std::size_t i = 0; i < j.size(); ++i) {
    Reader p(j[i], "strichartz[" + std::to_string(i) + "]");
    StrichartzRequest q;
    q.q = p.extended("q", q.q);
    q.r = p.extended("r", q.r);
    q.s = p.number("s", q.s);
    q.whitelisted = p.boolean("whitelisted", false);
    p.finish();
    cfg.strichartz.push_back(q);
  }
}

std::vector<std::uint32_t> seed_words(std::uint64_t seed, std::uint32_t tag)
{
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
}

ControlSignal build_control(const ControlSpec& c, double T, std::mt19937_64& rng)
{
  switch (c.kind) {
    case ControlSpec::Kind::zero: return ControlSignal::zero(T);
    case ControlSpec::Kind::piecewise_constant: return ControlSignal::piecewise_constant(T, c.values);
    case ControlSpec::Kind::sampled: return ControlSignal::sampled(T, c.values);
    case ControlSpec::Kind::random_piecewise: return ControlSignal::random_piecewise(T, c.pieces, c.norm, c.r, rng);
    case ControlSpec::Kind::sinusoid:
      return ControlSignal::sinusoid_perturbed(build_control(c.base ? *c.base : ControlSpec{}, T, rng), c.amplitude,
                                               c.frequency);
  }
  return ControlSignal::zero(T);
}

bool valid_name(const std::string& name)
{
  if (name.empty() || name.size() > 128 || !std::isalnum(static_cast<unsigned char>(name[0]))) return false;
  for (char ch : name)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-' && ch != '.') return false;
  return true;
}

}  // namespace

SimConfig ExperimentConfig::materialize() const
{
  SimConfig s = sim;
  const std::vector<std::uint32_t> words = seed_words(seed, 0x636f6e74u);
  std::seed_seq seq(words.begin(), words.end());
  std::mt19937_64 rng(seq);
  s.control = build_control(control, s.T, rng);
  s.initial_state.seed = initial_seed.value_or(seed);
  return s;
}

void ExperimentConfig::validate() const
{
  if (!valid_name(name)) throw ValidationError("name", "must be 1-128 characters of [A-Za-z0-9_.-], starting alphanumeric");
  if (output_dir.empty()) throw ValidationError("output.dir", "must not be empty");
  const SimConfig s = materialize();
  s.validate();

  for (const StrichartzRequest& q : strichartz) {
    if (!(q.q >= 1.0) || !(q.r >= 1.0)) throw ValidationError("strichartz", "q and r must be at least 1");
    if (!(q.s >= 0.0)) throw ValidationError("strichartz", "s must be non-negative");
    if (!q.whitelisted && !check_admissible(q.q, q.r, s.dim))
      throw ValidationError("strichartz", "pair is not admissible in dimension " + std::to_string(s.dim) +
                                              " (set whitelisted to report it anyway)");
  }

  switch (experiment) {
    case Experiment::simulate: break;
    case Experiment::kato_scan:
      if (s.dim != 1) throw ValidationError("simulation.dim", "kato-scan runs in one dimension");
      if (!(kato.beta >= 0.0 && kato.beta < 0.5)) throw ValidationError("kato_scan.beta", "must lie in [0, 1/2)");
      if (kato.k_max < 0 || kato.k_max >= s.n_modes)
        throw ValidationError("kato_scan.k_max", "must lie in [0, n_modes)");
      if (!(kato.t1 > kato.t0)) throw ValidationError("kato_scan.t1", "must exceed t0");
      if (kato.n_time < 16) throw ValidationError("kato_scan.n_time", "must be at least 16");
      break;
    case Experiment::smoothing:
      if (s.sigma != 0) throw ValidationError("simulation.sigma", "smoothing needs the bilinear case sigma = 0");
      if (smoothing.k < 0 || smoothing.k % 2 != 0)
        throw ValidationError("smoothing.k", "must be a non-negative even integer");
      if (!(smoothing.beta >= 0.0 && smoothing.beta < 0.5))
        throw ValidationError("smoothing.beta", "must lie in [0, 1/2)");
      if (!(smoothing.alpha > 0.0 && smoothing.alpha <= 1.0))
        throw ValidationError("smoothing.alpha", "must lie in (0, 1]");
      if (s.record_times.size() < 2) throw ValidationError("simulation.record_times", "need at least two times");
      break;
    case Experiment::attainable:
      if (attainable.n_samples < 1) throw ValidationError("attainable.n_samples", "must be at least 1");
      if (!(attainable.control_l2 >= 0.0)) throw ValidationError("attainable.control_l2", "must be non-negative");
      if (attainable.k < 0) throw ValidationError("attainable.k", "must be non-negative");
      if (!(attainable.beta >= 0.0 && attainable.beta < 0.5))
        throw ValidationError("attainable.beta", "must lie in [0, 1/2)");
      if (attainable.pieces < 1) throw ValidationError("attainable.pieces", "must be at least 1");
      for (int m : attainable.cutoff_modes)
        if (m < 0 || m >= s.n_modes) throw ValidationError("attainable.cutoff_modes", "must lie in [0, n_modes)");
      break;
    case Experiment::weak_limit:
      if (weak_limit.n_list.empty()) throw ValidationError("weak_limit.n_list", "must not be empty");
      for (std::size_t i = 0; i < weak_limit.n_list.size(); ++i) {
        if (weak_limit.n_list[i] < 1) throw ValidationError("weak_limit.n_list", "frequencies must be positive");
        if (i > 0 && weak_limit.n_list[i] <= weak_limit.n_list[i - 1])
          throw ValidationError("weak_limit.n_list", "must be strictly increasing");
      }
      if (!(weak_limit.amplitude >= 0.0)) throw ValidationError("weak_limit.amplitude", "must be non-negative");
      if (!(weak_limit.s >= 0.0)) throw ValidationError("weak_limit.s", "must be non-negative");
      break;
    case Experiment::convergence:
      if (convergence.dts.size() < 2) throw ValidationError("convergence.dts", "need at least two step sizes");
      for (double dt : convergence.dts)
        if (!(dt > 0.0) || dt > s.T) throw ValidationError("convergence.dts", "steps must lie in (0, T]");
      if (convergence.ref_divisor < 2) throw ValidationError("convergence.ref_divisor", "must be at least 2");
      break;
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text)
{
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  Reader top(doc, "");
  cfg.name = top.string("name");
  cfg.experiment = parse_experiment(top.string("experiment"));
  cfg.seed = top.unsigned64("seed", 0);

  {
    Reader out(top.require("output"), "output");
    cfg.output_dir = out.string("dir");
    cfg.format = parse_output_format(out.string("format", "csv"));
    out.finish();
  }

  parse_simulation(top.require("simulation"), cfg);
  if (top.has("strichartz")) {
    if (cfg.experiment != Experiment::simulate)
      throw ValidationError("strichartz", "only applies to the simulate experiment");
    parse_strichartz(doc.at("strichartz"), cfg);
  }

  // Each experiment owns at most one parameter section; the others are rejected.
  const std::pair<const char*, Experiment> sections[] = {
      {"kato_scan", Experiment::kato_scan},   {"smoothing", Experiment::smoothing},
      {"attainable", Experiment::attainable}, {"weak_limit", Experiment::weak_limit},
      {"convergence", Experiment::convergence},
  };
  for (const auto& [key, owner] : sections) {
    if (!top.has(key)) continue;
    if (owner != cfg.experiment)
      throw ValidationError(key, "section does not apply to experiment '" + to_string(cfg.experiment) + "'");
    Reader p(doc.at(key), key);
    switch (owner) {
      case Experiment::kato_scan:
        cfg.kato.beta = p.number("beta", cfg.kato.beta);
        cfg.kato.k_max = p.integer("k_max", cfg.kato.k_max);
        cfg.kato.t0 = p.number("t0", cfg.kato.t0);
        cfg.kato.t1 = p.number("t1", cfg.kato.t1);
        cfg.kato.n_time = p.integer("n_time", cfg.kato.n_time);
        break;
      case Experiment::smoothing:
        cfg.smoothing.k = p.integer("k", cfg.smoothing.k);
        cfg.smoothing.beta = p.number("beta", cfg.smoothing.beta);
        cfg.smoothing.alpha = p.number("alpha", cfg.smoothing.alpha);
        break;
      case Experiment::attainable:
        cfg.attainable.n_samples = p.integer("n_samples", cfg.attainable.n_samples);
        cfg.attainable.control_l2 = p.number("control_l2", cfg.attainable.control_l2);
        cfg.attainable.k = p.integer("k", cfg.attainable.k);
        cfg.attainable.beta = p.number("beta", cfg.attainable.beta);
        cfg.attainable.pieces = p.integer("pieces", cfg.attainable.pieces);
        cfg.attainable.cutoff_modes = p.integers("cutoff_modes", {});
        break;
      case Experiment::weak_limit:
        cfg.weak_limit.n_list = p.integers("n_list", cfg.weak_limit.n_list);
        cfg.weak_limit.amplitude = p.number("amplitude", cfg.weak_limit.amplitude);
        cfg.weak_limit.s = p.number("s", cfg.weak_limit.s);
        break;
      case Experiment::convergence:
        cfg.convergence.dts = p.numbers("dts", cfg.convergence.dts);
        cfg.convergence.ref_divisor = p.integer("ref_divisor", cfg.convergence.ref_divisor);
        break;
      case Experiment::simulate: break;
    }
    p.finish();
  }
  top.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path)
{
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(path.string(), "cannot open config");
  std::ostringstream text;
  text << file.rdbuf();
  if (file.bad()) throw IoError(path.string(), "read failed");
  return parse_experiment_config(text.str());
}

}  // namespace gpe
