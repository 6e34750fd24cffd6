#include "fuzzy_l1/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fuzzy_l1/errors.hpp"

namespace fuzzy_l1 {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(ControllerMode mode) { return mode == ControllerMode::Constant ? "constant" : "fuzzy"; }

ControllerMode parse_controller_mode(std::string_view name) {
  if (name == "constant") return ControllerMode::Constant;
  if (name == "fuzzy") return ControllerMode::Fuzzy;
  throw ConfigError("mode", "unknown controller mode \"" + std::string(name) + "\" (expected constant or fuzzy)");
}

void ScenarioOverrides::apply(PlantScenario& s) const {
  if (pole_real) s.pole = {*pole_real, s.pole.imag()};
  if (pole_imag) s.pole = {s.pole.real(), *pole_imag};
  if (feedback_gain) s.feedback_gain = *feedback_gain;
  if (adaptation_gain) s.adaptation_gain = *adaptation_gain;
  if (kp) s.kp = *kp;
  if (kd) s.kd = *kd;
  if (ke) s.ke = *ke;
  if (omega_lower) s.bounds.omega_lower = *omega_lower;
  if (omega_upper) s.bounds.omega_upper = *omega_upper;
  if (theta_bound) s.bounds.theta_bound = *theta_bound;
  if (sigma_bound) s.bounds.sigma_bound = *sigma_bound;
  if (epsilon) s.bounds.epsilon = *epsilon;
  if (divergence_threshold) s.divergence_threshold = *divergence_threshold;
  if (x0) s.x0 = Eigen::Vector2d((*x0)[0], (*x0)[1]);
}

void RunConfig::validate() const {
  TimeGrid{0.0, duration, dt}.validate();
  if (substeps < 1) throw ConfigError("substeps", "substeps must be at least 1");
  if (!std::isfinite(reference.amplitude)) throw ConfigError("reference.amplitude", "amplitude must be finite");
  if (!std::isfinite(reference.frequency)) throw ConfigError("reference.frequency", "frequency must be finite");
  if (tuner_params && !std::filesystem::exists(*tuner_params)) {
    throw ConfigError("tuner_params", "tuner parameter file not found: " + tuner_params->string());
  }
  tune.swarm.validate();
  TimeGrid{0.0, tune.duration, dt}.validate();
  make_plant();
}

PlantScenario RunConfig::make_plant() const {
  PlantScenario s = make_scenario(scenario);
  overrides.apply(s);
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("overrides." + e.field(), e.what());
  }
  return s;
}

SimulationOptions RunConfig::simulation_options() const {
  SimulationOptions o;
  o.grid = {0.0, duration, dt};
  o.substeps = substeps;
  o.reference = reference;
  return o;
}

SimulationOptions RunConfig::tuning_options() const {
  SimulationOptions o = simulation_options();
  o.grid.tf = tune.duration;
  return o;
}

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first `"key"` used as an object key, 0 when not found.
std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  for (std::size_t pos = text.find(quoted); pos != std::string_view::npos; pos = text.find(quoted, pos + 1)) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') return line_of_offset(text, pos);
  }
  return 0;
}

class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix, std::string_view text, std::string_view source)
      : obj_(obj), prefix_(std::move(prefix)), text_(text), source_(source) {
    if (!obj_.is_object()) fail(prefix_.empty() ? "config" : prefix_.substr(0, prefix_.size() - 1), "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const std::string leaf = key.substr(key.rfind('.') == std::string::npos ? 0 : key.rfind('.') + 1);
    const std::size_t line = line_of_key(text_, leaf);
    std::string msg = std::string(source_);
    if (line > 0) msg += ":" + std::to_string(line);
    msg += ": " + key + ": " + why;
    throw ConfigError(key, msg);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string full(const std::string& key) const { return prefix_ + key; }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(full(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(full(key), "expected a finite number");
    }
  }

  void number(const std::string& key, std::optional<double>& out) {
    if (find(key)) {
      double v = 0.0;
      number(key, v);
      out = v;
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(full(key), "expected an integer");
      const auto i = v->get<std::int64_t>();
      if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) fail(full(key), "out of range");
      out = static_cast<int>(i);
    }
  }

  void unsigned_integer(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(full(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(full(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  std::optional<std::string> string(const std::string& key) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(full(key), "expected a string");
      return v->get<std::string>();
    }
    return std::nullopt;
  }

  std::optional<ObjectReader> object(const std::string& key) {
    if (const json* v = find(key)) {
      if (!v->is_object()) fail(full(key), "expected an object");
      return ObjectReader(*v, full(key) + ".", text_, source_);
    }
    return std::nullopt;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail(full(it.key()), "unknown key \"" + it.key() + "\"");
    }
  }

  const json& value() const { return obj_; }

 private:
  const json& obj_;
  std::string prefix_;
  std::string_view text_;
  std::string_view source_;
  std::set<std::string> seen_;
};

// Re-raises a validation error with the source location of its key.
template <class F>
void validated(ObjectReader& reader, F&& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    reader.fail(e.field(), e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string(source) + ":" + std::to_string(line_of_offset(text, e.byte)) +
                                    ": malformed JSON: " + e.what());
  }

  RunConfig cfg;
  ObjectReader root(doc, "", text, source);
  if (auto s = root.string("scenario")) validated(root, [&] {
      try {
        cfg.scenario = parse_scenario_id(*s);
      } catch (const ConfigError& e) {
        throw ConfigError("scenario", e.what());
      }
    });
  if (auto m = root.string("mode")) validated(root, [&] { cfg.mode = parse_controller_mode(*m); });
  root.number("duration", cfg.duration);
  root.number("dt", cfg.dt);
  root.integer("substeps", cfg.substeps);
  if (auto ref = root.object("reference")) {
    ref->number("amplitude", cfg.reference.amplitude);
    ref->number("frequency", cfg.reference.frequency);
    ref->finish();
  }
  if (auto out = root.string("out_dir")) cfg.out_dir = *out;
  if (auto tp = root.string("tuner_params")) cfg.tuner_params = std::filesystem::path(*tp);
  root.unsigned_integer("seed", cfg.seed);
  if (auto pso = root.object("pso")) {
    SwarmConfig& sw = cfg.tune.swarm;
    pso->integer("population", sw.population);
    pso->integer("generations", sw.generations);
    pso->number("c1", sw.c1);
    pso->number("c2", sw.c2);
    pso->number("inertia", sw.inertia);
    pso->number("lambda", sw.lambda);
    pso->number("gamma1", sw.gamma1);
    pso->number("gamma2", sw.gamma2);
    pso->boolean("per_dimension_random", sw.per_dimension_random);
    pso->integer("workers", sw.workers);
    pso->number("duration", cfg.tune.duration);
    pso->finish();
    validated(*pso, [&] { sw.validate(); });
  }
  if (auto ov = root.object("overrides")) {
    ScenarioOverrides& o = cfg.overrides;
    ov->number("pole_real", o.pole_real);
    ov->number("pole_imag", o.pole_imag);
    ov->number("feedback_gain", o.feedback_gain);
    ov->number("adaptation_gain", o.adaptation_gain);
    ov->number("kp", o.kp);
    ov->number("kd", o.kd);
    ov->number("ke", o.ke);
    ov->number("omega_lower", o.omega_lower);
    ov->number("omega_upper", o.omega_upper);
    ov->number("theta_bound", o.theta_bound);
    ov->number("sigma_bound", o.sigma_bound);
    ov->number("epsilon", o.epsilon);
    ov->number("divergence_threshold", o.divergence_threshold);
    if (const json* x0 = ov->find("x0")) {
      if (!x0->is_array() || x0->size() != 2 || !(*x0)[0].is_number() || !(*x0)[1].is_number()) {
        ov->fail("overrides.x0", "expected an array of two numbers");
      }
      o.x0 = std::array<double, 2>{(*x0)[0].get<double>(), (*x0)[1].get<double>()};
    }
    ov->finish();
  }
  root.finish();
  cfg.tune.swarm.seed = cfg.seed;
  validated(root, [&] { cfg.validate(); });
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

// ---- CSV ----

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryHeader << '\n';
  const std::vector<double>* cols[] = {&traj.t,         &traj.r,         &traj.y,         &traj.u,
                                       &traj.e,         &traj.k_f,       &traj.omega_hat, &traj.theta_hat,
                                       &traj.sigma_hat, &traj.x1,        &traj.x2};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      if (c) os << ',';
      os << format_double((*cols[c])[i]);
    }
    os << '\n';
  }
}

namespace {
std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}
}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_output(path);
  write_trajectory_csv(out, traj);
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw Error("empty CSV");
  for (std::size_t start = 0;;) {
    const std::size_t comma = line.find(',', start);
    table.columns.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(table.columns.size());
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) throw Error("bad number on CSV line " + std::to_string(line_no));
      row.push_back(v);
      p = res.ptr;
      if (p == end) break;
      if (*p != ',') throw Error("bad separator on CSV line " + std::to_string(line_no));
      ++p;
    }
    if (row.size() != table.columns.size()) throw Error("wrong column count on CSV line " + std::to_string(line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_csv(in);
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
}

// ---- metrics ----

namespace {
constexpr double kTimeSlack = 1e-9;
}

double rms_error(const Trajectory& traj, double t_from) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.t[i] + kTimeSlack < t_from) continue;
    sum += traj.e[i] * traj.e[i];
    ++n;
  }
  return n ? std::sqrt(sum / static_cast<double>(n)) : 0.0;
}

double max_abs_u(const Trajectory& traj, double t_from) {
  double m = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.t[i] + kTimeSlack >= t_from) m = std::max(m, std::abs(traj.u[i]));
  }
  return m;
}

TrajectorySummary summarize(const Trajectory& traj) {
  TrajectorySummary s;
  s.rms_error = rms_error(traj);
  s.max_abs_u = max_abs_u(traj);
  for (double e : traj.e) s.max_abs_e = std::max(s.max_abs_e, std::abs(e));
  const double t_last = traj.size() ? traj.t.back() : 0.0;
  if (t_last + kTimeSlack >= 5.0) s.rms_error_after_5s = rms_error(traj, 5.0);
  if (t_last + kTimeSlack >= 1.0) s.max_abs_u_after_1s = max_abs_u(traj, 1.0);
  s.diverged = traj.diverged;
  s.t_fail = traj.t_fail;
  s.samples = traj.size();
  return s;
}

void write_tuning_result(const std::filesystem::path& path, const TuningResult& tuning) {
  const SwarmConfig& sw = tuning.swarm;
  ordered_json j;
  j["seed"] = sw.seed;
  j["config"] = {{"population", sw.population},
                 {"generations", sw.generations},
                 {"c1", sw.c1},
                 {"c2", sw.c2},
                 {"inertia", sw.inertia},
                 {"lambda", sw.lambda},
                 {"gamma1", sw.gamma1},
                 {"gamma2", sw.gamma2},
                 {"per_dimension_random", sw.per_dimension_random},
                 {"duration", tuning.duration}};
  j["best"] = tuning.result.best;
  j["best_value"] = tuning.result.best_value;
  ordered_json sets = ordered_json::object();
  const MFSet decoded = decode(tuning.result.best).sets;
  for (std::size_t k = 0; k < kLabelCount; ++k) {
    const auto& mf = decoded[k];
    sets[std::string(label_name(static_cast<Label>(k)))] = {mf.l, mf.c, mf.h};
  }
  j["output_sets"] = sets;
  j["history"] = tuning.result.history;
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<double>& history) {
  auto out = open_output(path);
  out << "generation,best_value\n";
  for (std::size_t g = 0; g < history.size(); ++g) out << g << ',' << format_double(history[g]) << '\n';
}

Particle load_tuned_particle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("tuner_params", "cannot open tuner parameter file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("tuner_params", path.string() + ": malformed JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("best") || !j["best"].is_array() || j["best"].size() != kParticleDim) {
    throw ConfigError("tuner_params", path.string() + ": expected \"best\" with 9 numbers");
  }
  Particle p;
  for (std::size_t k = 0; k < kParticleDim; ++k) {
    if (!j["best"][k].is_number()) throw ConfigError("tuner_params", path.string() + ": non-numeric entry in \"best\"");
    p[k] = j["best"][k].get<double>();
  }
  if (!within_bounds(p)) throw ConfigError("tuner_params", path.string() + ": parameters outside the search box");
  return p;
}

}  // namespace fuzzy_l1

namespace fuzzy_l1 {

// Case-1 tuning run: 20 particles x 20 generations, seed 7, 8 s rollouts,
// gamma1 = 1, gamma2 = 1e-6; best objective 109.308072.
const Particle& default_tuned_particle() {
  static const Particle p{8.0, 12.0, 3.0, 3.0, 10.0, 1.5, 4.0, 0.5, 1.5};
  return p;
}

}  // namespace fuzzy_l1
