#include "mgt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mgt {

using nlohmann::json;

namespace {

std::string with_line(const std::string& field, const std::string& reason, int line) {
  std::string s = field.empty() ? reason : field + ": " + reason;
  if (line > 0) s += " (line " + std::to_string(line) + ")";
  return s;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

class Reader {
 public:
  Reader(const std::string& text, std::string prefix) : text_(text), prefix_(std::move(prefix)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& reason) const {
    const std::string full = prefix_.empty() ? field : prefix_ + "." + field;
    throw ScenarioError(Errc::ValidationError, full, reason, locate(full));
  }

  // Line of the last key of a dotted path, found by walking the keys in document order.
  int locate(const std::string& path) const {
    std::size_t pos = 0;
    std::size_t start = 0;
    int line = 0;
    while (start <= path.size()) {
      const std::size_t dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      const std::size_t hit = text_.find("\"" + key + "\"", pos);
      if (hit == std::string::npos) return line;
      pos = hit + key.size() + 2;
      line = line_of_offset(text_, hit);
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return line;
  }

  const json& object(const json& parent, const std::string& key, const std::string& path) const {
    const json& j = parent.at(key);
    if (!j.is_object()) fail(path, "must be an object");
    return j;
  }

  void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) const {
    for (const auto& [k, v] : obj.items()) {
      if (!allowed.count(k)) fail(join(path, k), "unknown key");
    }
  }

  double number(const json& obj, const std::string& key, const std::string& path) const {
    const std::string field = join(path, key);
    if (!obj.contains(key)) fail(field, "is required");
    const json& j = obj.at(key);
    if (!j.is_number()) fail(field, "must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(field, "must be finite");
    return x;
  }

  double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) const {
    return obj.contains(key) ? number(obj, key, path) : fallback;
  }

  int integer(const json& obj, const std::string& key, const std::string& path) const {
    const double x = number(obj, key, path);
    if (x != std::floor(x) || std::abs(x) > 1e9) fail(join(path, key), "must be an integer");
    return static_cast<int>(x);
  }

  bool boolean_or(const json& obj, const std::string& key, const std::string& path, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) fail(join(path, key), "must be true or false");
    return obj.at(key).get<bool>();
  }

  std::vector<double> numbers(const json& obj, const std::string& key, const std::string& path) const {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const json& arr = obj.at(key);
    const std::string field = join(path, key);
    if (!arr.is_array()) fail(field, "must be an array of numbers");
    for (const auto& x : arr) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) fail(field, "must be an array of finite numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void positive(double x, const std::string& field) const {
    if (!(x > 0.0)) fail(field, "must be positive");
  }

 private:
  const std::string& text_;
  std::string prefix_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ScenarioError(Errc::ParseError, "", "malformed document: " + std::string(e.what()), line);
  }
}

GammaSpec parse_gamma(const Reader& r, const json& g) {
  r.only_keys(g, {"family", "params"}, "gamma");
  if (!g.contains("family") || !g.at("family").is_string()) r.fail("gamma.family", "must be a string");
  const std::string family = g.at("family").get<std::string>();
  json p = json::object();
  if (g.contains("params")) p = r.object(g, "params", "gamma.params");
  const std::string path = "gamma.params";

  if (family == "constant") {
    r.only_keys(p, {"value"}, path);
    const double c = r.number(p, "value", path);
    r.positive(c, path + ".value");
    return GammaSpec::constant(c);
  }
  if (family == "exp_decay") {
    r.only_keys(p, {"a", "b", "c"}, path);
    return GammaSpec::exp_decay(r.number(p, "a", path), r.number(p, "b", path), r.number(p, "c", path));
  }
  if (family == "rational") {
    r.only_keys(p, {"a", "b"}, path);
    return GammaSpec::rational(r.number(p, "a", path), r.number(p, "b", path));
  }
  if (family == "gaussian_bump") {
    r.only_keys(p, {"a", "b", "m", "s"}, path);
    return GammaSpec::gaussian_bump(r.number(p, "a", path), r.number(p, "b", path), r.number(p, "m", path),
                                    r.number(p, "s", path));
  }
  if (family == "cosine_bump") {
    r.fail("gamma.family", "cosine_bump is not supported (its sign is not controlled); use gaussian_bump");
  }
  r.fail("gamma.family", "unknown family '" + family + "'");
}

Scenario parse_scenario_object(const json& doc, const std::string& text, const std::string& prefix) {
  const Reader r(text, prefix);
  if (!doc.is_object()) r.fail("", "document must be an object");
  r.only_keys(doc, {"grid", "params", "gamma", "theta_star", "init", "time", "checks"}, "");
  for (const char* key : {"grid", "params", "gamma", "theta_star", "time"}) {
    if (!doc.contains(key)) r.fail(key, "is required");
  }

  Scenario s;
  const json& grid = r.object(doc, "grid", "grid");
  r.only_keys(grid, {"L", "N"}, "grid");
  s.length = r.number(grid, "L", "grid");
  r.positive(s.length, "grid.L");
  s.cells = r.integer(grid, "N", "grid");
  if (s.cells < kMinCells) r.fail("grid.N", "must be at least " + std::to_string(kMinCells));

  const json& params = r.object(doc, "params", "params");
  r.only_keys(params, {"tau", "alpha", "b", "D", "eps"}, "params");
  s.params.tau = r.number(params, "tau", "params");
  r.positive(s.params.tau, "params.tau");
  s.params.alpha = r.number(params, "alpha", "params");
  r.positive(s.params.alpha, "params.alpha");
  s.params.b = r.number(params, "b", "params");
  r.positive(s.params.b, "params.b");
  s.params.D = r.number(params, "D", "params");
  r.positive(s.params.D, "params.D");
  s.params.eps = r.number_or(params, "eps", "params", 0.0);
  if (s.params.eps < 0.0) r.fail("params.eps", "must be nonnegative");

  s.theta_star = r.number(doc, "theta_star", "");
  r.positive(s.theta_star, "theta_star");

  s.gamma = parse_gamma(r, r.object(doc, "gamma", "gamma"));
  try {
    s.gamma.validate(s.theta_star);
  } catch (const Error& e) {
    r.fail("gamma", e.what());
  }

  if (doc.contains("init")) {
    const json& init = r.object(doc, "init", "init");
    r.only_keys(init, {"u_modes", "v_modes", "w_modes", "theta_base", "theta_mode", "u_mean", "v_mean", "w_mean"},
                "init");
    s.init.u_modes = r.numbers(init, "u_modes", "init");
    s.init.v_modes = r.numbers(init, "v_modes", "init");
    s.init.w_modes = r.numbers(init, "w_modes", "init");
    s.init.theta_base = r.number_or(init, "theta_base", "init", s.init.theta_base);
    if (s.init.theta_base < 0.0) r.fail("init.theta_base", "must be nonnegative");
    if (init.contains("theta_mode")) {
      const json& tm = r.object(init, "theta_mode", "init.theta_mode");
      r.only_keys(tm, {"k", "amplitude"}, "init.theta_mode");
      s.init.theta_mode.k = tm.contains("k") ? r.integer(tm, "k", "init.theta_mode") : 1;
      if (s.init.theta_mode.k < 1) r.fail("init.theta_mode.k", "must be at least 1");
      s.init.theta_mode.amplitude = r.number_or(tm, "amplitude", "init.theta_mode", 0.0);
      if (std::abs(s.init.theta_mode.amplitude) > s.init.theta_base) {
        r.fail("init.theta_mode.amplitude", "must not exceed theta_base in magnitude");
      }
    }
    s.init.u_mean = r.number_or(init, "u_mean", "init", 0.0);
    s.init.v_mean = r.number_or(init, "v_mean", "init", 0.0);
    s.init.w_mean = r.number_or(init, "w_mean", "init", 0.0);
  }

  const json& time = r.object(doc, "time", "time");
  r.only_keys(time, {"t_end", "cfl_factor", "save_stride", "blowup_threshold"}, "time");
  s.time.t_end = r.number(time, "t_end", "time");
  r.positive(s.time.t_end, "time.t_end");
  s.time.cfl_factor = r.number_or(time, "cfl_factor", "time", 0.4);
  if (!(s.time.cfl_factor > 0.0 && s.time.cfl_factor <= 1.0)) r.fail("time.cfl_factor", "must lie in (0, 1]");
  s.time.save_stride = time.contains("save_stride") ? r.integer(time, "save_stride", "time") : 10;
  if (s.time.save_stride < 1) r.fail("time.save_stride", "must be a positive integer");
  s.time.blowup_threshold = r.number_or(time, "blowup_threshold", "time", 1e8);
  r.positive(s.time.blowup_threshold, "time.blowup_threshold");

  if (doc.contains("checks")) {
    const json& checks = r.object(doc, "checks", "checks");
    r.only_keys(checks, {"eta_override", "enable_selfmap", "enable_lyapunov"}, "checks");
    if (checks.contains("eta_override") && !checks.at("eta_override").is_null()) {
      const double eta = r.number(checks, "eta_override", "checks");
      r.positive(eta, "checks.eta_override");
      s.checks.eta_override = eta;
    }
    s.checks.enable_selfmap = r.boolean_or(checks, "enable_selfmap", "checks", true);
    s.checks.enable_lyapunov = r.boolean_or(checks, "enable_lyapunov", "checks", true);
  }
  return s;
}

}  // namespace

ScenarioError::ScenarioError(Errc code, std::string field, std::string reason, int line)
    : Error(code, with_line(field, reason, line)), field_(std::move(field)), reason_(std::move(reason)), line_(line) {}

Scenario parse_scenario(const std::string& text) { return parse_scenario_object(parse_json(text), text, ""); }

std::size_t SweepSpec::points() const {
  std::size_t n = 1;
  for (const auto& [k, v] : values) n *= v.size();
  return n;
}

SweepSpec parse_sweep(const std::string& text) {
  const json doc = parse_json(text);
  const Reader r(text, "");
  if (!doc.is_object()) r.fail("", "document must be an object");
  r.only_keys(doc, {"base", "sweep", "mode", "fit_window", "threads"}, "");
  if (!doc.contains("base")) r.fail("base", "is required");
  if (!doc.contains("sweep")) r.fail("sweep", "is required");

  SweepSpec spec;
  spec.base = parse_scenario_object(r.object(doc, "base", "base"), text, "base");

  const json& sweep = r.object(doc, "sweep", "sweep");
  r.only_keys(sweep, {"tau", "alpha", "b", "D", "eps"}, "sweep");
  std::size_t count = 1;
  for (const auto& [key, arr] : sweep.items()) {
    std::vector<double> vals = r.numbers(sweep, key, "sweep");
    if (vals.empty()) r.fail("sweep." + key, "must list at least one value");
    for (double v : vals) {
      if (key == "eps" ? v < 0.0 : !(v > 0.0)) {
        r.fail("sweep." + key, key == "eps" ? "values must be nonnegative" : "values must be positive");
      }
    }
    count *= vals.size();
    if (count > kMaxSweepPoints) r.fail("sweep", "more than " + std::to_string(kMaxSweepPoints) + " points");
    spec.values[key] = std::move(vals);
  }
  if (doc.contains("mode")) {
    spec.mode = r.integer(doc, "mode", "");
    if (spec.mode < 1) r.fail("mode", "must be at least 1");
  }
  if (doc.contains("fit_window")) {
    const auto w = r.numbers(doc, "fit_window", "");
    if (w.size() != 2 || !(w[0] >= 0.0) || !(w[1] > w[0])) r.fail("fit_window", "must be [lo, hi] with 0 <= lo < hi");
    spec.fit_window = std::pair{w[0], w[1]};
  }
  if (doc.contains("threads")) {
    spec.threads = r.integer(doc, "threads", "");
    if (spec.threads < 0) r.fail("threads", "must be nonnegative");
  }
  return spec;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(Errc::IoError, "", "cannot open '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mgt
