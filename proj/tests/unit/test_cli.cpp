#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mgt/commands.hpp"

using namespace mgt;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kMinimal = R"({
  "grid": {"L": 1.0, "N": 16},
  "params": {"tau": 1.0, "alpha": 2.0, "b": 1.0, "D": 0.1},
  "gamma": {"family": "constant", "params": {"value": 1.0}},
  "theta_star": 1.0,
  "time": {"t_end": 0.5}
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

ScenarioError parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e;
  }
  FAIL("expected ScenarioError");
  return ScenarioError(Errc::ParseError, "", "", 0);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("mgt_test_" + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("minimal scenario picks up the defaults") {
    const Scenario s = parse_scenario(kMinimal);
    CHECK(s.time.cfl_factor == 0.4);
    CHECK(s.time.save_stride == 10);
    CHECK(s.params.eps == 0.0);
    CHECK(s.cells == 16);
    CHECK(s.gamma.is_constant());
    CHECK_FALSE(s.checks.eta_override);
    CHECK(s.checks.enable_lyapunov);
    CHECK(s.checks.enable_selfmap);
  }

  TEST_CASE("validation errors carry field and line") {
    const ScenarioError e = parse_error(with("\"tau\": 1.0", "\"tau\": -1"));
    CHECK(e.code() == Errc::ValidationError);
    CHECK(e.field() == "params.tau");
    CHECK(e.reason() == "must be positive");
    CHECK(e.line() == 3);

    const ScenarioError c = parse_error(with("\"constant\", \"params\": {\"value\": 1.0}", "\"cosine_bump\""));
    CHECK(c.code() == Errc::ValidationError);
    CHECK(c.field() == "gamma.family");

    const ScenarioError u = parse_error(with("\"theta_star\": 1.0", "\"theta_star\": 1.0, \"colour\": 2"));
    CHECK(u.code() == Errc::ValidationError);
    CHECK(u.field() == "colour");
    CHECK(u.line() == 5);

    const ScenarioError m = parse_error(with("\"theta_star\": 1.0,\n", ""));
    CHECK(m.field() == "theta_star");

    const ScenarioError g = parse_error(with("\"value\": 1.0", "\"value\": -1.0"));
    CHECK(g.code() == Errc::ValidationError);
    CHECK(g.field().rfind("gamma", 0) == 0);
  }

  TEST_CASE("syntax errors report a line") {
    const ScenarioError e = parse_error(with("\"D\": 0.1}", "\"D\": 0.1,,}"));
    CHECK(e.code() == Errc::ParseError);
    CHECK(e.line() == 3);
  }

  TEST_CASE("constants command") {
    std::ostringstream out, err;
    CHECK(cmd_constants(parse_scenario(kMinimal), out, err) == kExitOk);
    const json j = json::parse(out.str());
    CHECK(j.at("gamma_star").get<double>() == 0.5);
    CHECK(j.at("kappa").get<double>() > 0.0);
    // Round trip.
    CHECK(json::parse(j.dump()) == j);
    CHECK(json::parse(j.dump(2)) == j);

    std::ostringstream out2, err2;
    CHECK(cmd_constants(parse_scenario(with("\"alpha\": 2.0", "\"alpha\": 1.0")), out2, err2) == kExitNotDissipative);
    CHECK(err2.str().find("not dissipation-dominated: alpha*b <= tau") != std::string::npos);
    CHECK(out2.str().empty());
  }

  TEST_CASE("scenario echo parses back to the same scenario") {
    const Scenario s = parse_scenario(R"({
      "grid": {"L": 2.0, "N": 40},
      "params": {"tau": 0.5, "alpha": 1.5, "b": 2.0, "D": 0.2, "eps": 0.001},
      "gamma": {"family": "gaussian_bump", "params": {"a": 1.0, "b": 0.3, "m": 0.5, "s": 0.25}},
      "theta_star": 1.0,
      "init": {"u_modes": [0.01, 0.002], "w_modes": [0.0, 0.1], "theta_base": 0.5,
               "theta_mode": {"k": 2, "amplitude": 0.1}},
      "time": {"t_end": 3.0, "cfl_factor": 0.3, "save_stride": 7},
      "checks": {"eta_override": 0.1, "enable_selfmap": false}
    })");
    const json echo = to_json(s);
    const Scenario back = parse_scenario(echo.dump());
    CHECK(to_json(back) == echo);
    CHECK(back.gamma.family == GammaFamily::GaussianBump);
    CHECK(back.init.theta_mode.k == 2);
    CHECK(*back.checks.eta_override == 0.1);
    CHECK_FALSE(back.checks.enable_selfmap);
  }

  TEST_CASE("run writes three schema-stable files and is deterministic") {
    TempDir dir("run");
    std::ostringstream log;
    const Scenario zero = parse_scenario(kMinimal);
    REQUIRE(cmd_run(zero, dir.path.string(), log) == kExitOk);
    const std::string ts = slurp(dir.path / "timeseries.csv");
    CHECK(first_line(ts) ==
          "t,seminorm_wx2,seminorm_vxx2,seminorm_uxx2,energy_y,theta_min,theta_max,theta_mean,theta_x_linf,"
          "theta_xx_linf,theta_t_linf,mean_u,mean_v,mean_w,h_linf,h_x_l2,te_satisfied,two_sided_ok");
    CHECK(first_line(slurp(dir.path / "final_state.csv")) == "x,u,v,w,theta");
    const json summary = json::parse(slurp(dir.path / "summary.json"));
    CHECK(summary.at("status") == "Completed");
    CHECK(summary.contains("ledger"));
    CHECK(to_json(parse_scenario(summary.at("scenario").dump())) == summary.at("scenario"));

    std::istringstream rows(ts);
    std::string line;
    std::getline(rows, line);
    int n = 0;
    while (std::getline(rows, line)) {
      std::istringstream cells(line);
      std::string c;
      std::getline(cells, c, ',');
      for (int k = 0; k < 3; ++k) {
        std::getline(cells, c, ',');
        CHECK(std::stod(c) == 0.0);
      }
      ++n;
    }
    CHECK(n > 1);

    const Scenario wavy = parse_scenario(with("\"time\"", "\"init\": {\"u_modes\": [0.01, 0.003]},\n  \"time\""));
    REQUIRE(cmd_run(wavy, dir.path.string(), log) == kExitOk);
    const std::string a = slurp(dir.path / "timeseries.csv");
    const std::string af = slurp(dir.path / "final_state.csv");
    REQUIRE(cmd_run(wavy, dir.path.string(), log) == kExitOk);
    CHECK(slurp(dir.path / "timeseries.csv") == a);
    CHECK(slurp(dir.path / "final_state.csv") == af);
  }

  TEST_CASE("growing scenario blows up with exit 2") {
    TempDir dir("growth");
    std::ostringstream log;
    const Scenario s = parse_scenario(R"({
      "grid": {"L": 1.0, "N": 16},
      "params": {"tau": 2.0, "alpha": 1.0, "b": 1.0, "D": 0.1},
      "gamma": {"family": "constant", "params": {"value": 1.0}},
      "theta_star": 1.0,
      "init": {"u_modes": [0.01]},
      "time": {"t_end": 1000.0, "save_stride": 100}
    })");
    CHECK(cmd_run(s, dir.path.string(), log) == kExitBlowUp);
    const json summary = json::parse(slurp(dir.path / "summary.json"));
    CHECK(summary.at("status") == "BlowUp");
    CHECK(summary.contains("ledger_note"));
  }

  TEST_CASE("oracle table") {
    OracleRequest req;
    req.params = Params{1.0, 2.0, 1.0, 0.1, 0.0};
    req.k_max = 0;
    std::ostringstream empty, err;
    CHECK(cmd_oracle(req, empty, err) == kExitOk);
    CHECK(empty.str() == std::string(kOracleHeader) + "\n");

    req.k_max = 1;
    std::ostringstream one;
    CHECK(cmd_oracle(req, one, err) == kExitOk);
    std::istringstream in(one.str());
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    CHECK_FALSE(std::getline(in, extra));
    CHECK(row.rfind("1,", 0) == 0);
    CHECK(std::stod(row.substr(row.rfind(',') + 1)) < 0.0);

    std::ostringstream out5, err5;
    const Scenario s = parse_scenario(with("\"constant\", \"params\": {\"value\": 1.0}",
                                           "\"exp_decay\", \"params\": {\"a\": 1.0, \"b\": 0.5, \"c\": 1.0}"));
    CHECK(cmd_oracle(s, 3, true, out5, err5) == kExitNonConstantGamma);
  }

  TEST_CASE("sweep over alpha and b") {
    SweepSpec spec = parse_sweep(R"({
      "base": {
        "grid": {"L": 1.0, "N": 16},
        "params": {"tau": 1.0, "alpha": 1.0, "b": 1.0, "D": 0.1},
        "gamma": {"family": "constant", "params": {"value": 1.0}},
        "theta_star": 1.0,
        "init": {"u_modes": [0.01]},
        "time": {"t_end": 2.0, "save_stride": 20}
      },
      "sweep": {"b": [2.0, 0.5, 1.0], "alpha": [0.5, 1.0, 2.0]}
    })");
    CHECK(spec.points() == 9);
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 9);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].stable == (rows[i].params.alpha * rows[i].params.b > 1.0));
      if (i > 0) {
        const auto& p = rows[i - 1].params;
        const auto& q = rows[i].params;
        CHECK(std::tie(p.tau, p.alpha, p.b) < std::tie(q.tau, q.alpha, q.b));
      }
    }
    std::ostringstream a, b;
    write_sweep_csv(a, rows);
    write_sweep_csv(b, run_sweep(spec));
    CHECK(a.str() == b.str());
    CHECK(first_line(a.str()) == kSweepHeader);
  }

  TEST_CASE("sweep guard") {
    std::string text = R"({"base": )" + std::string(kMinimal) + R"(, "sweep": {"alpha": [)";
    for (int i = 0; i < 400; ++i) text += (i ? ",1" : "1");
    text += "], \"b\": [";
    for (int i = 0; i < 400; ++i) text += (i ? ",1" : "1");
    text += "]}}";
    CHECK_THROWS_AS(parse_sweep(text), ScenarioError);
  }

  TEST_CASE("exit codes follow run status") {
    CHECK(exit_code(RunStatus::Completed) == 0);
    CHECK(exit_code(RunStatus::BlowUp) == 2);
    CHECK(exit_code(RunStatus::NumericalFailure) == 3);
  }
}
