#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgt/errors.hpp"
#include "mgt/integrator.hpp"
#include "mgt/model.hpp"

namespace mgt {

// Parse and validation failures. line() is 1-based, 0 when unknown.
class ScenarioError : public Error {
 public:
  ScenarioError(Errc code, std::string field, std::string reason, int line);

  const std::string& field() const { return field_; }
  const std::string& reason() const { return reason_; }
  int line() const { return line_; }

 private:
  std::string field_;
  std::string reason_;
  int line_;
};

struct Checks {
  std::optional<double> eta_override;
  bool enable_selfmap = true;
  bool enable_lyapunov = true;
};

struct Scenario {
  double length = 1.0;
  int cells = 64;
  Params params;
  GammaSpec gamma;
  double theta_star = 1.0;
  InitSpec init;
  TimeControl time;
  Checks checks;
};

/// Unknown keys are rejected. Throws ScenarioError with ParseError or ValidationError.
Scenario parse_scenario(const std::string& text);

inline constexpr std::size_t kMaxSweepPoints = 100000;

struct SweepSpec {
  Scenario base;
  // Values per swept parameter; keys are a subset of tau, alpha, b, D, eps.
  std::map<std::string, std::vector<double>> values;
  int mode = 1;                              // mode whose rate is compared with the oracle
  std::optional<std::pair<double, double>> fit_window;  // default: second half of the run
  int threads = 0;                           // 0 picks the hardware concurrency

  std::size_t points() const;
};

SweepSpec parse_sweep(const std::string& text);

/// Text of a file. Throws ScenarioError(IoError).
std::string read_text_file(const std::string& path);

}  // namespace mgt
