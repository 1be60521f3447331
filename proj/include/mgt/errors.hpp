#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mgt {

/// Failure categories raised by the library. Every thrown mgt::Error carries one.
enum class Errc {
  NonPositiveLength,
  TooFewCells,
  NonFiniteInput,
  NonPositiveCoefficient,
  GridMismatch,
  NegativeArgument,
  NonFiniteState,
  NonPositiveGamma,
  InvalidSpec,
  DegenerateRange,
  NonFiniteResult,
  NotDissipationDominated,
  GammaNotPositive,
  MissingLedger,
  InsufficientData,
  NonPositiveSeries,
  NonMonotoneMean,
  NonConstantGamma,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mgt
