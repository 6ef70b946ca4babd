#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hetpredict {

enum class ErrorCode {
  Io,
  Config,
  MissingColumn,
  BadValue,
  DuplicateKey,
  MixedMachines,
  MissingLocal,
  NonPositiveScore,
  LengthMismatch,
  TooFewPoints,
  TooFewRuns,
  MixedTasks,
  TaskMismatch,
  NoFactors,
  ZeroActual,
  EmptyInput,
  MissingEstimate,
  MissingActual,
  MissingModel,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above; the CLI
// maps Config to exit status 2 and everything else to 3.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace hetpredict
