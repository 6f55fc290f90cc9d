#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qheun {

enum class ErrorKind {
  // model
  QOutOfRange,
  ZeroScale,
  NotQuasiSolvable,
  BetaResonance,
  // qop / spectral
  ZeroFunction,
  NotARoot,
  // roots
  BracketFailure,
  NonConvergence,
  ReconstructionFailure,
  // ultra
  NoBalance,
  ExponentsNotSorted,
  UnclassifiedRegime,
  MatchingAmbiguous,
  // cli
  MissingKey,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace qheun
