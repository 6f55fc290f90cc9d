#include "qheun/error.hpp"

namespace qheun {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::QOutOfRange: return "QOutOfRange";
    case ErrorKind::ZeroScale: return "ZeroScale";
    case ErrorKind::NotQuasiSolvable: return "NotQuasiSolvable";
    case ErrorKind::BetaResonance: return "BetaResonance";
    case ErrorKind::ZeroFunction: return "ZeroFunction";
    case ErrorKind::NotARoot: return "NotARoot";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ReconstructionFailure: return "ReconstructionFailure";
    case ErrorKind::NoBalance: return "NoBalance";
    case ErrorKind::ExponentsNotSorted: return "ExponentsNotSorted";
    case ErrorKind::UnclassifiedRegime: return "UnclassifiedRegime";
    case ErrorKind::MatchingAmbiguous: return "MatchingAmbiguous";
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

}  // namespace qheun
