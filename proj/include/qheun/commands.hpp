#pragma once

#include "qheun/config.hpp"
#include "qheun/error.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace qheun {

enum class Command { Spectrum, Roots, Asymptotics, Residual, Sweep };

std::optional<Command> parse_command(std::string_view name);
std::string to_string(Command c);

/// 1 for invalid input, 2 for computational failures, 3 for UnclassifiedRegime.
int exit_code_for(ErrorKind kind);

struct CommandOutcome {
  int exit_code = 0;
  /// The rendered JSON document or CSV table (empty on failure).
  std::string document;
  /// Human-readable notes and error messages for standard error.
  std::string diagnostics;
  /// Working precision of the successful attempt.
  unsigned precision_bits = 0;
};

/// Runs one command at cfg.numeric.precision_bits. A BracketFailure or
/// ReconstructionFailure triggers a single retry at twice the precision
/// (capped at 2000 bits). Errors are mapped to exit codes, never thrown. When
/// cfg.output_path is set the document is also written there.
CommandOutcome run_command(const RunConfig& cfg, Command command);

}  // namespace qheun
