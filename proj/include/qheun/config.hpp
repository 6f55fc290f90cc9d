#pragma once

#include "qheun/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace qheun {

enum class OutputFormat { Object, Table };

/// Everything needed to run one command. Real-valued entries are parsed at
/// the configured precision; `values` keeps the original decimal text so the
/// parameters can be rebuilt at a higher precision.
struct RunConfig {
  Parameters parameters;
  NumericContext numeric;
  QuasiDegree degree;
  /// Value of the optional `N` key (checked against the computed degree).
  std::optional<int> asserted_N;
  std::optional<int> k;
  Real sweep_start;
  Real sweep_factor;
  int sweep_count = 4;
  /// Final |ratio - 1| a sweep must reach at the smallest q.
  Real threshold;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::Object;

  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;

  /// Parameters re-read from `values` at the current default precision and
  /// normalised like the original.
  Parameters reparsed_parameters() const;
  /// Tolerances for `bits`: explicitly configured ones are kept, the rest
  /// follow NumericContext::for_precision.
  NumericContext numeric_at(unsigned bits) const;
};

/// Parses `key = value` lines (blank lines and `#` comments ignored).
///
/// Required: h1 h2 l1 l2 alpha1 alpha2 beta t1 t2 q.
/// Optional (default): precision_bits (256), N, k, sweep_start (0.1),
/// sweep_factor (0.1), sweep_count (4), threshold (0.05), zero_tol (2^{-bits/2}),
/// gap_tol (2^{-bits/4}), integrality_tol (1e-9).
///
/// `precision_override` replaces precision_bits. Errors: MissingKey,
/// ParseError (malformed line, unknown or repeated key, bad number) and the
/// model validation errors, all prefixed with the offending line.
RunConfig parse_config(std::string_view text, std::optional<unsigned> precision_override = std::nullopt);

}  // namespace qheun
