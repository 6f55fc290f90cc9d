#include "qheun/config.hpp"

#include "qheun/error.hpp"

#include <array>
#include <charconv>
#include <cstdlib>

namespace qheun {

namespace {

constexpr std::array<const char*, 10> kRequired{"h1",     "h2",   "l1", "l2", "alpha1",
                                                "alpha2", "beta", "t1", "t2", "q"};
constexpr std::array<const char*, 10> kOptional{"precision_bits", "N",        "k",       "sweep_start",
                                                "sweep_factor",   "sweep_count", "threshold", "zero_tol",
                                                "gap_tol",        "integrality_tol"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool known_key(const std::string& key) {
  for (const char* k : kRequired) {
    if (key == k) return true;
  }
  for (const char* k : kOptional) {
    if (key == k) return true;
  }
  return false;
}

std::string at_line(const RunConfig& cfg, const std::string& key) {
  auto it = cfg.lines.find(key);
  return it == cfg.lines.end() ? std::string("config") : "line " + std::to_string(it->second);
}

[[noreturn]] void rethrow_at(const Error& e, const std::string& where) {
  throw Error(e.kind(), where + ": " + e.message());
}

long parse_integer(const RunConfig& cfg, const std::string& key) {
  const std::string& text = cfg.values.at(key);
  long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError, at_line(cfg, key) + ": " + key + " must be an integer, got '" + text + "'");
  }
  return value;
}

double parse_double(const RunConfig& cfg, const std::string& key) {
  const std::string& text = cfg.values.at(key);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error(ErrorKind::ParseError, at_line(cfg, key) + ": " + key + " must be a number, got '" + text + "'");
  }
  return value;
}

Real parse_value(const RunConfig& cfg, const std::string& key) {
  try {
    return parse_real(cfg.values.at(key));
  } catch (const Error& e) {
    rethrow_at(e, at_line(cfg, key) + " (" + key + ")");
  }
}

Parameters read_parameters(const RunConfig& cfg) {
  Parameters p;
  p.h1 = parse_value(cfg, "h1");
  p.h2 = parse_value(cfg, "h2");
  p.l1 = parse_value(cfg, "l1");
  p.l2 = parse_value(cfg, "l2");
  p.alpha1 = parse_value(cfg, "alpha1");
  p.alpha2 = parse_value(cfg, "alpha2");
  p.beta = parse_value(cfg, "beta");
  p.t1 = parse_value(cfg, "t1");
  p.t2 = parse_value(cfg, "t2");
  p.q = parse_value(cfg, "q");
  return p;
}

}  // namespace

Parameters RunConfig::reparsed_parameters() const {
  return normalize_alpha(read_parameters(*this), numeric);
}

NumericContext RunConfig::numeric_at(unsigned bits) const {
  NumericContext ctx = NumericContext::for_precision(bits);
  if (values.count("zero_tol")) ctx.zero_tol = parse_double(*this, "zero_tol");
  if (values.count("gap_tol")) ctx.gap_tol = parse_double(*this, "gap_tol");
  if (values.count("integrality_tol")) ctx.integrality_tol = parse_double(*this, "integrality_tol");
  return ctx;
}

RunConfig parse_config(std::string_view text, std::optional<unsigned> precision_override) {
  RunConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, where + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw Error(ErrorKind::ParseError, where + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    if (!known_key(key)) throw Error(ErrorKind::ParseError, where + ": unknown key '" + key + "'");
    if (cfg.values.count(key)) {
      throw Error(ErrorKind::ParseError,
                  where + ": key '" + key + "' repeats line " + std::to_string(cfg.lines[key]));
    }
    cfg.values[key] = value;
    cfg.lines[key] = line_no;
  }

  for (const char* key : kRequired) {
    if (!cfg.values.count(key)) {
      throw Error(ErrorKind::MissingKey, std::string("required key '") + key + "' is absent");
    }
  }

  long bits = 256;
  if (cfg.values.count("precision_bits")) bits = parse_integer(cfg, "precision_bits");
  if (precision_override) bits = *precision_override;
  if (bits < 64 || bits > 2000) {
    throw Error(ErrorKind::InvalidArgument, at_line(cfg, "precision_bits") +
                                                ": precision_bits must lie in [64, 2000], got " +
                                                std::to_string(bits));
  }
  cfg.numeric = cfg.numeric_at(static_cast<unsigned>(bits));
  try {
    cfg.numeric.validate();
  } catch (const Error& e) {
    rethrow_at(e, "config");
  }

  PrecisionScope scope(static_cast<unsigned>(bits));
  Parameters p = read_parameters(cfg);
  try {
    validate_parameters(p);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::QOutOfRange) rethrow_at(e, at_line(cfg, "q"));
    rethrow_at(e, at_line(cfg, p.t1 == 0 ? "t1" : "t2"));
  }
  p = normalize_alpha(std::move(p), cfg.numeric);
  try {
    cfg.degree = quasi_degree(p, cfg.numeric);
  } catch (const Error& e) {
    rethrow_at(e, "parameters");
  }
  cfg.parameters = std::move(p);

  if (cfg.values.count("N")) {
    cfg.asserted_N = static_cast<int>(parse_integer(cfg, "N"));
    if (*cfg.asserted_N != cfg.degree.N) {
      throw Error(ErrorKind::InvalidArgument, at_line(cfg, "N") + ": N = " + std::to_string(*cfg.asserted_N) +
                                                  " but -lambda1 - alpha1 = " + std::to_string(cfg.degree.N));
    }
  }
  if (cfg.values.count("k")) {
    const long k = parse_integer(cfg, "k");
    if (k < 1 || k > cfg.degree.N + 1) {
      throw Error(ErrorKind::InvalidArgument, at_line(cfg, "k") + ": k must lie in 1.." +
                                                  std::to_string(cfg.degree.N + 1) + ", got " + std::to_string(k));
    }
    cfg.k = static_cast<int>(k);
  }

  cfg.sweep_start = cfg.values.count("sweep_start") ? parse_value(cfg, "sweep_start") : Real(1) / 10;
  cfg.sweep_factor = cfg.values.count("sweep_factor") ? parse_value(cfg, "sweep_factor") : Real(1) / 10;
  if (cfg.values.count("sweep_count")) cfg.sweep_count = static_cast<int>(parse_integer(cfg, "sweep_count"));
  if (!(cfg.sweep_start > 0 && cfg.sweep_start < 1)) {
    throw Error(ErrorKind::InvalidArgument, at_line(cfg, "sweep_start") + ": sweep_start must lie in (0,1)");
  }
  if (!(cfg.sweep_factor > 0 && cfg.sweep_factor < 1)) {
    throw Error(ErrorKind::InvalidArgument, at_line(cfg, "sweep_factor") + ": sweep_factor must lie in (0,1)");
  }
  cfg.threshold = cfg.values.count("threshold") ? parse_value(cfg, "threshold") : Real(1) / 20;
  if (!(cfg.threshold > 0)) {
    throw Error(ErrorKind::InvalidArgument, at_line(cfg, "threshold") + ": threshold must be positive");
  }
  if (cfg.sweep_count < 3) {
    throw Error(ErrorKind::InvalidArgument, at_line(cfg, "sweep_count") + ": sweep_count must be at least 3");
  }
  return cfg;
}

}  // namespace qheun
