#include "qheun/commands.hpp"

#include "qheun/roots.hpp"
#include "qheun/spectral.hpp"
#include "qheun/ultra.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>

namespace qheun {

namespace {

using Json = nlohmann::ordered_json;
constexpr int kSchemaVersion = 1;
constexpr unsigned kMaxBits = 2000;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Document {
  Json sections = Json::object();
  Table table;
  std::string notes;
};

std::string num(const Real& x) { return format_real(x); }

Json complex_json(const Complex& z) { return Json{{"re", num(z.re)}, {"im", num(z.im)}}; }

Json prediction_json(const AsymptoticRoot& a) {
  return Json{{"coefficient", num(a.coefficient)}, {"exponent", num(a.exponent)}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_table(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

struct Attempt {
  const RunConfig& cfg;
  unsigned bits;
  NumericContext ctx;
  Parameters params;
  QuasiDegree N;
};

Json model_section(const Attempt& a) {
  const Parameters& p = a.params;
  const Exponents e = exponents(p);
  return Json{{"h1", num(p.h1)},
              {"h2", num(p.h2)},
              {"l1", num(p.l1)},
              {"l2", num(p.l2)},
              {"alpha1", num(p.alpha1)},
              {"alpha2", num(p.alpha2)},
              {"beta", num(p.beta)},
              {"t1", num(p.t1)},
              {"t2", num(p.t2)},
              {"q", num(p.q)},
              {"N", a.N.N},
              {"lambda1", num(e.lambda1)},
              {"lambda2", num(e.lambda2)}};
}

Real config_real(const RunConfig& cfg, const std::string& key, const char* fallback) {
  auto it = cfg.values.find(key);
  return parse_real(it == cfg.values.end() ? std::string(fallback) : it->second);
}

std::vector<int> selected_ks(const Attempt& a) {
  if (a.cfg.k) return {*a.cfg.k};
  std::vector<int> ks(static_cast<std::size_t>(a.N.N) + 1);
  std::iota(ks.begin(), ks.end(), 1);
  return ks;
}

struct RootAnalysis {
  SpectralTable table;
  RootSet roots;
  Real reconstruction;
};

RootAnalysis analyse_roots(const Parameters& p, QuasiDegree N, const NumericContext& ctx) {
  RootAnalysis a{build_table(p, N, ctx), {}, {}};
  a.roots = aberth_roots(spectral_polynomial(a.table), ctx);
  if (!a.roots.converged) {
    throw Error(ErrorKind::NonConvergence, "aberth_roots: no convergence after " +
                                               std::to_string(a.roots.iterations) + " sweeps");
  }
  a.reconstruction = reconstruction_error(spectral_polynomial(a.table), a.roots);
  if (!(a.reconstruction < ctx.zero_tol)) {
    throw Error(ErrorKind::ReconstructionFailure,
                "the computed roots reproduce the spectral polynomial only to relative " +
                    a.reconstruction.str(6) + " (needs < zero_tol)");
  }
  return a;
}

std::vector<std::size_t> order_by_real_part(const std::vector<Complex>& z) {
  std::vector<std::size_t> idx(z.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
    if (z[a].re != z[b].re) return z[a].re < z[b].re;
    return z[a].im < z[b].im;
  });
  return idx;
}

Document run_spectrum(const Attempt& a) {
  const SpectralTable t = build_table(a.params, a.N, a.ctx);
  Document doc;
  doc.table.header = {"n", "power", "coefficient"};
  Json rows = Json::array();
  for (int n = 0; n <= t.N() + 1; ++n) {
    const EPolynomial& row = t.rows[static_cast<std::size_t>(n)];
    Json coeffs = Json::array();
    for (int j = 0; j <= row.degree(); ++j) {
      coeffs.push_back(num(row[static_cast<std::size_t>(j)]));
      doc.table.rows.push_back({std::to_string(n), std::to_string(j), num(row[static_cast<std::size_t>(j)])});
    }
    rows.push_back(Json{{"n", n}, {"coefficients", coeffs}});
  }
  doc.sections["spectral"] = Json{{"N", t.N()},
                                  {"lambda1", num(t.lambda1)},
                                  {"undivided_closing_row", t.undivided_closing_row},
                                  {"rows", rows}};
  return doc;
}

Document run_roots(const Attempt& a) {
  const RootAnalysis r = analyse_roots(a.params, a.N, a.ctx);
  const RealRootCondition cond = realroot_condition(a.params, a.N);

  Json interlacing{{"checked", false}};
  if (cond.any()) {
    const ThreeTermCoefficients m = lemma_mapping(r.table, a.ctx);
    if (m.admissible) {
      const InterlacingChain chain = interlaced_roots(r.table, a.ctx);
      interlacing = Json{{"checked", true}, {"strict", chain.strictly_interlaced()}};
    }
  }

  Document doc;
  doc.table.header = {"index", "re", "im", "real", "cluster", "condition"};
  Json list = Json::array();
  bool all_real = true;
  const auto order = order_by_real_part(r.roots.roots);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Complex& z = r.roots.roots[order[i]];
    const bool real = is_real_root(z, a.ctx);
    const bool cluster = r.roots.cluster_flags[order[i]];
    all_real = all_real && real;
    list.push_back(Json{{"index", i + 1}, {"re", num(z.re)}, {"im", num(z.im)}, {"real", real}, {"cluster", cluster}});
    doc.table.rows.push_back({std::to_string(i + 1), num(z.re), num(z.im), real ? "true" : "false",
                              cluster ? "true" : "false", cond.to_string()});
  }
  doc.sections["roots"] = Json{{"condition", cond.to_string()},
                               {"all_real", all_real},
                               {"reconstruction_error", num(r.reconstruction)},
                               {"iterations", r.roots.iterations},
                               {"interlacing", interlacing},
                               {"list", list}};
  return doc;
}

Document run_residual(const Attempt& a) {
  const RootAnalysis r = analyse_roots(a.params, a.N, a.ctx);
  Document doc;
  doc.table.header = {"root_index", "E", "n", "coefficient", "residual"};
  Json list = Json::array();
  const auto order = order_by_real_part(r.roots.roots);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Complex& z = r.roots.roots[order[i]];
    Json entry{{"index", i + 1}, {"E", complex_json(z)}};
    if (!is_real_root(z, a.ctx)) {
      entry["status"] = "complex";
      doc.notes += "root " + std::to_string(i + 1) + " is not real; no real eigenfunction is formed\n";
      list.push_back(entry);
      continue;
    }
    const QSeriesPoly f = solution_from_root(r.table, z.re, a.ctx);
    const Real res = residual(a.params, z.re, f);
    Json coeffs = Json::array();
    for (int n = 0; n <= a.N.N; ++n) {
      const Real c = f.coefficient(n);
      coeffs.push_back(num(c));
      doc.table.rows.push_back({std::to_string(i + 1), num(z.re), std::to_string(n), num(c), num(res)});
    }
    entry["status"] = "ok";
    entry["lambda1"] = num(f.lambda());
    entry["coefficients"] = coeffs;
    entry["residual"] = num(res);
    list.push_back(entry);
  }
  doc.sections["qop"] = Json{{"eigenfunctions", list}};
  return doc;
}

Json regime_json(const Regime& r) {
  Json witness = Json::array();
  for (const auto& w : r.witness) {
    witness.push_back(Json{{"expression", w.expression}, {"value", num(w.value)}, {"holds", w.holds}});
  }
  return Json{{"variant", to_string(r.variant)}, {"witness", witness}};
}

Document run_asymptotics(const Attempt& a) {
  const Regime regime = classify_regime(a.params, a.N);
  const auto eigen = predict_eigenvalues(a.params, a.N, regime);

  Document doc;
  doc.table.header = {"quantity", "k", "index", "coefficient", "exponent"};
  Json eig = Json::array();
  for (std::size_t i = 0; i < eigen.size(); ++i) {
    eig.push_back(prediction_json(eigen[i]));
    doc.table.rows.push_back(
        {"eigenvalue", std::to_string(i + 1), std::to_string(i + 1), num(eigen[i].coefficient), num(eigen[i].exponent)});
  }
  Json per_k = Json::array();
  for (int k : selected_ks(a)) {
    const auto ratios = predict_coeff_ratios(a.params, a.N, k, regime);
    const auto zeros = predict_zeros(a.params, a.N, k, regime);
    Json rj = Json::array();
    Json zj = Json::array();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      rj.push_back(prediction_json(ratios[i]));
      doc.table.rows.push_back({"coeff_ratio", std::to_string(k), std::to_string(i + 1), num(ratios[i].coefficient),
                                num(ratios[i].exponent)});
    }
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      zj.push_back(prediction_json(zeros[i]));
      doc.table.rows.push_back(
          {"zero", std::to_string(k), std::to_string(i + 1), num(zeros[i].coefficient), num(zeros[i].exponent)});
    }
    per_k.push_back(Json{{"k", k}, {"coeff_ratios", rj}, {"zeros", zj}});
  }
  doc.sections["ultra"] = Json{{"regime", regime_json(regime)}, {"eigenvalues", eig}, {"eigenfunctions", per_k}};
  return doc;
}

struct GridMeasurement {
  std::vector<Complex> eigen;
  // indexed like selected_ks
  std::vector<std::vector<Complex>> ratios;
  std::vector<std::vector<Complex>> zeros;
};

GridMeasurement measure_at(const Attempt& a, const Real& q, const std::vector<AsymptoticRoot>& eigen_pred,
                           const std::vector<int>& ks) {
  Parameters p = a.params;
  p.q = q;
  const RootAnalysis r = analyse_roots(p, a.N, a.ctx);
  GridMeasurement m;
  m.eigen = r.roots.roots;

  std::vector<Real> pv;
  for (const auto& e : eigen_pred) pv.push_back(predicted_value(e, q));
  const auto partner = match_by_magnitude(pv, m.eigen);
  for (int k : ks) {
    const Complex& E = m.eigen[partner[static_cast<std::size_t>(k - 1)]];
    if (!is_real_root(E, a.ctx)) {
      throw Error(ErrorKind::NotARoot, "E_" + std::to_string(k) + " at q = " + q.str(6) +
                                           " has a nonzero imaginary part; no real eigenfunction");
    }
    const QSeriesPoly f = solution_from_root(r.table, E.re, a.ctx);
    std::vector<Real> c;
    for (int n = 0; n <= a.N.N; ++n) c.push_back(f.coefficient(n));

    std::vector<Complex> ratios;
    for (int n = 1; n <= a.N.N; ++n) ratios.emplace_back(c[static_cast<std::size_t>(n)] / c[static_cast<std::size_t>(n - 1)]);
    m.ratios.push_back(std::move(ratios));

    std::vector<Complex> zeros;
    if (a.N.N > 0) {
      const RootSet z = aberth_roots(EPolynomial(c), a.ctx);
      if (!z.converged) throw Error(ErrorKind::NonConvergence, "aberth_roots: eigenfunction zeros did not converge");
      zeros = z.roots;
    }
    m.zeros.push_back(std::move(zeros));
  }
  return m;
}

Document run_sweep(const Attempt& a) {
  const Regime regime = classify_regime(a.params, a.N);
  const auto eigen_pred = predict_eigenvalues(a.params, a.N, regime);
  const std::vector<int> ks = selected_ks(a);
  const std::vector<Real> grid = geometric_grid(config_real(a.cfg, "sweep_start", "0.1"),
                                                config_real(a.cfg, "sweep_factor", "0.1"), a.cfg.sweep_count);
  const Real threshold = config_real(a.cfg, "threshold", "0.05");

  // grid points are independent; all threads share the scope's precision
  std::vector<std::future<GridMeasurement>> jobs;
  for (const Real& q : grid) {
    jobs.push_back(std::async(std::launch::async, [&a, &eigen_pred, &ks, q] { return measure_at(a, q, eigen_pred, ks); }));
  }
  std::vector<GridMeasurement> measured;
  for (auto& j : jobs) measured.push_back(j.get());

  auto grid_index = [&](const Real& q) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] == q) return i;
    }
    throw Error(ErrorKind::InvalidArgument, "q outside the sweep grid");
  };

  struct Report {
    std::string quantity;
    int k;
    std::vector<AsymptoticRoot> predicted;
    ConvergenceReport report;
  };
  std::vector<Report> reports;
  reports.push_back({"eigenvalue", 0, eigen_pred,
                     verify_equivalence(
                         eigen_pred, [&](const Real& q) { return measured[grid_index(q)].eigen; }, grid, threshold,
                         a.ctx, Matching::ByMagnitude)});
  for (std::size_t ki = 0; ki < ks.size() && a.N.N > 0; ++ki) {
    const int k = ks[ki];
    const auto ratios = predict_coeff_ratios(a.params, a.N, k, regime);
    reports.push_back({"coeff_ratio", k, ratios,
                       verify_equivalence(
                           ratios, [&](const Real& q) { return measured[grid_index(q)].ratios[ki]; }, grid,
                           threshold, a.ctx, Matching::ByIndex)});
    const auto zeros = predict_zeros(a.params, a.N, k, regime);
    reports.push_back({"zero", k, zeros,
                       verify_equivalence(
                           zeros, [&](const Real& q) { return measured[grid_index(q)].zeros[ki]; }, grid, threshold,
                           a.ctx, Matching::ByMagnitude)});
  }

  Document doc;
  doc.table.header = {"quantity",        "k",             "q",        "root_index", "measured_re", "measured_im",
                      "predicted_coeff", "predicted_exp", "ratio_re", "ratio_im",   "abs_err"};
  Json rj = Json::array();
  bool all_pass = true;
  for (const auto& r : reports) {
    Json roots = Json::array();
    for (std::size_t i = 0; i < r.predicted.size(); ++i) {
      Json ratios = Json::array();
      Json errors = Json::array();
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const Complex& z = r.report.measured[i][g];
        const Complex& ratio = r.report.ratios[i][g];
        ratios.push_back(complex_json(ratio));
        errors.push_back(num(r.report.errors[i][g]));
        doc.table.rows.push_back({r.quantity, r.k ? std::to_string(r.k) : "", num(grid[g]), std::to_string(i + 1),
                                  num(z.re), num(z.im), num(r.predicted[i].coefficient),
                                  num(r.predicted[i].exponent), num(ratio.re), num(ratio.im),
                                  num(r.report.errors[i][g])});
      }
      roots.push_back(Json{{"index", i + 1},
                           {"prediction", prediction_json(r.predicted[i])},
                           {"ratios", ratios},
                           {"errors", errors},
                           {"final_error", num(r.report.final_error[i])},
                           {"verdict", r.report.verdict[i] ? "pass" : "fail"}});
    }
    all_pass = all_pass && r.report.all_pass();
    Json entry{{"quantity", r.quantity}};
    if (r.k) entry["k"] = r.k;
    entry["roots"] = roots;
    entry["all_pass"] = r.report.all_pass();
    rj.push_back(entry);
  }
  Json q_json = Json::array();
  for (const Real& q : grid) q_json.push_back(num(q));
  doc.sections["ultra"] = Json{{"regime", regime_json(regime)},
                               {"q_grid", q_json},
                               {"threshold", num(threshold)},
                               {"all_pass", all_pass},
                               {"reports", rj}};
  if (!all_pass) doc.notes += "some ratios failed the monotone-approach criterion; see the report\n";
  return doc;
}

Document dispatch(const Attempt& a, Command c) {
  switch (c) {
    case Command::Spectrum:
      return run_spectrum(a);
    case Command::Roots:
      return run_roots(a);
    case Command::Asymptotics:
      return run_asymptotics(a);
    case Command::Residual:
      return run_residual(a);
    case Command::Sweep:
      return run_sweep(a);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown command");
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "spectrum") return Command::Spectrum;
  if (name == "roots") return Command::Roots;
  if (name == "asymptotics") return Command::Asymptotics;
  if (name == "residual") return Command::Residual;
  if (name == "sweep") return Command::Sweep;
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Spectrum:
      return "spectrum";
    case Command::Roots:
      return "roots";
    case Command::Asymptotics:
      return "asymptotics";
    case Command::Residual:
      return "residual";
    case Command::Sweep:
      return "sweep";
  }
  return "?";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::QOutOfRange:
    case ErrorKind::ZeroScale:
    case ErrorKind::NotQuasiSolvable:
    case ErrorKind::BetaResonance:
    case ErrorKind::MissingKey:
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
      return 1;
    case ErrorKind::UnclassifiedRegime:
      return 3;
    default:
      return 2;
  }
}

CommandOutcome run_command(const RunConfig& cfg, Command command) {
  CommandOutcome out;
  unsigned bits = cfg.numeric.precision_bits;
  bool retried = false;
  Document doc;
  for (;;) {
    try {
      PrecisionScope scope(bits);
      const Attempt attempt{cfg, bits, cfg.numeric_at(bits), cfg.reparsed_parameters(), cfg.degree};
      doc = dispatch(attempt, command);
      Json head{{"schema_version", kSchemaVersion},
                {"command", to_string(command)},
                {"precision_bits", bits},
                {"model", model_section(attempt)}};
      head.update(doc.sections);
      doc.sections = std::move(head);
      break;
    } catch (const Error& e) {
      const bool escalate = !retried && bits < kMaxBits &&
                            (e.kind() == ErrorKind::BracketFailure || e.kind() == ErrorKind::ReconstructionFailure);
      if (escalate) {
        out.diagnostics += to_string(command) + ": " + e.what() + "; retrying at " +
                           std::to_string(std::min(2 * bits, kMaxBits)) + " bits\n";
        bits = std::min(2 * bits, kMaxBits);
        retried = true;
        continue;
      }
      out.exit_code = exit_code_for(e.kind());
      out.diagnostics += to_string(command) + ": " + e.what() + "\n";
      return out;
    } catch (const std::exception& e) {
      out.exit_code = 2;
      out.diagnostics += to_string(command) + ": " + e.what() + "\n";
      return out;
    }
  }

  out.precision_bits = bits;
  out.diagnostics += doc.notes;
  out.document = cfg.format == OutputFormat::Table ? render_table(doc.table) : doc.sections.dump(2) + "\n";
  if (!cfg.output_path.empty()) {
    std::ofstream file(cfg.output_path, std::ios::binary);
    file << out.document;
    if (!file) {
      out.exit_code = 1;
      out.diagnostics += "cannot write " + cfg.output_path + "\n";
    }
  }
  return out;
}

}  // namespace qheun
