#include "qheun/commands.hpp"
#include "qheun/error.hpp"
#include "qheun/roots.hpp"
#include "qheun/spectral.hpp"
#include "qheun/ultra.hpp"
#include "support/random_cases.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace qheun;
using Rational = boost::multiprecision::cpp_rational;
using Clock = std::chrono::steady_clock;

namespace {

constexpr unsigned kBits = 256;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const Real& x) { return x.str(6, std::ios::scientific); }

Parameters example_case1() {
  Parameters p;
  p.h1 = -5;
  p.h2 = Real("0.5");
  p.l1 = 0;
  p.l2 = 1;
  p.alpha1 = 0;
  p.alpha2 = Real("0.5");
  p.beta = 0;
  p.t1 = 1;
  p.t2 = 1;
  p.q = Real("0.1");
  return p;
}

Parameters example_case2() {
  Parameters p = example_case1();
  p.h1 = 0;
  p.l2 = 4;
  return p;
}

const char* kCase1Config =
    "h1 = -5\nh2 = 0.5\nl1 = 0\nl2 = 1\nalpha1 = 0\nalpha2 = 0.5\nbeta = 0\nt1 = {t}\nt2 = {t}\nq = 0.1\n";
const char* kCase2Config =
    "h1 = 0\nh2 = 0.5\nl1 = 0\nl2 = 4\nalpha1 = 0\nalpha2 = 0.5\nbeta = 0\nt1 = {t}\nt2 = {t}\nq = 0.1\n";

std::string with_scale(const std::string& tmpl, const std::string& t) {
  std::string out = tmpl;
  for (auto pos = out.find("{t}"); pos != std::string::npos; pos = out.find("{t}")) out.replace(pos, 3, t);
  return out;
}

// ---------------------------------------------------------------------------
// Criteria 1, 2, 3 and 9 share the random parameter sets.
// ---------------------------------------------------------------------------

struct RandomSuite {
  Outcome real_roots;
  Outcome interlacing;
  Outcome residual;
  Outcome agreement;
  double elapsed = 0;
  int cases = 0;
  Real worst_imag = 0;
  Real smallest_gap = 1;
  Real worst_residual = 0;
  Real worst_agreement = 0;
  int escalated = 0;
  unsigned max_bits = kBits;
};

// Strict interlacing can only be seen when the working precision resolves
// the gap between consecutive rows' roots, which can be far below 2^{-256}.
// Like the command line tool, retry at doubled precision on BracketFailure.
InterlacingChain chain_with_escalation(const Parameters& p, QuasiDegree N, unsigned& bits) {
  for (;;) {
    PrecisionScope scope(bits);
    const auto ctx = NumericContext::for_precision(bits);
    Parameters exact = p;
    for (Real* x : {&exact.h1, &exact.h2, &exact.l1, &exact.l2, &exact.alpha1, &exact.alpha2, &exact.beta, &exact.t1,
                    &exact.t2, &exact.q}) {
      *x = Real(x->str(0, std::ios::scientific));
    }
    try {
      return interlaced_roots(build_table(exact, N, ctx), ctx);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BracketFailure || bits >= 2000) throw;
      bits = std::min(2 * bits, 2000u);
    }
  }
}

RandomSuite run_random_suite() {
  PrecisionScope scope(kBits);
  const auto ctx = NumericContext::for_precision(kBits);
  const Real imag_bound = pow2(-128);
  const Real gap_bound("1e-20");
  const Real residual_bound("1e-30");
  const Real agree_bound("1e-20");

  RandomSuite s;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  using C = RealRootCondition;
  for (C::Case c : {C::i, C::ii, C::iii, C::iv}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto rc = testing::random_case(rng, c);
      const std::string label = "condition " + realroot_condition(rc.params, rc.degree).to_string() + " case " +
                                std::to_string(trial) + " (N = " + std::to_string(rc.degree.N) + ")";
      ++s.cases;
      try {
        if (quasi_degree(rc.params, ctx) != rc.degree) throw Error(ErrorKind::InvalidArgument, "degree drifted");
        if (!realroot_condition(rc.params, rc.degree).contains(c)) {
          throw Error(ErrorKind::InvalidArgument, "condition does not hold");
        }
        const SpectralTable t = build_table(rc.params, rc.degree, ctx);
        const RootSet a = aberth_roots(spectral_polynomial(t), ctx);
        if (!a.converged) s.real_roots.fail(label + ": aberth did not converge");
        const auto roots = sorted_roots(a);

        // 1: real and separated
        for (const auto& z : roots) {
          const Real im = abs(z.im) / abs(z);
          s.worst_imag = std::max(s.worst_imag, im);
          if (!(im < imag_bound)) s.real_roots.fail(label + ": |Im| / |E| = " + fmt(im));
        }
        for (std::size_t i = 0; i < roots.size(); ++i) {
          for (std::size_t j = i + 1; j < roots.size(); ++j) {
            const Real gap = abs(roots[i] - roots[j]) / std::max(abs(roots[i]), abs(roots[j]));
            s.smallest_gap = std::min(s.smallest_gap, gap);
            if (!(gap > gap_bound)) s.real_roots.fail(label + ": relative gap " + fmt(gap));
          }
        }

        // 2: interlacing of the whole chain
        unsigned bits = kBits;
        const InterlacingChain chain = chain_with_escalation(rc.params, rc.degree, bits);
        if (bits > kBits) ++s.escalated;
        s.max_bits = std::max(s.max_bits, bits);
        if (!chain.strictly_interlaced()) s.interlacing.fail(label + ": interlacing violated");
        std::vector<Real> top;
        for (const Real& x : chain.per_n_roots.back()) top.emplace_back(x.str(0, std::ios::scientific));

        // 9: both solvers agree
        if (top.size() != roots.size()) {
          s.agreement.fail(label + ": root counts differ");
        } else {
          for (std::size_t i = 0; i < top.size(); ++i) {
            const Real d = abs(roots[i] - Complex(top[i])) / abs(top[i]);
            s.worst_agreement = std::max(s.worst_agreement, d);
            if (!(d < agree_bound)) s.agreement.fail(label + ": solvers differ by " + fmt(d));
          }
        }

        // 3: every root gives an eigenfunction
        for (const auto& z : roots) {
          const Real r = residual(rc.params, z.re, solution_from_root(t, z.re, ctx));
          s.worst_residual = std::max(s.worst_residual, r);
          if (!(r < residual_bound)) s.residual.fail(label + ": residual " + fmt(r));
        }
      } catch (const std::exception& e) {
        const std::string why = label + ": " + e.what();
        s.real_roots.fail(why);
        s.interlacing.fail(why);
        s.residual.fail(why);
        s.agreement.fail(why);
      }
    }
  }
  s.elapsed = seconds_since(t0);
  if (s.elapsed >= 120) s.real_roots.fail("took " + std::to_string(s.elapsed) + " s");
  return s;
}

// The N = 0 closed form: x^{lambda1} with E = d_zero(lambda1).
Outcome closed_form_residual(Real& value) {
  PrecisionScope scope(kBits);
  const auto ctx = NumericContext::for_precision(kBits);
  Parameters p;
  p.h1 = 0;
  p.h2 = Real("0.5");
  p.l1 = Real("0.25");
  p.l2 = 2;
  p.alpha1 = Real("0.5");
  p.alpha2 = Real("0.25");
  p.beta = Real("0.5");
  p.t1 = Real("1.5");
  p.t2 = Real("0.75");
  p.q = Real("0.125");
  Outcome o;
  if (quasi_degree(p, ctx).N != 0) o.fail("closed-form parameters do not give N = 0");
  const Real lambda1 = exponents(p).lambda1;
  value = residual(p, coeff_triple(p, lambda1).d_zero, QSeriesPoly(lambda1, {Real(1)}));
  if (!(value <= pow2(-static_cast<int>(kBits) + 8))) o.fail("N = 0 residual " + fmt(value));
  return o;
}

// ---------------------------------------------------------------------------
// Criteria 4, 5 and 6: measured quantities along q = 1e-1 .. 1e-4.
// ---------------------------------------------------------------------------

struct Measured {
  std::vector<Complex> eigen;
  std::map<int, std::vector<Complex>> ratios;
  std::map<int, std::vector<Complex>> zeros;
};

Measured measure(Parameters p, int N, const Real& q, const std::vector<AsymptoticRoot>& eigen_pred,
                 const NumericContext& ctx) {
  p.q = q;
  const SpectralTable t = build_table(p, QuasiDegree{N}, ctx);
  const RootSet a = aberth_roots(spectral_polynomial(t), ctx);
  if (!a.converged) throw Error(ErrorKind::NonConvergence, "aberth did not converge");
  Measured m;
  m.eigen = a.roots;
  std::vector<Real> pv;
  for (const auto& e : eigen_pred) pv.push_back(predicted_value(e, q));
  const auto partner = match_by_magnitude(pv, a.roots);
  for (int k = 1; k <= N + 1; ++k) {
    const Complex& E = a.roots[partner[static_cast<std::size_t>(k - 1)]];
    const QSeriesPoly f = solution_from_root(t, E.re, ctx);
    std::vector<Real> c;
    for (int n = 0; n <= N; ++n) c.push_back(f.coefficient(n));
    for (int n = 1; n <= N; ++n) m.ratios[k].emplace_back(c[static_cast<std::size_t>(n)] / c[static_cast<std::size_t>(n - 1)]);
    m.zeros[k] = aberth_roots(EPolynomial(c), ctx).roots;
  }
  return m;
}

struct SweepResult {
  Outcome eigen;
  Outcome shapes;
  double elapsed = 0;
  std::string eigen_errors;
};

std::string describe(const ConvergenceReport& r) {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.final_error.size(); ++i) {
    if (i) os << ", ";
    os << r.final_error[i].str(3, std::ios::scientific);
  }
  return os.str();
}

SweepResult sweep_example(const Parameters& p, int N, const std::vector<AsymptoticRoot>& eigen_pred) {
  PrecisionScope scope(kBits);
  const auto ctx = NumericContext::for_precision(kBits);
  const auto grid = geometric_grid(Real("0.1"), Real("0.1"), 4);
  const Real threshold("0.05");
  SweepResult out;
  const auto t0 = Clock::now();
  try {
    std::map<std::string, Measured> cache;
    auto at = [&](const Real& q) -> const Measured& {
      const std::string key = q.str();
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, measure(p, N, q, eigen_pred, ctx)).first;
      return it->second;
    };

    const auto eig = verify_equivalence(eigen_pred, [&](const Real& q) { return at(q).eigen; }, grid, threshold, ctx);
    out.eigen_errors = describe(eig);
    if (!eig.all_pass()) out.eigen.fail("final errors " + describe(eig));

    const Regime regime = classify_regime(p, QuasiDegree{N});
    for (int k = 1; k <= N + 1; ++k) {
      const auto ratio_pred = predict_coeff_ratios(p, QuasiDegree{N}, k, regime);
      const auto rr = verify_equivalence(
          ratio_pred, [&](const Real& q) { return at(q).ratios.at(k); }, grid, threshold, ctx, Matching::ByIndex);
      if (!rr.all_pass()) out.shapes.fail("k = " + std::to_string(k) + " ratios: " + describe(rr));
      const auto zero_pred = predict_zeros(p, QuasiDegree{N}, k, regime);
      const auto zr = verify_equivalence(zero_pred, [&](const Real& q) { return at(q).zeros.at(k); }, grid, threshold, ctx);
      if (!zr.all_pass()) out.shapes.fail("k = " + std::to_string(k) + " zeros: " + describe(zr));
    }
  } catch (const std::exception& e) {
    out.eigen.fail(e.what());
    out.shapes.fail(e.what());
  }
  out.elapsed = seconds_since(t0);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 7: exact expansion of random factored polynomials.
// ---------------------------------------------------------------------------

// Laurent polynomial in q with rational exponents: exponent -> coefficient.
using QPoly = std::map<Rational, Rational>;

QPoly times(const QPoly& a, const QPoly& b) {
  QPoly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) out[ea + eb] += ca * cb;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

QPoly plus(QPoly a, const QPoly& b) {
  for (const auto& [e, c] : b) a[e] += c;
  for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
  return a;
}

Outcome factored_oracle(int& checked) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> den(1, 6);
  std::uniform_int_distribution<int> start_den(1, 3);
  std::uniform_int_distribution<int> gap(1, 4);
  Outcome o;
  for (int trial = 0; trial < 50; ++trial) {
    const int M = 1 + trial % 7;
    std::vector<Rational> r;
    std::vector<Rational> mu;
    Rational m(num(rng), start_den(rng));
    for (int j = 0; j < M; ++j) {
      int n = 0;
      while (n == 0) n = num(rng);
      r.emplace_back(n, den(rng));
      mu.push_back(m);
      m += gap(rng);
    }
    // coefficients of x^0..x^M of prod (x + r_j q^{mu_j}), each a Laurent polynomial in q
    std::vector<QPoly> poly{QPoly{{Rational(0), Rational(1)}}};
    for (int j = 0; j < M; ++j) {
      std::vector<QPoly> next(poly.size() + 1);
      const QPoly root{{mu[static_cast<std::size_t>(j)], r[static_cast<std::size_t>(j)]}};
      for (std::size_t d = 0; d < poly.size(); ++d) {
        next[d + 1] = plus(next[d + 1], poly[d]);
        next[d] = plus(next[d], times(poly[d], root));
      }
      poly = std::move(next);
    }
    BasicTropicalPolynomial<Rational> tp;
    for (const auto& c : poly) {
      TropicalTerm<Rational> term;
      const auto& [lead_exp, lead_coeff] = *c.begin();
      term.negative = lead_coeff < 0;
      term.coefficient = abs(lead_coeff);
      term.exponent = lead_exp;
      tp.terms.push_back(term);
    }
    const std::string label = "polynomial " + std::to_string(trial) + " (M = " + std::to_string(M) + ")";
    try {
      const auto roots = asymptotic_roots(consecutive_ratios(tp), M);
      for (int j = 0; j < M; ++j) {
        if (roots[static_cast<std::size_t>(j)].coefficient != r[static_cast<std::size_t>(j)] ||
            roots[static_cast<std::size_t>(j)].exponent != mu[static_cast<std::size_t>(j)]) {
          o.fail(label + ": root " + std::to_string(j + 1) + " not recovered");
        }
      }
      const auto balances = ultra_solve_signed(tp, Rational(0));
      if (balances.size() != static_cast<std::size_t>(M)) o.fail(label + ": wrong number of balances");
      for (int j = 1; j <= M; ++j) {
        int hits = 0;
        for (const auto& b : balances) {
          if (b.solution.t0 != mu[static_cast<std::size_t>(j - 1)]) continue;
          ++hits;
          const int lo = std::min(b.solution.k, b.solution.k_prime);
          const int hi = std::max(b.solution.k, b.solution.k_prime);
          if (lo != M - j || hi != M - j + 1 || b.solution.degenerate ||
              b.negative_root != (r[static_cast<std::size_t>(j - 1)] > 0)) {
            o.fail(label + ": wrong attaining pair for mu_" + std::to_string(j));
          }
        }
        if (hits != 1) o.fail(label + ": balance mu_" + std::to_string(j) + " found " + std::to_string(hits) + " times");
      }
    } catch (const std::exception& e) {
      o.fail(label + ": " + e.what());
    }
    ++checked;
  }
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 8: scaling t1, t2 by s.
// ---------------------------------------------------------------------------

std::vector<Real> sorted_real_roots(const Parameters& p, int N, const NumericContext& ctx) {
  const RootSet a = aberth_roots(spectral_polynomial(build_table(p, QuasiDegree{N}, ctx)), ctx);
  std::vector<Real> out;
  for (const auto& z : sorted_roots(a)) out.push_back(z.re);
  return out;
}

// Every ratio in a sweep document, in document order.
std::vector<Real> sweep_ratios(const std::string& config_text) {
  const CommandOutcome o = run_command(parse_config(config_text), Command::Sweep);
  if (o.exit_code != 0) throw std::runtime_error("sweep failed: " + o.diagnostics);
  const auto doc = nlohmann::json::parse(o.document);
  std::vector<Real> out;
  for (const auto& report : doc["ultra"]["reports"]) {
    for (const auto& root : report["roots"]) {
      for (const auto& ratio : root["ratios"]) {
        out.emplace_back(ratio["re"].get<std::string>());
        out.emplace_back(ratio["im"].get<std::string>());
      }
    }
  }
  return out;
}

Outcome scaling(Real& worst_root, Real& worst_ratio) {
  PrecisionScope scope(kBits);
  const auto ctx = NumericContext::for_precision(kBits);
  const Real bound("1e-20");
  Outcome o;
  worst_root = 0;
  worst_ratio = 0;

  std::vector<std::pair<Parameters, int>> sets{{example_case1(), 2}, {example_case2(), 1}};
  std::mt19937_64 rng(314);
  using C = RealRootCondition;
  for (C::Case c : {C::i, C::ii, C::iii, C::iv}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto rc = testing::random_case(rng, c);
      sets.emplace_back(rc.params, rc.degree.N);
    }
  }
  for (int s : {2, 10}) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const auto& [p, N] = sets[i];
      Parameters ps = p;
      ps.t1 *= s;
      ps.t2 *= s;
      const auto base = sorted_real_roots(p, N, ctx);
      const auto scaled = sorted_real_roots(ps, N, ctx);
      for (std::size_t j = 0; j < base.size(); ++j) {
        const Real d = abs(scaled[j] - s * base[j]) / abs(s * base[j]);
        worst_root = std::max(worst_root, d);
        if (!(d < bound)) o.fail("set " + std::to_string(i) + ", s = " + std::to_string(s) + ": root moved by " + fmt(d));
      }
    }
    for (const char* tmpl : {kCase1Config, kCase2Config}) {
      try {
        const auto base = sweep_ratios(with_scale(tmpl, "1"));
        const auto scaled = sweep_ratios(with_scale(tmpl, std::to_string(s)));
        if (base.size() != scaled.size()) o.fail("sweep shapes differ");
        for (std::size_t j = 0; j < std::min(base.size(), scaled.size()); ++j) {
          const Real d = abs(scaled[j] - base[j]);
          worst_ratio = std::max(worst_ratio, d);
          if (!(d < bound)) o.fail("s = " + std::to_string(s) + ": sweep ratio moved by " + fmt(d));
        }
      } catch (const std::exception& e) {
        o.fail(e.what());
      }
    }
  }
  return o;
}

void report(int id, const char* title, const Outcome& o, const std::string& summary, int& failures) {
  std::printf("%s criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id, title,
              o.pass ? summary.c_str() : o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

}  // namespace

int main() {
  int failures = 0;

  const RandomSuite suite = run_random_suite();
  Real closed_form;
  Outcome residual_outcome = suite.residual;
  const Outcome closed = closed_form_residual(closed_form);
  if (!closed.pass) residual_outcome.fail(closed.detail);
  {
    PrecisionScope scope(kBits);
    report(1, "roots of c_{N+1} are real and distinct", suite.real_roots,
           std::to_string(suite.cases) + " sets, max |Im|/|E| " + fmt(suite.worst_imag) + ", min gap " +
               fmt(suite.smallest_gap) + ", " + std::to_string(static_cast<int>(suite.elapsed)) + " s",
           failures);
    report(2, "strict interlacing of c_1 .. c_{N+1}", suite.interlacing,
           std::to_string(suite.cases) + " chains, " + std::to_string(suite.escalated) +
               " needed more than 256 bits (max " + std::to_string(suite.max_bits) + ")",
           failures);
    report(3, "eigenfunction residuals", residual_outcome,
           "max residual " + fmt(suite.worst_residual) + ", N = 0 closed form " + fmt(closed_form), failures);
  }

  {
    PrecisionScope scope(kBits);
    std::vector<AsymptoticRoot> case1_pred;
    for (int k = 1; k <= 3; ++k) case1_pred.push_back({Real(1), Real(-k) - Real("1.5")});
    const SweepResult c1 = sweep_example(example_case1(), 2, case1_pred);
    Outcome eig1 = c1.eigen;
    if (c1.elapsed >= 30) eig1.fail("took " + std::to_string(c1.elapsed) + " s");
    report(4, "Case1 eigenvalues E_k ~ -q^{-k-3/2}", eig1, "final errors " + c1.eigen_errors, failures);

    const std::vector<AsymptoticRoot> case2_pred{{Real(1), Real(-1)}, {Real(1), Real(0)}};
    const SweepResult c2 = sweep_example(example_case2(), 1, case2_pred);
    report(5, "Case2 eigenvalues E_1 ~ -q^{-1}, E_2 ~ -1", c2.eigen, "final errors " + c2.eigen_errors, failures);

    Outcome shapes = c1.shapes;
    if (!c2.shapes.pass) shapes.fail(c2.shapes.detail);
    report(6, "coefficient ratios and zeros for every k", shapes, "both example sets, all k", failures);
  }

  int polys = 0;
  const Outcome oracle = factored_oracle(polys);
  report(7, "exact recovery of factored polynomials", oracle, std::to_string(polys) + " polynomials", failures);

  Real worst_root;
  Real worst_ratio;
  {
    PrecisionScope scope(kBits);
    const Outcome scale = scaling(worst_root, worst_ratio);
    report(8, "scaling covariance in t1, t2", scale,
           "max root deviation " + fmt(worst_root) + ", max ratio deviation " + fmt(worst_ratio), failures);
    report(9, "interlaced and Aberth roots agree", suite.agreement, "max deviation " + fmt(suite.worst_agreement),
           failures);
  }

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
