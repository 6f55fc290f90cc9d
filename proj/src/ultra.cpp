#include "qheun/ultra.hpp"

#include <numeric>
#include <sstream>

namespace qheun {

AsymptoticRoot balance_root(const TropicalPolynomial& tp, const SignedBalance<Real>& balance) {
  const auto& s = balance.solution;
  const Real& ck = tp.terms.at(static_cast<std::size_t>(s.k)).coefficient;
  const Real& ckp = tp.terms.at(static_cast<std::size_t>(s.k_prime)).coefficient;
  const Real magnitude = real_pow(ck / ckp, Real(1) / Real(s.k_prime - s.k));
  // x ~ +C q^t0 for a positive balance, -C q^t0 for a balance of p(-x)
  return {balance.negative_root ? magnitude : Real(-magnitude), s.t0};
}

Real predicted_value(const AsymptoticRoot& a, const Real& q) { return -a.coefficient * real_pow(q, a.exponent); }

std::pair<Real, Real> fit_leading_term(const Real& q1, const Real& v1, const Real& q2, const Real& v2) {
  if (v1 == 0 || v2 == 0 || (v1 > 0) != (v2 > 0)) {
    throw Error(ErrorKind::InvalidArgument, "leading-term fit needs two nonzero samples of equal sign");
  }
  if (q1 == q2) throw Error(ErrorKind::InvalidArgument, "leading-term fit needs two distinct q values");
  const Real mu = log(v1 / v2) / log(q1 / q2);
  return {v1 / real_pow(q1, mu), mu};
}

std::string to_string(RegimeVariant v) {
  switch (v) {
    case RegimeVariant::Case1:
      return "Case1";
    case RegimeVariant::Case2:
      return "Case2";
    case RegimeVariant::Unclassified:
      return "Unclassified";
  }
  return "?";
}

Regime classify_regime(const Parameters& p, QuasiDegree N) {
  Regime r;
  auto positive = [&](std::string expr, Real value) {
    const bool holds = value > 0;
    r.witness.push_back({std::move(expr), std::move(value), holds});
    return holds;
  };
  auto negative = [&](std::string expr, Real value) {
    const bool holds = value < 0;
    r.witness.push_back({std::move(expr), std::move(value), holds});
    return holds;
  };
  const Real n(N.N);

  bool standing = true;
  standing &= positive("t1 > 0", p.t1);
  standing &= positive("t2 > 0", p.t2);
  standing &= negative("beta - 1 < 0", p.beta - 1);
  standing &= negative("alpha2 - alpha1 - 1 < 0", p.alpha2 - p.alpha1 - 1);
  standing &= negative("h1 - h2 < 0", p.h1 - p.h2);
  standing &= negative("l1 - l2 < 0", p.l1 - p.l2);

  const bool case1a = positive("1 + h2 - l2 - beta > 0", 1 + p.h2 - p.l2 - p.beta);
  const bool case1b = positive("2 + 2h2 - l1 - l2 - beta > 0", 2 + 2 * p.h2 - p.l1 - p.l2 - p.beta);
  const bool case2a = negative("2N + 1 + h2 - l2 - beta < 0", 2 * n + 1 + p.h2 - p.l2 - p.beta);
  const bool case2b = negative("2N + l1 - l2 - beta < 0", 2 * n + p.l1 - p.l2 - p.beta);

  if (standing && case1a && case1b) {
    r.variant = RegimeVariant::Case1;
  } else if (standing && case2a && case2b) {
    r.variant = RegimeVariant::Case2;
  }
  return r;
}

namespace {

void require_classified(const Regime& r, const char* what) {
  if (r.variant != RegimeVariant::Unclassified) return;
  std::string failed;
  for (const auto& w : r.witness) {
    if (w.holds) continue;
    if (!failed.empty()) failed += "; ";
    failed += w.expression;
  }
  throw Error(ErrorKind::UnclassifiedRegime,
              std::string(what) +
                  ": parameters lie outside both regimes with known leading asymptotics (failed: " + failed +
                  "); no prediction is made");
}

void require_k(int k, QuasiDegree N) {
  if (k < 1 || k > N.N + 1) {
    throw Error(ErrorKind::InvalidArgument,
                "eigenvalue index k = " + std::to_string(k) + " outside 1.." + std::to_string(N.N + 1));
  }
}

}  // namespace

std::vector<AsymptoticRoot> predict_eigenvalues(const Parameters& p, QuasiDegree N, const Regime& r) {
  require_classified(r, "predict_eigenvalues");
  const Real lambda1 = exponents(p).lambda1;
  const Real three_halves = Real(3) / 2;
  std::vector<AsymptoticRoot> out;
  for (int k = 1; k <= N.N + 1; ++k) {
    if (r.variant == RegimeVariant::Case1) {
      out.push_back({p.t1, -k + three_halves + p.h1 - lambda1});
    } else {
      out.push_back({p.t1, k - three_halves + lambda1 + p.l1 + p.alpha1 + p.alpha2});
    }
  }
  return out;
}

std::vector<AsymptoticRoot> predict_coeff_ratios(const Parameters& p, QuasiDegree N, int k, const Regime& r) {
  require_classified(r, "predict_coeff_ratios");
  require_k(k, N);
  const Real half = Real(1) / 2;
  std::vector<AsymptoticRoot> out;
  for (int n = 1; n <= N.N; ++n) {
    if (r.variant == RegimeVariant::Case1) {
      if (n <= k - 1) {
        out.push_back({1 / p.t2, n - k + half - p.h2});
      } else {
        out.push_back({-1 / p.t1, 2 * n + half + p.h2 - p.l1 - p.l2 - p.beta});
      }
    } else {
      if (n <= k - 1) {
        out.push_back({-1 / p.t2, 2 * n - half - p.l2 - p.beta});
      } else {
        out.push_back({1 / p.t1, n - k + half - p.l1});
      }
    }
  }
  return out;
}

std::vector<AsymptoticRoot> predict_zeros(const Parameters& p, QuasiDegree N, int k, const Regime& r) {
  require_classified(r, "predict_zeros");
  require_k(k, N);
  const Real half = Real(1) / 2;
  std::vector<AsymptoticRoot> out;
  for (int j = 1; j <= N.N; ++j) {
    if (r.variant == RegimeVariant::Case1) {
      if (j < k) {
        out.push_back({-p.t2, j - half + p.h2});
      } else {
        out.push_back({p.t1, -2 * j - half - p.h2 + p.l1 + p.l2 + p.beta});
      }
    } else {
      if (j < k) {
        out.push_back({p.t2, -2 * j + half + p.l2 + p.beta});
      } else {
        out.push_back({-p.t1, k - j - half + p.l1});
      }
    }
  }
  return out;
}

bool ConvergenceReport::all_pass() const {
  return std::all_of(verdict.begin(), verdict.end(), [](bool v) { return v; });
}

std::vector<std::size_t> match_by_magnitude(const std::vector<Real>& predicted_values,
                                            const std::vector<Complex>& measured) {
  if (predicted_values.size() != measured.size()) {
    throw Error(ErrorKind::InvalidArgument, "matching needs as many measured values (" +
                                                std::to_string(measured.size()) + ") as predictions (" +
                                                std::to_string(predicted_values.size()) + ")");
  }
  std::vector<Real> plog;
  std::vector<Real> mlog;
  for (const auto& v : predicted_values) plog.push_back(log(abs(v)));
  for (const auto& z : measured) mlog.push_back(log_abs(z));

  std::vector<std::size_t> pi(plog.size());
  std::vector<std::size_t> mi(mlog.size());
  std::iota(pi.begin(), pi.end(), 0);
  std::iota(mi.begin(), mi.end(), 0);
  std::stable_sort(pi.begin(), pi.end(), [&](auto a, auto b) { return plog[a] < plog[b]; });
  std::stable_sort(mi.begin(), mi.end(), [&](auto a, auto b) { return mlog[a] < mlog[b]; });

  std::vector<std::size_t> out(plog.size());
  for (std::size_t i = 0; i < pi.size(); ++i) out[pi[i]] = mi[i];
  return out;
}

std::vector<Real> geometric_grid(const Real& start, const Real& factor, int count) {
  if (count < 3) throw Error(ErrorKind::InvalidArgument, "a q-grid needs at least 3 points");
  if (!(start > 0 && start < 1)) throw Error(ErrorKind::InvalidArgument, "grid start must lie in (0,1)");
  if (!(factor > 0 && factor < 1)) throw Error(ErrorKind::InvalidArgument, "grid factor must lie in (0,1)");
  std::vector<Real> out;
  Real q = start;
  for (int i = 0; i < count; ++i) {
    out.push_back(q);
    q *= factor;
  }
  return out;
}

ConvergenceReport verify_equivalence(const std::vector<AsymptoticRoot>& predicted, const Measurement& measure,
                                     const std::vector<Real>& q_grid, const Real& threshold,
                                     const NumericContext& ctx, Matching matching) {
  if (q_grid.size() < 3) throw Error(ErrorKind::InvalidArgument, "verify_equivalence needs at least 3 grid points");
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    if (!(q_grid[i] > 0 && q_grid[i] < 1) || (i > 0 && !(q_grid[i] < q_grid[i - 1]))) {
      throw Error(ErrorKind::InvalidArgument, "q-grid must be strictly decreasing inside (0,1)");
    }
  }

  if (matching == Matching::ByMagnitude && predicted.size() > 1) {
    std::vector<Real> logs;
    for (const auto& a : predicted) logs.push_back(log(abs(predicted_value(a, q_grid.back()))));
    std::sort(logs.begin(), logs.end());
    for (std::size_t i = 1; i < logs.size(); ++i) {
      if (logs[i] - logs[i - 1] < ctx.gap_tol) {
        std::ostringstream msg;
        msg << "two predictions share the log-magnitude " << logs[i].str(10) << " at q = " << q_grid.back().str(6)
            << "; matching by magnitude is unsound";
        throw Error(ErrorKind::MatchingAmbiguous, msg.str());
      }
    }
  }

  ConvergenceReport rep;
  rep.q_grid = q_grid;
  const std::size_t m = predicted.size();
  rep.measured.assign(m, {});
  rep.ratios.assign(m, {});
  rep.errors.assign(m, {});

  for (const Real& q : q_grid) {
    const std::vector<Complex> values = measure(q);
    std::vector<Real> pv;
    for (const auto& a : predicted) pv.push_back(predicted_value(a, q));
    std::vector<std::size_t> partner(m);
    if (matching == Matching::ByMagnitude) {
      partner = match_by_magnitude(pv, values);
    } else {
      if (values.size() != m) {
        throw Error(ErrorKind::InvalidArgument, "measurement returned " + std::to_string(values.size()) +
                                                    " values for " + std::to_string(m) + " predictions");
      }
      std::iota(partner.begin(), partner.end(), 0);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const Complex& z = values[partner[i]];
      Complex ratio = z / Complex(pv[i]);
      rep.measured[i].push_back(z);
      rep.errors[i].push_back(abs(ratio - Complex(Real(1))));
      rep.ratios[i].push_back(std::move(ratio));
    }
  }

  const Real floor(ctx.zero_tol);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& e = rep.errors[i];
    const std::size_t n = e.size();
    bool decreasing = true;
    for (std::size_t j = n - 2; j < n; ++j) {
      if (!(e[j] < e[j - 1] || e[j] <= floor)) decreasing = false;
    }
    rep.final_error.push_back(e.back());
    rep.verdict.push_back(decreasing && e.back() < threshold);
  }
  return rep;
}

}  // namespace qheun
