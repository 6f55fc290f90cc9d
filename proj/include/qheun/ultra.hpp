#pragma once

#include "qheun/error.hpp"
#include "qheun/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qheun {

// ---------------------------------------------------------------------------
// Min-plus balance of an algebraic equation as q -> +0.
//
// The coefficient of x^j behaves like (-1)^{p_j} c_j q^{lambda_j}. Writing
// x = q^t, the dominant terms balance when
//
//   min_{j in P} (lambda_j + j t) = min_{j in N} (lambda_j + j t),
//
// P and N being the indices with positive and negative sign. The templates
// below work for any ordered field (double, Real, cpp_rational).
// ---------------------------------------------------------------------------

template <class T>
struct TropicalTerm {
  bool negative = false;
  T coefficient{1};
  /// std::nullopt marks an absent term (infinite exponent).
  std::optional<T> exponent;
};

template <class T>
struct BasicTropicalPolynomial {
  std::vector<TropicalTerm<T>> terms;  // index j <-> x^j

  int degree() const { return static_cast<int>(terms.size()) - 1; }
};

template <class T>
struct BasicUltraSolution {
  T t0;
  int k = 0;        // attaining index in P
  int k_prime = 0;  // attaining index in N
  /// The minimum is attained by some index other than k and k'.
  bool degenerate = false;
};

/// A leading behaviour x(q) ~ -coefficient * q^exponent.
template <class T>
struct BasicAsymptoticRoot {
  T coefficient;
  T exponent;
};

template <class T>
struct SignedBalance {
  BasicUltraSolution<T> solution;
  /// Balance of p(-x): the root is negative.
  bool negative_root = false;
};

namespace detail {

template <class T>
T magnitude(const T& x) {
  using std::abs;
  return abs(x);
}

}  // namespace detail

/// Every t0 balancing the positive and negative parts, ascending. Candidates
/// are the crossing exponents (lambda_{j'} - lambda_j) / (j - j') of all
/// (P, N) index pairs; two exponent values within tie_tol count as equal.
/// Throws NoBalance when P or N is empty.
template <class T>
std::vector<BasicUltraSolution<T>> ultra_solve(const BasicTropicalPolynomial<T>& tp, const T& tie_tol) {
  std::vector<int> pos;
  std::vector<int> neg;
  for (int j = 0; j <= tp.degree(); ++j) {
    const auto& term = tp.terms[static_cast<std::size_t>(j)];
    if (!term.exponent) continue;
    (term.negative ? neg : pos).push_back(j);
  }
  if (pos.empty() || neg.empty()) {
    throw Error(ErrorKind::NoBalance,
                "all present coefficients share one sign, so no positive root balances; negate x and retry");
  }
  auto lam = [&](int j) -> const T& { return *tp.terms[static_cast<std::size_t>(j)].exponent; };

  std::vector<T> candidates;
  for (int j : pos) {
    for (int jp : neg) candidates.push_back((lam(jp) - lam(j)) / T(j - jp));
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<BasicUltraSolution<T>> out;
  for (const T& t : candidates) {
    if (!out.empty() && detail::magnitude(T(t - out.back().t0)) <= tie_tol) continue;
    auto value = [&](int j) { return T(lam(j) + T(j) * t); };
    T min_pos = value(pos.front());
    for (int j : pos) min_pos = std::min(min_pos, value(j));
    T min_neg = value(neg.front());
    for (int j : neg) min_neg = std::min(min_neg, value(j));
    if (detail::magnitude(T(min_pos - min_neg)) > tie_tol) continue;

    const T floor = std::min(min_pos, min_neg);
    int k = -1;
    int kp = -1;
    int attaining = 0;
    for (int j = 0; j <= tp.degree(); ++j) {
      if (!tp.terms[static_cast<std::size_t>(j)].exponent) continue;
      if (detail::magnitude(T(value(j) - floor)) > tie_tol) continue;
      ++attaining;
      if (tp.terms[static_cast<std::size_t>(j)].negative) {
        if (kp < 0) kp = j;
      } else if (k < 0) {
        k = j;
      }
    }
    BasicUltraSolution<T> s;
    s.k = k;
    s.k_prime = kp;
    s.t0 = (lam(kp) - lam(k)) / T(k - kp);
    s.degenerate = attaining > 2;
    if (!out.empty() && detail::magnitude(T(s.t0 - out.back().t0)) <= tie_tol) continue;
    out.push_back(std::move(s));
  }
  return out;
}

/// Balances for positive roots (x = q^t) followed by those for negative roots
/// (x = -q^t, i.e. the balances of p(-x)). A side with no sign change
/// contributes nothing.
template <class T>
std::vector<SignedBalance<T>> ultra_solve_signed(const BasicTropicalPolynomial<T>& tp, const T& tie_tol) {
  std::vector<SignedBalance<T>> out;
  auto collect = [&](const BasicTropicalPolynomial<T>& poly, bool negative_root) {
    try {
      for (auto& s : ultra_solve(poly, tie_tol)) out.push_back({std::move(s), negative_root});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoBalance) throw;
    }
  };
  collect(tp, false);
  BasicTropicalPolynomial<T> mirrored = tp;
  for (std::size_t j = 1; j < mirrored.terms.size(); j += 2) {
    mirrored.terms[j].negative = !mirrored.terms[j].negative;
  }
  collect(mirrored, true);
  return out;
}

/// Leading ratios c_{M-j} / c_{M-j+1} ~ r_j q^{mu_j}, j = 1..M, read off the
/// signed leading terms. Every term must be present.
template <class T>
std::vector<std::pair<T, T>> consecutive_ratios(const BasicTropicalPolynomial<T>& tp) {
  const int M = tp.degree();
  std::vector<std::pair<T, T>> out;
  for (int j = 1; j <= M; ++j) {
    const auto& lower = tp.terms[static_cast<std::size_t>(M - j)];
    const auto& upper = tp.terms[static_cast<std::size_t>(M - j + 1)];
    if (!lower.exponent || !upper.exponent) {
      throw Error(ErrorKind::InvalidArgument, "consecutive ratios need every coefficient present");
    }
    T lo = lower.negative ? T(-lower.coefficient) : lower.coefficient;
    T hi = upper.negative ? T(-upper.coefficient) : upper.coefficient;
    out.emplace_back(T(lo / hi), T(*lower.exponent - *upper.exponent));
  }
  return out;
}

/// Roots of a degree-M equation whose consecutive coefficient ratios behave
/// like r_j q^{mu_j} with mu_1 < ... < mu_M: the k-th root ~ -r_k q^{mu_k}.
/// Throws ExponentsNotSorted when the exponents are not strictly increasing.
template <class T>
std::vector<BasicAsymptoticRoot<T>> asymptotic_roots(const std::vector<std::pair<T, T>>& ratios, int M) {
  if (static_cast<int>(ratios.size()) != M) {
    throw Error(ErrorKind::InvalidArgument, "expected one ratio per root");
  }
  for (std::size_t j = 0; j < ratios.size(); ++j) {
    if (ratios[j].first == 0) throw Error(ErrorKind::InvalidArgument, "ratio coefficients must be nonzero");
    if (j > 0 && !(ratios[j - 1].second < ratios[j].second)) {
      throw Error(ErrorKind::ExponentsNotSorted,
                  "ratio exponents must be strictly increasing (mu_" + std::to_string(j) + " >= mu_" +
                      std::to_string(j + 1) + "); no root prediction is possible");
    }
  }
  std::vector<BasicAsymptoticRoot<T>> out;
  for (const auto& [r, mu] : ratios) out.push_back({r, mu});
  return out;
}

using TropicalPolynomial = BasicTropicalPolynomial<Real>;
using UltraSolution = BasicUltraSolution<Real>;
using AsymptoticRoot = BasicAsymptoticRoot<Real>;

/// Leading coefficient (c_k / c_k')^{1/(k'-k)} of the root attached to a
/// balance, returned as an AsymptoticRoot (-r q^{t0}).
AsymptoticRoot balance_root(const TropicalPolynomial& tp, const SignedBalance<Real>& balance);

/// -r q^mu at a given q.
Real predicted_value(const AsymptoticRoot& a, const Real& q);

/// Fits v(q) ~ r q^mu through two samples (q1, v1), (q2, v2) of equal sign.
/// Returned as the pair (r, mu).
std::pair<Real, Real> fit_leading_term(const Real& q1, const Real& v1, const Real& q2, const Real& v2);

// ---------------------------------------------------------------------------
// Regimes of the q-Heun spectral problem and their leading-order predictions.
// ---------------------------------------------------------------------------

enum class RegimeVariant { Case1, Case2, Unclassified };

std::string to_string(RegimeVariant v);

struct Inequality {
  std::string expression;  // e.g. "1 + h2 - l2 - beta > 0"
  Real value;              // left-hand side as evaluated
  bool holds = false;
};

struct Regime {
  RegimeVariant variant = RegimeVariant::Unclassified;
  std::vector<Inequality> witness;
};

/// Case1: standing assumptions (t1, t2 > 0, beta < 1, alpha2 - alpha1 < 1,
/// h1 < h2, l1 < l2) plus 1 + h2 - l2 - beta > 0 and 2 + 2h2 - l1 - l2 - beta > 0.
/// Case2: standing assumptions plus 2N + 1 + h2 - l2 - beta < 0 and
/// 2N + l1 - l2 - beta < 0. Anything else is Unclassified.
Regime classify_regime(const Parameters& p, QuasiDegree N);

/// E_k for k = 1..N+1:
///   Case1: E_k ~ -t1 q^{-k + 3/2 + h1 - lambda1}
///   Case2: E_k ~ -t1 q^{k - 3/2 + lambda1 + l1 + alpha1 + alpha2}
/// Throws UnclassifiedRegime.
std::vector<AsymptoticRoot> predict_eigenvalues(const Parameters& p, QuasiDegree N, const Regime& r);

/// c_n(E_k) / c_{n-1}(E_k) for n = 1..N, each as -r q^mu. Throws
/// UnclassifiedRegime, and InvalidArgument unless 1 <= k <= N + 1.
std::vector<AsymptoticRoot> predict_coeff_ratios(const Parameters& p, QuasiDegree N, int k, const Regime& r);

/// The N zeros x_1..x_N of sum_n c_n(E_k) x^n.
std::vector<AsymptoticRoot> predict_zeros(const Parameters& p, QuasiDegree N, int k, const Regime& r);

// ---------------------------------------------------------------------------
// Numerical check of a(q) ~ b(q) along a decreasing q-grid.
// ---------------------------------------------------------------------------

enum class Matching {
  /// Pair sorted log-magnitudes at each q (one-to-one nearest matching).
  ByMagnitude,
  /// measured[i] belongs to predicted[i].
  ByIndex,
};

using Measurement = std::function<std::vector<Complex>(const Real& q)>;

struct ConvergenceReport {
  std::vector<Real> q_grid;
  /// Indexed [prediction][grid point].
  std::vector<std::vector<Complex>> measured;
  std::vector<std::vector<Complex>> ratios;
  std::vector<std::vector<Real>> errors;  // |ratio - 1|
  std::vector<bool> verdict;
  std::vector<Real> final_error;

  bool all_pass() const;
};

/// Pairs each prediction with a measured value at every grid point and
/// checks that |measured / predicted - 1| decreases strictly over the last
/// three points (values already below 2^{-bits/2} count as converged) and ends
/// below `threshold`. Throws MatchingAmbiguous when two predictions are within
/// gap_tol in log-magnitude at the smallest q.
ConvergenceReport verify_equivalence(const std::vector<AsymptoticRoot>& predicted, const Measurement& measure,
                                     const std::vector<Real>& q_grid, const Real& threshold,
                                     const NumericContext& ctx, Matching matching = Matching::ByMagnitude);

/// For each prediction, the index of its measured partner under sorted
/// log-magnitude matching. Sizes must agree.
std::vector<std::size_t> match_by_magnitude(const std::vector<Real>& predicted_values,
                                            const std::vector<Complex>& measured);

/// q_0, q_0 f, ..., q_0 f^{count-1}; validated to be a strictly decreasing
/// grid in (0,1) with count >= 3.
std::vector<Real> geometric_grid(const Real& start, const Real& factor, int count);

}  // namespace qheun
