#pragma once

#include "qheun/model.hpp"
#include "qheun/polynomial.hpp"
#include "qheun/qop.hpp"

#include <array>
#include <string>
#include <vector>

namespace qheun {

/// Coefficients of the three-term relation for row n of the spectral table:
///
///   divisor * c_n(E) = (slope * E + offset) * c_{n-1}(E) - back * c_{n-2}(E)
///
/// divisor = t1 t2 q^{h1+h2} (1 - q^n)(1 - q^{n-beta})
/// slope   = q^{n-1+lambda1}
/// offset  = q^{1/2}(q^{h1} t1 + q^{h2} t2) + (q^{l1} t1 + q^{l2} t2) q^{2(n-1+lambda1)+alpha1+alpha2-1/2}
/// back    = q (1 - q^{n-2+lambda1+alpha1})(1 - q^{n-2+lambda1+alpha2})
struct RecurrenceTerms {
  Real divisor;
  Real slope;
  Real offset;
  Real back;
};

RecurrenceTerms recurrence_terms(const Parameters& p, int n);

/// c_0(E), ..., c_{N+1}(E). rows[0] = 1 and deg rows[n] = n.
struct SpectralTable {
  Parameters params;
  QuasiDegree degree;
  Real lambda1;
  std::vector<EPolynomial> rows;
  /// True when beta = N + 1 (within integrality_tol) and the closing row was
  /// formed without the vanishing divisor.
  bool undivided_closing_row = false;

  int N() const { return degree.N; }
};

/// Runs the recurrence for n = 1..N and forms the closing row n = N + 1.
/// Throws BetaResonance when a divisor (1 - q^{n-beta}), 1 <= n <= N, vanishes.
SpectralTable build_table(const Parameters& p, QuasiDegree N, const NumericContext& ctx);

/// rows[N+1], whose roots are exactly the E admitting a polynomial-type solution.
const EPolynomial& spectral_polynomial(const SpectralTable& t);

/// The four sufficient conditions for all roots of c_{N+1} to be real and distinct:
///   (i)   t1 t2 > 0, alpha2 - alpha1 < 1, beta < 1
///   (ii)  t1 t2 > 0, alpha2 - alpha1 > N, beta > N
///   (iii) t1 t2 < 0, alpha2 - alpha1 > N, beta < 1
///   (iv)  t1 t2 < 0, alpha2 - alpha1 < 1, beta > N
/// Conditions can overlap (N = 0 with 0 < beta < 1 satisfies (i) and (ii));
/// every condition whose inequalities hold is reported.
struct RealRootCondition {
  enum Case { i = 0, ii = 1, iii = 2, iv = 3 };

  std::array<bool, 4> satisfied{};

  bool contains(Case c) const { return satisfied[c]; }
  bool any() const { return satisfied[0] || satisfied[1] || satisfied[2] || satisfied[3]; }
  /// e.g. "{i, ii}"
  std::string to_string() const;
};

RealRootCondition realroot_condition(const Parameters& p, QuasiDegree N);

/// x^{lambda1} sum_{n=0}^N c_n(E0) x^n with c_0 = 1. Throws NotARoot unless
/// |c_{N+1}(E0)| < ctx.zero_tol * sum_j |a_j| |E0|^j.
QSeriesPoly solution_from_root(const SpectralTable& t, const Real& E0, const NumericContext& ctx);

}  // namespace qheun
