#pragma once

#include "qheun/numeric.hpp"

namespace qheun {

/// The ten real parameters of the q-Heun equation
///
///   (x - q^{h1+1/2} t1)(x - q^{h2+1/2} t2) g(x/q)
///     + q^{alpha1+alpha2} (x - q^{l1-1/2} t1)(x - q^{l2-1/2} t2) g(qx)
///     - {(q^{alpha1} + q^{alpha2}) x^2 + E x
///        + q^{(h1+h2+l1+l2+alpha1+alpha2)/2} (q^{beta/2} + q^{-beta/2}) t1 t2} g(x) = 0.
///
/// Valid values satisfy 0 < q < 1 and t1 t2 != 0 (see validate_parameters).
struct Parameters {
  Real h1{0};
  Real h2{0};
  Real l1{0};
  Real l2{0};
  Real alpha1{0};
  Real alpha2{0};
  Real beta{0};
  Real t1{1};
  Real t2{1};
  Real q{Real(1) / 2};

  /// q^a computed as exp(a ln q).
  Real qpow(const Real& a) const { return real_pow(q, a); }
};

/// Tolerances shared by every computation at a given working precision.
struct NumericContext {
  unsigned precision_bits = 256;
  /// Relative magnitude below which a computed quantity counts as zero.
  double zero_tol = 0x1p-128;
  /// Relative separation below which two roots are flagged as clustered.
  double gap_tol = 0x1p-64;
  /// Tolerance for recognising quantities such as -lambda1-alpha1 as integers.
  double integrality_tol = 1e-9;

  /// Defaults for a precision: zero_tol = 2^{-bits/2}, gap_tol = 2^{-bits/4}.
  static NumericContext for_precision(unsigned bits);

  /// Throws Error(InvalidArgument) unless every tolerance lies in (0,1) and
  /// 64 <= precision_bits <= 2000.
  void validate() const;
};

/// Local exponents at x = 0. lambda2 - lambda1 = beta.
struct Exponents {
  Real lambda1;
  Real lambda2;
};

/// Degree N of the polynomial factor of a polynomial-type solution.
struct QuasiDegree {
  int N = 0;

  friend bool operator==(QuasiDegree, QuasiDegree) = default;
};

/// Throws QOutOfRange when q is outside (0,1) and ZeroScale when t1 t2 = 0.
void validate_parameters(const Parameters& p);

Exponents exponents(const Parameters& p);

/// N = -lambda1 - alpha1 when it is a non-negative integer within
/// ctx.integrality_tol. Throws NotQuasiSolvable otherwise, and BetaResonance
/// when beta lies in {1, ..., N} within the same tolerance.
QuasiDegree quasi_degree(const Parameters& p, const NumericContext& ctx);

/// The recurrence is symmetric in alpha1 and alpha2, and lambda1 is too.
/// Swaps them when -lambda1 - alpha2 is a non-negative integer but
/// -lambda1 - alpha1 is not, so that downstream code can always use alpha1.
Parameters normalize_alpha(Parameters p, const NumericContext& ctx);

/// Distance from x to the nearest integer and that integer.
std::pair<Real, long> nearest_integer(const Real& x);

}  // namespace qheun
