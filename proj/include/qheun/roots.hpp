#pragma once

#include "qheun/polynomial.hpp"
#include "qheun/spectral.hpp"

#include <vector>

namespace qheun {

/// The spectral recurrence written in the normal form
///
///   d_n c~_n(E) = (p_n E + q_n) c~_{n-1}(E) - d'_n c~_{n-2}(E),   n = 1..N+1,
///
/// where c~_n = row_sign[n] * c_n. When the table's divisors are negative the
/// rows are rescaled by (-1)^n, which flips the signs of d_n and d'_n but
/// leaves the roots unchanged. The closing row may have d_{N+1} of any sign or
/// zero (final_row_unit: the row is formed without division).
///
/// Vector index k holds the value for n = k + 1.
struct ThreeTermCoefficients {
  std::vector<Real> d;
  std::vector<Real> d_prime;
  std::vector<Real> p;
  std::vector<Real> q;
  /// +1 or -1: the factor applied to every equation.
  int flip = 1;
  bool final_row_unit = false;
  /// row_sign[n] for n = 0..N+1.
  std::vector<int> row_sign;
  /// d_n > 0 and d'_{n+1} > 0 for n = 1..N, and p_n > 0 for n = 1..N+1.
  bool admissible = false;
};

ThreeTermCoefficients lemma_mapping(const SpectralTable& t, const NumericContext& ctx);

/// c~_0, ..., c~_{N+1} regenerated from the normal-form coefficients alone.
std::vector<EPolynomial> lemma_rows(const ThreeTermCoefficients& m);

/// Sorted real roots of every row: per_n_roots[n-1] holds the n roots of c_n.
struct InterlacingChain {
  std::vector<std::vector<Real>> per_n_roots;

  /// s_1^(n) < s_1^(n-1) < s_2^(n) < ... < s_{n-1}^(n-1) < s_n^(n) for all n >= 2.
  bool strictly_interlaced() const;
};

/// Isolates the roots of each row inside the brackets given by the roots of
/// the previous row (the sign of c_n alternates there), growing outer brackets
/// geometrically. Requires an admissible mapping (InvalidArgument otherwise);
/// throws BracketFailure when a predicted sign change is absent.
InterlacingChain interlaced_roots(const SpectralTable& t, const NumericContext& ctx);

struct RootSet {
  std::vector<Complex> roots;
  /// True when the relative gap to the nearest other root is below gap_tol.
  std::vector<bool> cluster_flags;
  bool converged = false;
  int iterations = 0;
};

/// All complex roots by simultaneous Aberth-Ehrlich iteration. Starting points
/// lie on circles whose radii come from the Newton polygon of log|a_j|.
/// Iterates until every relative correction is below 2^{-bits/2}, then runs
/// two polishing sweeps. When the iteration cap is hit the best iterate is
/// returned with converged = false.
RootSet aberth_roots(const EPolynomial& poly, const NumericContext& ctx);

/// |Im z| < 2^{-bits/2} |z|.
bool is_real_root(const Complex& z, const NumericContext& ctx);

/// max_j |a_j - [lead * prod (E - r_i)]_j| / [|lead| * prod (E + |r_i|)]_j.
Real reconstruction_error(const EPolynomial& poly, const RootSet& roots);

/// Roots sorted by real part, then imaginary part.
std::vector<Complex> sorted_roots(const RootSet& roots);

}  // namespace qheun
