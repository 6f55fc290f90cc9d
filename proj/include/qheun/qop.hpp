#pragma once

#include "qheun/model.hpp"

#include <vector>

namespace qheun {

/// A x^mu = d_plus x^{mu+1} + d_zero x^mu + d_minus x^{mu-1} for the q-Heun
/// operator A (the equation reads (A - E) g = 0).
struct CoeffTriple {
  Real d_plus;
  Real d_zero;
  Real d_minus;
};

/// A function x^lambda * sum_n coeffs[n] x^n. The zero function has no
/// coefficients; otherwise the last coefficient is nonzero.
class QSeriesPoly {
 public:
  QSeriesPoly() = default;
  QSeriesPoly(Real lambda, std::vector<Real> coeffs);

  const Real& lambda() const { return lambda_; }
  const std::vector<Real>& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  /// Largest coefficient magnitude (0 for the zero function).
  Real max_abs() const;
  /// Pointwise value at x > 0.
  Real evaluate(const Real& x) const;
  /// Coefficient of x^{lambda() + offset}; zero outside the stored range.
  Real coefficient(long offset) const;

  /// Drops leading and trailing coefficients whose magnitude is below
  /// rel_tol * max_abs(), shifting lambda accordingly.
  QSeriesPoly trimmed(double rel_tol) const;

 private:
  Real lambda_{0};
  std::vector<Real> coeffs_;
};

/// a*f + b*g. The exponent offsets of f and g must differ by an integer
/// (within 1e-9); throws Error(InvalidArgument) otherwise.
QSeriesPoly combine(const Real& a, const QSeriesPoly& f, const Real& b, const QSeriesPoly& g);

CoeffTriple coeff_triple(const Parameters& p, const Real& mu);

/// A f expanded on x^{lambda-1}, ..., x^{lambda+M+1}, with end coefficients
/// below ctx.zero_tol (relative) trimmed.
QSeriesPoly apply_operator(const Parameters& p, const QSeriesPoly& f, const NumericContext& ctx);

/// Same expansion without trimming; the result starts at x^{lambda-1}.
QSeriesPoly apply_operator_full(const Parameters& p, const QSeriesPoly& f);

/// max_n |[(A - E) f]_n| / max_n |f_n|. Throws ZeroFunction for f = 0.
Real residual(const Parameters& p, const Real& E, const QSeriesPoly& f);

}  // namespace qheun
