#pragma once

#include "qheun/numeric.hpp"

#include <span>
#include <vector>

namespace qheun {

/// Dense real polynomial sum_j a_j E^j in the accessory parameter E, stored in
/// ascending order. Trailing zero coefficients are stripped on construction,
/// so degree() is well defined for every nonzero polynomial; the zero
/// polynomial has no coefficients and degree -1.
class EPolynomial {
 public:
  EPolynomial() = default;
  explicit EPolynomial(std::vector<Real> coeffs);

  static EPolynomial constant(const Real& c);
  /// slope * E + offset
  static EPolynomial linear(const Real& slope, const Real& offset);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const Real> coeffs() const { return coeffs_; }
  const Real& operator[](std::size_t j) const { return coeffs_[j]; }
  const Real& leading() const { return coeffs_.back(); }

  Real evaluate(const Real& x) const;
  Complex evaluate(const Complex& x) const;
  /// Value and first derivative in one Horner pass.
  std::pair<Real, Real> evaluate_with_derivative(const Real& x) const;
  std::pair<Complex, Complex> evaluate_with_derivative(const Complex& x) const;
  /// sum_j |a_j| |x|^j: the magnitude scale against which p(x) ~ 0 is judged.
  Real absolute_evaluate(const Real& x) const;

  EPolynomial derivative() const;

  EPolynomial& operator+=(const EPolynomial& o);
  EPolynomial& operator-=(const EPolynomial& o);
  EPolynomial& operator*=(const Real& s);
  EPolynomial& operator/=(const Real& s);
  friend EPolynomial operator*(const EPolynomial& a, const EPolynomial& b);
  friend EPolynomial operator+(EPolynomial a, const EPolynomial& b) { return a += b; }
  friend EPolynomial operator-(EPolynomial a, const EPolynomial& b) { return a -= b; }
  friend EPolynomial operator*(EPolynomial a, const Real& s) { return a *= s; }

 private:
  void trim();

  std::vector<Real> coeffs_;
};

}  // namespace qheun
