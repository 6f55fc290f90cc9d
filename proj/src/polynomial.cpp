#include "qheun/polynomial.hpp"

#include <algorithm>

namespace qheun {

EPolynomial::EPolynomial(std::vector<Real> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

EPolynomial EPolynomial::constant(const Real& c) { return EPolynomial({c}); }

EPolynomial EPolynomial::linear(const Real& slope, const Real& offset) {
  return EPolynomial({offset, slope});
}

void EPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Real EPolynomial::evaluate(const Real& x) const {
  Real acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Complex EPolynomial::evaluate(const Complex& x) const {
  Complex acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc.re += *it;
  }
  return acc;
}

std::pair<Real, Real> EPolynomial::evaluate_with_derivative(const Real& x) const {
  Real value(0);
  Real slope(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    slope *= x;
    slope += value;
    value *= x;
    value += *it;
  }
  return {std::move(value), std::move(slope)};
}

std::pair<Complex, Complex> EPolynomial::evaluate_with_derivative(const Complex& x) const {
  Complex value;
  Complex slope;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    slope *= x;
    slope += value;
    value *= x;
    value.re += *it;
  }
  return {std::move(value), std::move(slope)};
}

Real EPolynomial::absolute_evaluate(const Real& x) const {
  const Real ax = abs(x);
  Real acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= ax;
    acc += abs(*it);
  }
  return acc;
}

EPolynomial EPolynomial::derivative() const {
  std::vector<Real> out;
  for (std::size_t j = 1; j < coeffs_.size(); ++j) out.push_back(coeffs_[j] * static_cast<long>(j));
  return EPolynomial(std::move(out));
}

EPolynomial& EPolynomial::operator+=(const EPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Real(0));
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
  trim();
  return *this;
}

EPolynomial& EPolynomial::operator-=(const EPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Real(0));
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
  trim();
  return *this;
}

EPolynomial& EPolynomial::operator*=(const Real& s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

EPolynomial& EPolynomial::operator/=(const Real& s) {
  for (auto& c : coeffs_) c /= s;
  return *this;
}

EPolynomial operator*(const EPolynomial& a, const EPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Real> out(a.coeffs_.size() + b.coeffs_.size() - 1, Real(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return EPolynomial(std::move(out));
}

}  // namespace qheun
