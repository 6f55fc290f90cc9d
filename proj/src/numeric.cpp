#include "qheun/numeric.hpp"

#include "qheun/error.hpp"

#include <cmath>
#include <ios>
#include <regex>

namespace qheun {

unsigned digits10_for_bits(unsigned bits) {
  // ceil(bits * log10(2)), plus one guard digit.
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits)
    : bits_(bits), previous_digits10_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(previous_digits10_); }

unsigned current_precision_bits() {
  Real probe;
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

Real real_pow(const Real& base, const Real& exponent) {
  if (exponent == 0) return Real(1);
  return exp(exponent * log(base));
}

Real pow2(long e) {
  Real x(1);
  mpfr_mul_2si(x.backend().data(), x.backend().data(), e, MPFR_RNDN);
  return x;
}

Real parse_real(const std::string& text) {
  static const std::regex decimal(R"(\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*)");
  if (!std::regex_match(text, decimal)) {
    throw Error(ErrorKind::ParseError, "not a decimal number: '" + text + "'");
  }
  return Real(text);
}

std::string format_real(const Real& x) {
  const unsigned digits = x.precision() + 1;
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

Complex& Complex::operator/=(const Complex& o) {
  Real denom = o.re * o.re + o.im * o.im;
  Real r = (re * o.re + im * o.im) / denom;
  im = (im * o.re - re * o.im) / denom;
  re = std::move(r);
  return *this;
}

Real abs(const Complex& z) { return hypot(z.re, z.im); }

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real log_abs(const Complex& z) { return log(abs(z)); }

}  // namespace qheun
