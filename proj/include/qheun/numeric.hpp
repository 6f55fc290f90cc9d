#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace qheun {

/// Variable-precision real. The precision of newly created values follows the
/// process-wide default set through PrecisionScope.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

/// Decimal digits needed so that MPFR allocates at least `bits` of mantissa.
unsigned digits10_for_bits(unsigned bits);

/// Sets the default working precision for Real values created while the scope
/// is alive and restores the previous default on destruction.
///
/// The default is process-global: do not open scopes with different
/// precisions concurrently from several threads.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const { return bits_; }

 private:
  unsigned bits_;
  unsigned previous_digits10_;
};

/// Mantissa bits of the current default precision.
unsigned current_precision_bits();

/// base^exponent for base > 0, computed as exp(exponent * ln base).
Real real_pow(const Real& base, const Real& exponent);

/// 2^e at the current precision.
Real pow2(long e);

/// Parses a decimal string at the current precision. Throws Error(ParseError)
/// on anything that is not a finite number.
Real parse_real(const std::string& text);

/// Scientific notation with enough digits to round-trip at the value's
/// precision.
std::string format_real(const Real& x);

struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o);
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }

Real abs(const Complex& z);
Complex conj(const Complex& z);
/// Principal-branch natural logarithm of the modulus.
Real log_abs(const Complex& z);

}  // namespace qheun
