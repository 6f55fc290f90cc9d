#include "qheun/qop.hpp"

#include "qheun/error.hpp"

#include <algorithm>

namespace qheun {

QSeriesPoly::QSeriesPoly(Real lambda, std::vector<Real> coeffs)
    : lambda_(std::move(lambda)), coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Real QSeriesPoly::max_abs() const {
  Real m(0);
  for (const auto& c : coeffs_) m = std::max(m, Real(abs(c)));
  return m;
}

Real QSeriesPoly::evaluate(const Real& x) const {
  Real acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc * real_pow(x, lambda_);
}

Real QSeriesPoly::coefficient(long offset) const {
  if (offset < 0 || offset >= static_cast<long>(coeffs_.size())) return Real(0);
  return coeffs_[static_cast<std::size_t>(offset)];
}

QSeriesPoly QSeriesPoly::trimmed(double rel_tol) const {
  const Real cutoff = max_abs() * rel_tol;
  std::size_t lo = 0;
  std::size_t hi = coeffs_.size();
  while (lo < hi && abs(coeffs_[lo]) <= cutoff) ++lo;
  while (hi > lo && abs(coeffs_[hi - 1]) <= cutoff) --hi;
  return QSeriesPoly(lambda_ + static_cast<long>(lo),
                     std::vector<Real>(coeffs_.begin() + static_cast<long>(lo),
                                       coeffs_.begin() + static_cast<long>(hi)));
}

QSeriesPoly combine(const Real& a, const QSeriesPoly& f, const Real& b, const QSeriesPoly& g) {
  if (f.is_zero() && g.is_zero()) return {};
  if (f.is_zero()) return combine(b, g, a, f);
  if (g.is_zero()) {
    std::vector<Real> c = f.coeffs();
    for (auto& x : c) x *= a;
    return QSeriesPoly(f.lambda(), std::move(c));
  }

  auto [distance, shift] = nearest_integer(g.lambda() - f.lambda());
  if (distance > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "exponent offsets differ by a non-integer");
  }
  const long lo = std::min(0L, shift);
  const long hi = std::max(static_cast<long>(f.size()), shift + static_cast<long>(g.size()));
  std::vector<Real> out;
  out.reserve(static_cast<std::size_t>(hi - lo));
  for (long n = lo; n < hi; ++n) out.push_back(a * f.coefficient(n) + b * g.coefficient(n - shift));
  return QSeriesPoly(f.lambda() + lo, std::move(out));
}

CoeffTriple coeff_triple(const Parameters& p, const Real& mu) {
  const Real q_mu = p.qpow(-mu);
  const Exponents ex = exponents(p);
  CoeffTriple t;
  t.d_plus = q_mu * (1 - p.qpow(p.alpha1 + mu)) * (1 - p.qpow(p.alpha2 + mu));
  t.d_zero = -q_mu * (p.qpow(Real(1) / 2) * (p.qpow(p.h1) * p.t1 + p.qpow(p.h2) * p.t2) +
                      (p.qpow(p.l1) * p.t1 + p.qpow(p.l2) * p.t2) *
                          p.qpow(p.alpha1 + p.alpha2 + 2 * mu - Real(1) / 2));
  t.d_minus = p.t1 * p.t2 * p.qpow(p.h1 + p.h2 + 1) * q_mu * (1 - p.qpow(mu - ex.lambda1)) *
              (1 - p.qpow(mu - ex.lambda2));
  return t;
}

QSeriesPoly apply_operator_full(const Parameters& p, const QSeriesPoly& f) {
  const std::size_t m = f.size();
  std::vector<Real> out(m + 2, Real(0));
  for (std::size_t n = 0; n < m; ++n) {
    if (f.coeffs()[n] == 0) continue;
    const CoeffTriple t = coeff_triple(p, f.lambda() + static_cast<long>(n));
    const Real& c = f.coeffs()[n];
    out[n] += c * t.d_minus;
    out[n + 1] += c * t.d_zero;
    out[n + 2] += c * t.d_plus;
  }
  return QSeriesPoly(f.lambda() - 1, std::move(out));
}

QSeriesPoly apply_operator(const Parameters& p, const QSeriesPoly& f, const NumericContext& ctx) {
  if (f.is_zero()) return {};
  return apply_operator_full(p, f).trimmed(ctx.zero_tol);
}

Real residual(const Parameters& p, const Real& E, const QSeriesPoly& f) {
  const Real scale = f.max_abs();
  if (f.is_zero() || scale == 0) {
    throw Error(ErrorKind::ZeroFunction, "residual of the zero function is undefined");
  }
  const QSeriesPoly image = apply_operator_full(p, f);
  Real worst(0);
  for (long n = 0; n < static_cast<long>(f.size()) + 2; ++n) {
    Real c = image.coefficient(n) - E * f.coefficient(n - 1);
    worst = std::max(worst, Real(abs(c)));
  }
  return worst / scale;
}

}  // namespace qheun
