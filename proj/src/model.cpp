#include "qheun/model.hpp"

#include "qheun/error.hpp"

#include <cmath>
#include <sstream>

namespace qheun {

NumericContext NumericContext::for_precision(unsigned bits) {
  NumericContext ctx;
  ctx.precision_bits = bits;
  ctx.zero_tol = std::ldexp(1.0, -static_cast<int>(bits / 2));
  ctx.gap_tol = std::ldexp(1.0, -static_cast<int>(bits / 4));
  return ctx;
}

void NumericContext::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (precision_bits < 64 || precision_bits > 2000) {
    throw Error(ErrorKind::InvalidArgument,
                "precision_bits must lie in [64, 2000], got " + std::to_string(precision_bits));
  }
  if (!in_unit(zero_tol)) throw Error(ErrorKind::InvalidArgument, "zero_tol must lie in (0,1)");
  if (!in_unit(gap_tol)) throw Error(ErrorKind::InvalidArgument, "gap_tol must lie in (0,1)");
  if (!in_unit(integrality_tol)) {
    throw Error(ErrorKind::InvalidArgument, "integrality_tol must lie in (0,1)");
  }
}

void validate_parameters(const Parameters& p) {
  if (!(p.q > 0 && p.q < 1)) {
    throw Error(ErrorKind::QOutOfRange, "q must satisfy 0 < q < 1, got " + p.q.str(12));
  }
  if (p.t1 * p.t2 == 0) {
    throw Error(ErrorKind::ZeroScale, "t1 and t2 must both be nonzero (the recurrence divides by t1 t2)");
  }
}

Exponents exponents(const Parameters& p) {
  const Real common = p.h1 + p.h2 - p.l1 - p.l2 - p.alpha1 - p.alpha2 + 2;
  return {(common - p.beta) / 2, (common + p.beta) / 2};
}

std::pair<Real, long> nearest_integer(const Real& x) {
  Real r = round(x);
  return {abs(x - r), r.convert_to<long>()};
}

QuasiDegree quasi_degree(const Parameters& p, const NumericContext& ctx) {
  const Real lambda1 = exponents(p).lambda1;
  const Real candidate = -lambda1 - p.alpha1;
  auto [distance, n] = nearest_integer(candidate);
  if (distance >= ctx.integrality_tol || n < 0) {
    std::ostringstream msg;
    msg << "-lambda1 - alpha1 = " << candidate.str(12)
        << " is not a non-negative integer; no invariant polynomial space exists";
    throw Error(ErrorKind::NotQuasiSolvable, msg.str());
  }
  for (long m = 1; m <= n; ++m) {
    if (abs(p.beta - m) < ctx.integrality_tol) {
      std::ostringstream msg;
      msg << "beta = " << p.beta.str(12) << " lies in {1,...," << n
          << "}; the recurrence divisor (1 - q^{n-beta}) vanishes at n = " << m;
      throw Error(ErrorKind::BetaResonance, msg.str());
    }
  }
  return QuasiDegree{static_cast<int>(n)};
}

Parameters normalize_alpha(Parameters p, const NumericContext& ctx) {
  const Real lambda1 = exponents(p).lambda1;
  auto is_degree = [&](const Real& alpha) {
    auto [distance, n] = nearest_integer(-lambda1 - alpha);
    return distance < ctx.integrality_tol && n >= 0;
  };
  if (!is_degree(p.alpha1) && is_degree(p.alpha2)) std::swap(p.alpha1, p.alpha2);
  return p;
}

}  // namespace qheun
