#include "qheun/spectral.hpp"

#include "qheun/error.hpp"

#include <algorithm>
#include <sstream>

namespace qheun {

RecurrenceTerms recurrence_terms(const Parameters& p, int n) {
  const Real lambda1 = exponents(p).lambda1;
  const Real half = Real(1) / 2;
  RecurrenceTerms r;
  r.divisor = p.t1 * p.t2 * p.qpow(p.h1 + p.h2) * (1 - p.qpow(Real(n))) * (1 - p.qpow(n - p.beta));
  r.slope = p.qpow(n - 1 + lambda1);
  r.offset = p.qpow(half) * (p.qpow(p.h1) * p.t1 + p.qpow(p.h2) * p.t2) +
             (p.qpow(p.l1) * p.t1 + p.qpow(p.l2) * p.t2) *
                 p.qpow(2 * (n - 1 + lambda1) + p.alpha1 + p.alpha2 - half);
  r.back = p.q * (1 - p.qpow(n - 2 + lambda1 + p.alpha1)) * (1 - p.qpow(n - 2 + lambda1 + p.alpha2));
  return r;
}

SpectralTable build_table(const Parameters& p, QuasiDegree N, const NumericContext& ctx) {
  SpectralTable t;
  t.params = p;
  t.degree = N;
  t.lambda1 = exponents(p).lambda1;
  t.rows.reserve(static_cast<std::size_t>(N.N) + 2);
  t.rows.push_back(EPolynomial::constant(Real(1)));

  EPolynomial previous;  // c_{-1} = 0
  for (int n = 1; n <= N.N + 1; ++n) {
    const RecurrenceTerms r = recurrence_terms(p, n);
    EPolynomial next = EPolynomial::linear(r.slope, r.offset) * t.rows.back();
    if (!previous.is_zero()) next -= previous * r.back;

    const bool closing = n == N.N + 1;
    if (closing && abs(n - p.beta) < ctx.integrality_tol) {
      t.undivided_closing_row = true;
    } else {
      if (!closing && abs(n - p.beta) < ctx.integrality_tol) {
        std::ostringstream msg;
        msg << "divisor (1 - q^{n-beta}) vanishes at n = " << n << " (beta = " << p.beta.str(12)
            << "); no polynomial-type solution is determined";
        throw Error(ErrorKind::BetaResonance, msg.str());
      }
      next /= r.divisor;
    }
    previous = t.rows.back();
    t.rows.push_back(std::move(next));
  }
  return t;
}

const EPolynomial& spectral_polynomial(const SpectralTable& t) { return t.rows.back(); }

std::string RealRootCondition::to_string() const {
  static constexpr std::array<const char*, 4> names{"i", "ii", "iii", "iv"};
  std::string out = "{";
  for (std::size_t c = 0; c < satisfied.size(); ++c) {
    if (!satisfied[c]) continue;
    if (out.size() > 1) out += ", ";
    out += names[c];
  }
  return out + "}";
}

RealRootCondition realroot_condition(const Parameters& p, QuasiDegree N) {
  const Real scale_sign = p.t1 * p.t2;
  const Real alpha_gap = p.alpha2 - p.alpha1;
  const int n = N.N;
  RealRootCondition r;
  r.satisfied[RealRootCondition::i] = scale_sign > 0 && alpha_gap < 1 && p.beta < 1;
  r.satisfied[RealRootCondition::ii] = scale_sign > 0 && alpha_gap > n && p.beta > n;
  r.satisfied[RealRootCondition::iii] = scale_sign < 0 && alpha_gap > n && p.beta < 1;
  r.satisfied[RealRootCondition::iv] = scale_sign < 0 && alpha_gap < 1 && p.beta > n;
  return r;
}

QSeriesPoly solution_from_root(const SpectralTable& t, const Real& E0, const NumericContext& ctx) {
  const EPolynomial& closing = spectral_polynomial(t);
  const Real value = closing.evaluate(E0);
  const Real scale = closing.absolute_evaluate(E0);
  if (!(abs(value) < scale * ctx.zero_tol)) {
    std::ostringstream msg;
    msg << "E0 = " << E0.str(20) << " is not a root of the spectral polynomial (|c_{N+1}(E0)| / scale = "
        << (abs(value) / scale).str(6) << ")";
    throw Error(ErrorKind::NotARoot, msg.str());
  }
  const int N = t.N();
  std::vector<RecurrenceTerms> terms;
  std::vector<Real> diag;  // slope * E0 + offset
  for (int n = 1; n <= N + 1; ++n) {
    terms.push_back(recurrence_terms(t.params, n));
    diag.push_back(terms.back().slope * E0 + terms.back().offset);
  }
  auto row = [&](int n) -> const RecurrenceTerms& { return terms[static_cast<std::size_t>(n - 1)]; };
  auto d = [&](int n) -> const Real& { return diag[static_cast<std::size_t>(n - 1)]; };

  // The coefficient vector is the null vector of the tridiagonal system formed
  // by rows 1..N+1 (with c_{N+1} = 0). Forward substitution from c_0 loses
  // every digit once the wanted solution becomes recessive, so the vector is
  // also built backwards from the closing row, and the two halves are joined
  // where the joined vector satisfies the rows best.
  std::vector<Real> forward{Real(1)};
  for (int n = 1; n <= N; ++n) {
    Real next = d(n) * forward.back();
    if (n >= 2) next -= row(n).back * forward[static_cast<std::size_t>(n - 2)];
    forward.push_back(next / row(n).divisor);
  }

  // backward[n] for n = lowest..N, normalised by c_N = 1
  std::vector<Real> backward(static_cast<std::size_t>(N) + 1);
  backward[static_cast<std::size_t>(N)] = 1;
  int lowest = N;
  for (int n = N + 1; n >= 2; --n) {
    if (row(n).back == 0) break;
    const Real upper = n <= N ? Real(row(n).divisor * backward[static_cast<std::size_t>(n)]) : Real(0);
    backward[static_cast<std::size_t>(n - 2)] = (d(n) * backward[static_cast<std::size_t>(n - 1)] - upper) / row(n).back;
    lowest = n - 2;
  }

  auto row_residual = [&](const std::vector<Real>& c) {
    Real scale(0);
    for (const Real& x : c) scale = std::max(scale, Real(abs(x)));
    auto at = [&](int n) { return n >= 0 && n <= N ? c[static_cast<std::size_t>(n)] : Real(0); };
    Real worst(0);
    for (int n = 1; n <= N + 1; ++n) {
      const Real lhs = n <= N ? Real(row(n).divisor * at(n)) : Real(0);
      const Real r = lhs - d(n) * at(n - 1) + row(n).back * at(n - 2);
      const Real size = abs(lhs) + abs(d(n) * at(n - 1)) + abs(row(n).back * at(n - 2));
      worst = std::max(worst, Real(abs(r) / (size + scale)));
    }
    return worst;
  };

  std::vector<Real> coeffs = forward;
  Real best = row_residual(coeffs);
  for (int m = std::max(lowest, 0); m <= N; ++m) {
    const Real& pivot = backward[static_cast<std::size_t>(m)];
    if (pivot == 0 || forward[static_cast<std::size_t>(m)] == 0) continue;
    const Real s = forward[static_cast<std::size_t>(m)] / pivot;
    std::vector<Real> joined(forward.begin(), forward.begin() + m);
    for (int n = m; n <= N; ++n) joined.push_back(backward[static_cast<std::size_t>(n)] * s);
    const Real r = row_residual(joined);
    if (r < best) {
      best = r;
      coeffs = std::move(joined);
    }
  }
  return QSeriesPoly(t.lambda1, std::move(coeffs));
}

}  // namespace qheun
