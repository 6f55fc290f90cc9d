#include "qheun/roots.hpp"

#include "qheun/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qheun {

namespace {

int sign_of(const Real& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

Real half_precision_tol(const NumericContext& ctx) {
  return pow2(-static_cast<long>(ctx.precision_bits / 2));
}

// Safeguarded Newton inside a sign-change bracket [lo, hi]. Stops once the
// bracket is narrower than 2^{-bits/2} relative, then polishes with Newton.
Real refine_in_bracket(const EPolynomial& f, Real lo, Real hi, int sign_lo, const NumericContext& ctx) {
  const Real tol = half_precision_tol(ctx);
  const Real polish_tol = pow2(-static_cast<long>(ctx.precision_bits) + 8);
  Real x = (lo + hi) / 2;

  auto narrow = [&] { return hi - lo <= tol * std::max(Real(abs(lo)), Real(abs(hi))); };

  for (unsigned iter = 0; iter < 4 * ctx.precision_bits && !narrow(); ++iter) {
    auto [v, dv] = f.evaluate_with_derivative(x);
    if (v == 0) return x;
    if (sign_of(v) == sign_lo) {
      lo = x;
    } else {
      hi = x;
    }
    if (narrow()) break;

    bool took_newton = false;
    if (dv != 0) {
      Real step = v / dv;
      Real candidate = x - step;
      if (candidate > lo && candidate < hi) {
        took_newton = true;
        if (abs(step) <= tol * abs(candidate) / 4) {
          // Newton has converged; confirm the sign change on a tight bracket.
          Real delta = tol * abs(candidate) / 4;
          Real a = std::max(lo, Real(candidate - delta));
          Real b = std::min(hi, Real(candidate + delta));
          if (sign_of(f.evaluate(a)) == sign_lo && sign_of(f.evaluate(b)) == -sign_lo) {
            lo = std::move(a);
            hi = std::move(b);
            break;
          }
        }
        x = std::move(candidate);
      }
    }
    if (!took_newton) x = (lo + hi) / 2;
  }

  // The bracket can start out narrower than tol when consecutive rows have
  // nearly equal roots, so the polish may leave it slightly; each step must
  // still shrink |f|.
  x = (lo + hi) / 2;
  const Real reach = 4 * (hi - lo) + tol * abs(x);
  auto [fx, dfx] = f.evaluate_with_derivative(x);
  for (int k = 0; k < 8; ++k) {
    if (fx == 0 || dfx == 0) break;
    const Real step = fx / dfx;
    if (abs(step) > reach) break;
    Real candidate = x - step;
    auto [fc, dfc] = f.evaluate_with_derivative(candidate);
    if (!(abs(fc) < abs(fx))) break;
    x = std::move(candidate);
    fx = std::move(fc);
    dfx = std::move(dfc);
    if (abs(step) <= polish_tol * abs(x)) break;
  }
  return x;
}

[[noreturn]] void bracket_failure(int n, const std::string& what) {
  std::ostringstream msg;
  msg << "row " << n << ": " << what
      << " (the interlacing argument predicts a sign change here; working precision is likely exhausted)";
  throw Error(ErrorKind::BracketFailure, msg.str());
}

// Upper convex hull of (j, log|a_j|) gives one circle per edge.
std::vector<Complex> newton_polygon_start(const std::vector<Real>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<int> idx;
  std::vector<Real> logs(a.size());
  std::vector<double> flog(a.size());
  for (int j = 0; j <= n; ++j) {
    if (a[static_cast<std::size_t>(j)] == 0) continue;
    logs[static_cast<std::size_t>(j)] = log(abs(a[static_cast<std::size_t>(j)]));
    flog[static_cast<std::size_t>(j)] = logs[static_cast<std::size_t>(j)].convert_to<double>();
    idx.push_back(j);
  }
  std::vector<int> hull;
  for (int j : idx) {
    while (hull.size() >= 2) {
      const int i0 = hull[hull.size() - 2];
      const int i1 = hull.back();
      const double cross = (i1 - i0) * (flog[static_cast<std::size_t>(j)] - flog[static_cast<std::size_t>(i0)]) -
                           (j - i0) * (flog[static_cast<std::size_t>(i1)] - flog[static_cast<std::size_t>(i0)]);
      if (cross >= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(j);
  }

  std::vector<Complex> z;
  z.reserve(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int i = hull[e];
    const int k = hull[e + 1];
    const int m = k - i;
    const Real radius = exp((logs[static_cast<std::size_t>(i)] - logs[static_cast<std::size_t>(k)]) / m);
    for (int j = 0; j < m; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / m + 2.0 * std::numbers::pi * i / n + 0.4;
      z.emplace_back(radius * Real(std::cos(angle)), radius * Real(std::sin(angle)));
    }
  }
  return z;
}

}  // namespace

ThreeTermCoefficients lemma_mapping(const SpectralTable& t, const NumericContext& ctx) {
  const int N = t.N();
  ThreeTermCoefficients m;
  std::vector<Real> divisors;
  for (int n = 1; n <= N + 1; ++n) {
    RecurrenceTerms r = recurrence_terms(t.params, n);
    divisors.push_back(r.divisor);
    m.d.push_back(std::move(r.divisor));
    m.d_prime.push_back(std::move(r.back));
    m.p.push_back(std::move(r.slope));
    m.q.push_back(std::move(r.offset));
  }
  m.flip = N >= 1 && m.d.front() < 0 ? -1 : 1;
  for (int k = 0; k <= N; ++k) {
    m.d[static_cast<std::size_t>(k)] *= m.flip;
    m.d_prime[static_cast<std::size_t>(k)] *= m.flip;
  }

  const Parameters& p = t.params;
  const Real divisor_scale = abs(p.t1 * p.t2 * p.qpow(p.h1 + p.h2));
  m.final_row_unit = t.undivided_closing_row || abs(m.d.back()) < divisor_scale * ctx.zero_tol;

  int s_pow = 1;
  for (int n = 0; n <= N; ++n) {
    m.row_sign.push_back(s_pow);
    s_pow *= m.flip;
  }
  // s_pow is now flip^{N+1}; the closing row carries flip^N times the sign of its divisor.
  const int flip_n = m.flip * s_pow;
  m.row_sign.push_back(t.undivided_closing_row ? flip_n : flip_n * sign_of(divisors.back()));

  bool ok = true;
  for (int n = 1; n <= N; ++n) {
    ok = ok && m.d[static_cast<std::size_t>(n - 1)] > 0 && m.d_prime[static_cast<std::size_t>(n)] > 0;
  }
  for (const auto& slope : m.p) ok = ok && slope > 0;
  m.admissible = ok;
  return m;
}

std::vector<EPolynomial> lemma_rows(const ThreeTermCoefficients& m) {
  const std::size_t count = m.d.size();
  std::vector<EPolynomial> rows{EPolynomial::constant(Real(1))};
  EPolynomial previous;
  for (std::size_t k = 0; k < count; ++k) {
    EPolynomial next = EPolynomial::linear(m.p[k], m.q[k]) * rows.back();
    if (!previous.is_zero()) next -= previous * m.d_prime[k];
    // A vanishing closing divisor is treated as 1; a negative one flips the row.
    const bool closing = k + 1 == count;
    if (!(closing && m.final_row_unit)) next /= closing ? abs(m.d[k]) : m.d[k];
    previous = rows.back();
    rows.push_back(std::move(next));
  }
  return rows;
}

bool InterlacingChain::strictly_interlaced() const {
  for (std::size_t level = 1; level < per_n_roots.size(); ++level) {
    const auto& outer = per_n_roots[level];
    const auto& inner = per_n_roots[level - 1];
    if (outer.size() != inner.size() + 1) return false;
    for (std::size_t j = 0; j < inner.size(); ++j) {
      if (!(outer[j] < inner[j] && inner[j] < outer[j + 1])) return false;
    }
  }
  return true;
}

InterlacingChain interlaced_roots(const SpectralTable& t, const NumericContext& ctx) {
  const ThreeTermCoefficients mapping = lemma_mapping(t, ctx);
  if (!mapping.admissible) {
    throw Error(ErrorKind::InvalidArgument,
                "interlaced_roots requires a table whose three-term relation satisfies the positivity hypotheses");
  }

  InterlacingChain chain;
  for (int n = 1; n <= t.N() + 1; ++n) {
    EPolynomial row = t.rows[static_cast<std::size_t>(n)];
    if (row.leading() < 0) row *= Real(-1);
    if (row.degree() != n) bracket_failure(n, "degree mismatch");

    if (n == 1) {
      chain.per_n_roots.push_back({-row[0] / row[1]});
      continue;
    }

    const std::vector<Real>& prev = chain.per_n_roots.back();
    // Expected signs: (-1)^n at -inf, (-1)^{n-j} at the j-th previous root (1-based), + at +inf.
    std::vector<Real> points;
    std::vector<int> signs;
    for (std::size_t j = 0; j < prev.size(); ++j) {
      const int expected = ((n - static_cast<int>(j) - 1) % 2 == 0) ? 1 : -1;
      if (sign_of(row.evaluate(prev[j])) != expected) {
        bracket_failure(n, "unexpected sign at interior point " + std::to_string(j + 1));
      }
      points.push_back(prev[j]);
      signs.push_back(expected);
    }

    auto outer_point = [&](const Real& start, int direction, int wanted) {
      Real step(1);
      for (int doubling = 0; doubling <= 1024; ++doubling) {
        Real x = start + direction * step;
        if (sign_of(row.evaluate(x)) == wanted) return x;
        step *= 2;
      }
      bracket_failure(n, direction < 0 ? "no sign change left of the smallest root"
                                       : "no sign change right of the largest root");
    };
    const int sign_minus_inf = (n % 2 == 0) ? 1 : -1;
    points.insert(points.begin(), outer_point(prev.front(), -1, sign_minus_inf));
    signs.insert(signs.begin(), sign_minus_inf);
    points.push_back(outer_point(prev.back(), +1, 1));
    signs.push_back(1);

    std::vector<Real> found;
    found.reserve(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
      found.push_back(refine_in_bracket(row, points[j], points[j + 1], signs[j], ctx));
    }
    chain.per_n_roots.push_back(std::move(found));
  }

  if (!chain.strictly_interlaced()) bracket_failure(t.N() + 1, "refined roots do not interlace strictly");
  return chain;
}

RootSet aberth_roots(const EPolynomial& poly, const NumericContext& ctx) {
  if (poly.degree() < 1) {
    throw Error(ErrorKind::InvalidArgument, "aberth_roots needs a polynomial of degree >= 1");
  }
  std::vector<Real> a(poly.coeffs().begin(), poly.coeffs().end());
  std::size_t zero_roots = 0;
  while (a[zero_roots] == 0) ++zero_roots;
  a.erase(a.begin(), a.begin() + static_cast<long>(zero_roots));
  const EPolynomial reduced(a);

  RootSet out;
  std::vector<Complex> z;
  if (reduced.degree() >= 1) z = newton_polygon_start(a);
  const std::size_t n = z.size();

  const Real tol = half_precision_tol(ctx);
  auto correction = [&](std::size_t i) -> Complex {
    auto [v, dv] = reduced.evaluate_with_derivative(z[i]);
    if (v.re == 0 && v.im == 0) return Complex();
    Complex sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sum += Complex(Real(1)) / (z[i] - z[j]);
    }
    Complex denom = dv - v * sum;
    if (denom.re == 0 && denom.im == 0) return Complex();
    return v / denom;
  };

  const int max_iterations = 200 + 20 * static_cast<int>(n);
  std::vector<bool> frozen(n, false);
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    bool all_frozen = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      Complex w = correction(i);
      z[i] -= w;
      if (abs(w) <= tol * abs(z[i])) {
        frozen[i] = true;
      } else {
        all_frozen = false;
      }
    }
    if (all_frozen) break;
  }
  out.converged = iter < max_iterations;
  out.iterations = iter;
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) z[i] -= correction(i);
  }

  out.roots.assign(zero_roots, Complex());
  for (auto& r : z) out.roots.push_back(std::move(r));

  out.cluster_flags.assign(out.roots.size(), false);
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    for (std::size_t j = 0; j < out.roots.size(); ++j) {
      if (i == j) continue;
      const Real scale = std::max(abs(out.roots[i]), abs(out.roots[j]));
      if (scale == 0 || abs(out.roots[i] - out.roots[j]) < scale * ctx.gap_tol) {
        out.cluster_flags[i] = true;
        break;
      }
    }
  }
  return out;
}

bool is_real_root(const Complex& z, const NumericContext& ctx) {
  return abs(z.im) < half_precision_tol(ctx) * abs(z);
}

Real reconstruction_error(const EPolynomial& poly, const RootSet& roots) {
  std::vector<Complex> expanded{Complex(poly.leading())};
  std::vector<Real> bound{abs(poly.leading())};
  for (const Complex& r : roots.roots) {
    const Real mag = abs(r);
    expanded.insert(expanded.begin(), Complex());
    bound.insert(bound.begin(), Real(0));
    for (std::size_t j = 0; j + 1 < expanded.size(); ++j) {
      expanded[j] -= r * expanded[j + 1];
      bound[j] += mag * bound[j + 1];
    }
  }
  if (expanded.size() != poly.coeffs().size()) return Real(1);
  Real worst(0);
  for (std::size_t j = 0; j < expanded.size(); ++j) {
    const Real err = abs(expanded[j] - Complex(poly[j]));
    if (bound[j] == 0) {
      if (err != 0) return Real(1);
      continue;
    }
    worst = std::max(worst, Real(err / bound[j]));
  }
  return worst;
}

std::vector<Complex> sorted_roots(const RootSet& roots) {
  std::vector<Complex> out = roots.roots;
  std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  return out;
}

}  // namespace qheun
