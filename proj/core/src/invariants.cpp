#include "knotband/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace knotband {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

void reduce_12(Diagram& d) {
  for (;;) {
    bool step = d.reduce_r1();
    step = d.reduce_r2() || step;
    if (!step) return;
  }
}

/// Crossings whose first visit (components in order from their canonical start slots) is as
/// the under-strand, in visiting order. Switching all of them makes the diagram descending.
std::vector<int> non_descending(const Diagram& d) {
  std::vector<char> seen(static_cast<std::size_t>(d.crossing_count()), 0);
  std::vector<int> out;
  for (int start : d.component_starts()) {
    int cur = start;
    do {
      const int c = cur >> 2;
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = 1;
        if ((cur & 3) == 0) out.push_back(c);
      }
      cur = d.link(Diagram::through(cur));
    } while (cur != start);
  }
  return out;
}

class HomflyEngine {
 public:
  LaurentPoly2 eval(Diagram d) {
    reduce_12(d);
    d = d.canonical();
    auto key = d.encode();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    LaurentPoly2 result;
    LaurentPoly2 mult = LaurentPoly2::constant(1);
    for (int c : non_descending(d)) {
      const int eps = d.sign(c);
      Diagram smoothed = d;
      smoothed.smooth_oriented(c);
      result += mult * LaurentPoly2::monomial(-eps, 1, -1) * eval(std::move(smoothed));
      mult = mult * LaurentPoly2::monomial(-2 * eps, 0, -1);
      d.switch_crossing(c);
    }
    result += mult * unlink(d.component_count());
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  const LaurentPoly2& unlink(int k) {
    while (static_cast<int>(unlink_.size()) < k) {
      if (unlink_.empty()) {
        unlink_.push_back(LaurentPoly2::constant(1));
      } else {
        LaurentPoly2 mu = LaurentPoly2::monomial(1, -1, -1) + LaurentPoly2::monomial(-1, -1, -1);
        unlink_.push_back(unlink_.back() * mu);
      }
    }
    return unlink_[static_cast<std::size_t>(k - 1)];
  }

  std::map<std::vector<int>, LaurentPoly2> memo_;
  std::vector<LaurentPoly2> unlink_;
};

class QEngine {
 public:
  LaurentPoly eval(Diagram d) {
    reduce_12(d);
    d = d.canonical();
    auto key = d.encode();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    LaurentPoly result;
    std::int64_t mult = 1;
    const LaurentPoly x = LaurentPoly::monomial(1, 1);
    for (int c : non_descending(d)) {
      Diagram zero = d;
      zero.smooth_unoriented(c, 1);
      Diagram inf = d;
      inf.smooth_unoriented(c, 3);
      result += LaurentPoly::constant(mult) * x * (eval(std::move(zero)) + eval(std::move(inf)));
      mult = -mult;
      d.switch_crossing(c);
    }
    result += LaurentPoly::constant(mult) * unlink(d.component_count());
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  const LaurentPoly& unlink(int k) {
    while (static_cast<int>(unlink_.size()) < k) {
      if (unlink_.empty()) {
        unlink_.push_back(LaurentPoly::constant(1));
      } else {
        LaurentPoly mu = LaurentPoly::monomial(-1, 2) - LaurentPoly::constant(1);
        unlink_.push_back(unlink_.back() * mu);
      }
    }
    return unlink_[static_cast<std::size_t>(k - 1)];
  }

  std::map<std::vector<int>, LaurentPoly> memo_;
  std::vector<LaurentPoly> unlink_;
};

/// Exact division of a by b in Z[s, s^-1]; throws when it is not exact.
LaurentPoly exact_divide(LaurentPoly a, const LaurentPoly& b) {
  LaurentPoly q;
  const int bmax = b.max_exponent();
  const std::int64_t blead = b.coeff(bmax);
  const int floor = a.is_zero() ? 0 : a.min_exponent() - b.min_exponent();
  while (!a.is_zero()) {
    const int e = a.max_exponent() - bmax;
    const std::int64_t c = a.coeff(a.max_exponent());
    if (e < floor || c % blead != 0) throw InvariantError("inexact polynomial division");
    const LaurentPoly t = LaurentPoly::monomial(e, c / blead);
    q += t;
    a -= t * b;
  }
  return q;
}

// Z[zeta_12] with basis 1, z, z^2, z^3 and z^4 = z^2 - 1.
using Cyclo = std::array<std::int64_t, 4>;

Cyclo cyclo_mul(const Cyclo& a, const Cyclo& b) {
  std::array<std::int64_t, 7> w{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) w[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  }
  for (int k = 6; k >= 4; --k) {
    w[static_cast<std::size_t>(k - 2)] += w[static_cast<std::size_t>(k)];
    w[static_cast<std::size_t>(k - 4)] -= w[static_cast<std::size_t>(k)];
    w[static_cast<std::size_t>(k)] = 0;
  }
  return {w[0], w[1], w[2], w[3]};
}

Cyclo zeta_pow(int e) {
  e = ((e % 12) + 12) % 12;
  Cyclo r{1, 0, 0, 0};
  const Cyclo z{0, 1, 0, 0};
  for (int i = 0; i < e; ++i) r = cyclo_mul(r, z);
  return r;
}

Cyclo cyclo_eval(const LaurentPoly& v, int sign) {
  Cyclo acc{0, 0, 0, 0};
  for (auto [e, c] : v.terms()) {
    const Cyclo p = zeta_pow(sign * e);
    for (int i = 0; i < 4; ++i) acc[static_cast<std::size_t>(i)] += c * p[static_cast<std::size_t>(i)];
  }
  return acc;
}

int exact_log(std::int64_t n, std::int64_t base) {
  if (n <= 0) return -1;
  int k = 0;
  while (n % base == 0) {
    n /= base;
    ++k;
  }
  return n == 1 ? k : -1;
}

// Z[phi] with phi^2 = phi + 1, stored as a + b phi.
using Golden = std::pair<std::int64_t, std::int64_t>;

Golden golden_mul(Golden p, Golden q) {
  const auto [a, b] = p;
  const auto [c, d] = q;
  return {a * c + b * d, a * d + b * c + b * d};
}

cpp_int to_big(std::int64_t v) { return cpp_int(v); }

std::int64_t to_small(const cpp_int& v) {
  if (v > cpp_int(INT64_MAX) || v < cpp_int(INT64_MIN)) throw InvariantError("integer overflow in matrix reduction");
  return static_cast<std::int64_t>(v);
}

}  // namespace

LaurentPoly2 homfly(const Diagram& d, int cap) {
  if (d.crossing_count() > cap) {
    throw InvariantError("TooManyCrossings: " + std::to_string(d.crossing_count()) + " > " + std::to_string(cap));
  }
  HomflyEngine engine;
  return engine.eval(d);
}

LaurentPoly2 homfly(const PDCode& pd, int cap) { return homfly(Diagram::from_pd(pd), cap); }

LaurentPoly jones_from_homfly(const LaurentPoly2& h) {
  // l = i s^-2, m = i (s^-1 - s); negative powers of m are cleared and divided out at the end.
  if (h.is_zero()) return {};
  int min_b = 0;
  for (const auto& [e, c] : h.terms()) min_b = std::min(min_b, e.second);
  const LaurentPoly factor = LaurentPoly::monomial(-1, 1) - LaurentPoly::monomial(1, 1);
  LaurentPoly acc;
  for (const auto& [e, c] : h.terms()) {
    const auto [a, b] = e;
    if (((a + b) % 2 + 2) % 2 != 0) throw InvariantError("HOMFLY term with odd total degree");
    const std::int64_t sign = (((a + b) / 2) % 2 == 0) ? 1 : -1;
    acc += LaurentPoly::monomial(-2 * a, sign * c) * factor.pow(b - min_b);
  }
  for (int i = 0; i < -min_b; ++i) acc = exact_divide(acc, factor);
  return acc;
}

int jones_abs_at_omega(const LaurentPoly& v) {
  const Cyclo value = cyclo_eval(v, 1);
  const Cyclo conj = cyclo_eval(v, -1);
  const Cyclo norm = cyclo_mul(value, conj);
  const int k = (norm[1] == 0 && norm[2] == 0 && norm[3] == 0) ? exact_log(norm[0], 3) : -1;
  if (k < 0) throw InvariantError("NotPowerOfSqrt3: |V(omega)|^2 is not a power of 3");
  return k;
}

double jones_abs_at_omega_value(const LaurentPoly& v) {
  const Cyclo norm = cyclo_mul(cyclo_eval(v, 1), cyclo_eval(v, -1));
  return std::sqrt(static_cast<double>(norm[0]));
}

std::int64_t jones_derivative_at_minus_one(const LaurentPoly& v) {
  std::int64_t total = 0;
  for (auto [e2, c] : v.terms()) {
    if (e2 % 2 != 0) throw InvariantError("V'(-1) requires integer t-exponents");
    const int e = e2 / 2;
    // d/dt t^e = e t^(e-1); (-1)^(e-1)
    const std::int64_t sign = ((e - 1) % 2 == 0) ? 1 : -1;
    total += static_cast<std::int64_t>(e) * c * sign;
  }
  return total;
}

LaurentPoly q_polynomial(const Diagram& d, int cap) {
  if (d.crossing_count() > cap) {
    throw InvariantError("TooManyCrossings: " + std::to_string(d.crossing_count()) + " > " + std::to_string(cap));
  }
  QEngine engine;
  return engine.eval(d);
}

LaurentPoly q_polynomial(const PDCode& pd, int cap) { return q_polynomial(Diagram::from_pd(pd), cap); }

int q_abs_at_phibar(const LaurentPoly& q) {
  // x = -phibar = phi - 1 and x^-1 = phi.
  Golden value{0, 0};
  for (auto [e, c] : q.terms()) {
    Golden p{1, 0};
    const Golden step = e >= 0 ? Golden{-1, 1} : Golden{0, 1};
    for (int i = 0; i < (e >= 0 ? e : -e); ++i) p = golden_mul(p, step);
    value.first += c * p.first;
    value.second += c * p.second;
  }
  const Golden sq = golden_mul(value, value);
  const int k = sq.second == 0 ? exact_log(sq.first, 5) : -1;
  if (k < 0) throw InvariantError("NotPowerOfSqrt5: Q(-phibar)^2 is not a power of 5");
  return k;
}

GoeritzData goeritz(const Diagram& d) {
  GoeritzData out;
  const int n = d.crossing_count();
  if (n == 0) {
    // A crossingless diagram of k circles: the double branched cover has H1 = Z^(k-1).
    const int k = std::max(d.loops(), 1);
    out.matrix = IntMatrix(k - 1, k - 1);
    return out;
  }
  if (!d.is_connected()) throw InvariantError("DisconnectedDiagram: Goeritz matrix needs a connected diagram");
  const auto faces = d.faces();
  std::vector<int> face_of(static_cast<std::size_t>(4 * n), -1);
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    for (int corner : faces[static_cast<std::size_t>(f)]) face_of[static_cast<std::size_t>(corner)] = f;
  }
  // Checkerboard colouring: around a crossing the four corners alternate in colour.
  std::vector<int> colour(faces.size(), -1);
  std::vector<int> stack{0};
  colour[0] = 0;
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    for (int corner : faces[static_cast<std::size_t>(f)]) {
      const int base = corner & ~3;
      for (int k = 1; k < 4; ++k) {
        const int other = face_of[static_cast<std::size_t>(base | ((corner + k) & 3))];
        const int want = colour[static_cast<std::size_t>(f)] ^ (k & 1);
        if (colour[static_cast<std::size_t>(other)] == -1) {
          colour[static_cast<std::size_t>(other)] = want;
          stack.push_back(other);
        } else if (colour[static_cast<std::size_t>(other)] != want) {
          throw InvariantError("diagram admits no checkerboard colouring");
        }
      }
    }
  }
  // Shaded faces are those of colour 1.
  std::vector<int> region(faces.size(), -1);
  int regions = 0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (colour[f] == 1) region[f] = regions++;
  }
  IntMatrix full(regions, regions);
  int correction = 0;
  for (int c = 0; c < n; ++c) {
    const int k = colour[static_cast<std::size_t>(face_of[static_cast<std::size_t>(4 * c)])] == 1 ? 0 : 1;
    const int ri = region[static_cast<std::size_t>(face_of[static_cast<std::size_t>(4 * c + k)])];
    const int rj = region[static_cast<std::size_t>(face_of[static_cast<std::size_t>(4 * c + k + 2)])];
    // Incidence number: the shaded corners {0,2} sit to the right of the incoming under-strand.
    const int eta = k == 0 ? 1 : -1;
    if (ri != rj) {
      full.at(ri, rj) -= eta;
      full.at(rj, ri) -= eta;
      full.at(ri, ri) += eta;
      full.at(rj, rj) += eta;
    }
    // The oriented smoothing merges corners {1,3} at a positive crossing and {0,2} at a negative
    // one; the crossing is of type II when the merged corners are the unshaded ones. (Both
    // conventions were checked against the right trefoil and all tabulated signatures.)
    const int merged = d.sign(c) > 0 ? 1 : 0;
    if (merged != k) correction += eta;
  }
  IntMatrix g(regions - 1, regions - 1);
  for (int i = 0; i + 1 < regions; ++i) {
    for (int j = 0; j + 1 < regions; ++j) g.at(i, j) = full.at(i, j);
  }
  out.matrix = std::move(g);
  out.correction = correction;
  return out;
}

std::vector<std::int64_t> smith_normal_form(const IntMatrix& m) {
  const int rows = m.rows;
  const int cols = m.cols;
  std::vector<std::vector<cpp_int>> a(static_cast<std::size_t>(rows), std::vector<cpp_int>(static_cast<std::size_t>(cols)));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = to_big(m.at(i, j));
  }
  auto A = [&](int i, int j) -> cpp_int& { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  std::vector<cpp_int> diag;
  const int r = std::min(rows, cols);
  for (int t = 0; t < r; ++t) {
    for (;;) {
      // Pivot: smallest non-zero absolute value in the remaining block.
      int pi = -1;
      int pj = -1;
      for (int i = t; i < rows; ++i) {
        for (int j = t; j < cols; ++j) {
          if (A(i, j) != 0 && (pi < 0 || abs(A(i, j)) < abs(A(pi, pj)))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi < 0) break;
      std::swap(a[static_cast<std::size_t>(t)], a[static_cast<std::size_t>(pi)]);
      for (int i = 0; i < rows; ++i) std::swap(A(i, t), A(i, pj));
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        if (A(i, t) == 0) continue;
        const cpp_int q = A(i, t) / A(t, t);
        for (int j = t; j < cols; ++j) A(i, j) -= q * A(t, j);
        if (A(i, t) != 0) clean = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        if (A(t, j) == 0) continue;
        const cpp_int q = A(t, j) / A(t, t);
        for (int i = t; i < rows; ++i) A(i, j) -= q * A(i, t);
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any row whose entries are not multiples of the pivot into row t.
      bool divisible = true;
      for (int i = t + 1; i < rows && divisible; ++i) {
        for (int j = t + 1; j < cols; ++j) {
          if (A(i, j) % A(t, t) != 0) {
            for (int jj = t; jj < cols; ++jj) A(t, jj) += A(i, jj);
            divisible = false;
            break;
          }
        }
      }
      if (divisible) break;
    }
    diag.push_back(abs(A(t, t)));
  }
  std::vector<std::int64_t> out;
  for (const auto& v : diag) {
    if (v != 0) out.push_back(to_small(v));
  }
  for (const auto& v : diag) {
    if (v == 0) out.push_back(0);
  }
  return out;
}

std::int64_t determinant(const IntMatrix& m) {
  if (m.rows != m.cols) throw InvariantError("determinant of a non-square matrix");
  const int n = m.rows;
  if (n == 0) return 1;
  // Fraction-free Bareiss elimination.
  std::vector<std::vector<cpp_int>> a(static_cast<std::size_t>(n), std::vector<cpp_int>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = to_big(m.at(i, j));
  }
  auto A = [&](int i, int j) -> cpp_int& { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  cpp_int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i) {
        if (A(i, k) != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row < 0) return 0;
      std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(swap_row)]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) A(i, j) = (A(i, j) * A(k, k) - A(i, k) * A(k, j)) / prev;
    }
    prev = A(k, k);
  }
  return to_small(A(n - 1, n - 1)) * sign;
}

int symmetric_signature(const IntMatrix& m) {
  const int n = m.rows;
  std::vector<std::vector<cpp_rational>> a(static_cast<std::size_t>(n), std::vector<cpp_rational>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cpp_rational(m.at(i, j));
  }
  auto A = [&](int i, int j) -> cpp_rational& { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  int signature = 0;
  for (int k = 0; k < n; ++k) {
    // Congruence transformations only, so inertia is preserved.
    int p = -1;
    for (int i = k; i < n; ++i) {
      if (A(i, i) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) {
      int oi = -1;
      int oj = -1;
      for (int i = k; i < n && oi < 0; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (A(i, j) != 0) {
            oi = i;
            oj = j;
            break;
          }
        }
      }
      if (oi < 0) break;  // remaining block is zero
      for (int j = 0; j < n; ++j) A(oi, j) += A(oj, j);
      for (int i = 0; i < n; ++i) A(i, oi) += A(i, oj);
      p = oi;
    }
    if (p != k) {
      std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(p)]);
      for (int i = 0; i < n; ++i) std::swap(A(i, k), A(i, p));
    }
    const cpp_rational pivot = A(k, k);
    signature += pivot > 0 ? 1 : -1;
    for (int i = k + 1; i < n; ++i) {
      if (A(i, k) == 0) continue;
      const cpp_rational f = A(i, k) / pivot;
      for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
    }
    for (int j = k + 1; j < n; ++j) A(k, j) = 0;
    for (int i = k + 1; i < n; ++i) A(i, k) = 0;
  }
  return signature;
}

int arf_from_det(std::int64_t det) {
  const std::int64_t r = ((det % 8) + 8) % 8;
  if (r == 1 || r == 7) return 0;
  if (r == 3 || r == 5) return 1;
  return -1;
}

InvariantSet invariant_set(const Diagram& input) {
  Diagram d = input;
  reduce_12(d);
  InvariantSet s;
  s.n_components = d.component_count();
  const GoeritzData g = goeritz(d);
  s.sigma = symmetric_signature(g.matrix) - g.correction;
  s.det = std::abs(determinant(g.matrix));
  s.arf = arf_from_det(s.det);
  for (auto f : smith_normal_form(g.matrix)) {
    if (f != 1) s.invariant_factors.push_back(f);
  }
  for (auto f : s.invariant_factors) {
    ++s.e2;
    if (f % 3 == 0) ++s.delta3;
    if (f % 5 == 0) ++s.rank5;
  }
  return s;
}

InvariantSet invariant_set(const PDCode& pd) { return invariant_set(Diagram::from_pd(pd)); }

}  // namespace knotband
