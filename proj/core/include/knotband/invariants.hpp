#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "knotband/diagram.hpp"
#include "knotband/laurent.hpp"

namespace knotband {

class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense integer matrix, row-major.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> data;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0) {}
  std::int64_t& at(int r, int c) { return data[static_cast<std::size_t>(r * cols + c)]; }
  std::int64_t at(int r, int c) const { return data[static_cast<std::size_t>(r * cols + c)]; }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

inline constexpr int kHomflyCrossingCap = 16;
inline constexpr int kQCrossingCap = 12;

/// HOMFLY-PT polynomial in the convention l P(L+) + l^-1 P(L-) + m P(L0) = 0, P(unknot) = 1.
/// Throws InvariantError (TooManyCrossings) above `cap`.
LaurentPoly2 homfly(const Diagram& d, int cap = kHomflyCrossingCap);
LaurentPoly2 homfly(const PDCode& pd, int cap = kHomflyCrossingCap);

/// Jones polynomial V in the variable s = t^(1/2): exponent 2k stands for t^k.
LaurentPoly jones_from_homfly(const LaurentPoly2& h);

/// Exact |V(e^{i pi/3})| = sqrt(3)^k; returns k. Throws InvariantError (NotPowerOfSqrt3).
int jones_abs_at_omega(const LaurentPoly& v_doubled);
/// |V(e^{i pi/3})| as a real number.
double jones_abs_at_omega_value(const LaurentPoly& v_doubled);

/// V'(-1) for a knot (Jones in doubled exponents, all even). Throws InvariantError for odd exponents.
std::int64_t jones_derivative_at_minus_one(const LaurentPoly& v_doubled);

/// Brandt-Lickorish-Millett-Ho Q polynomial: Q(L+) + Q(L-) = x (Q(L0) + Q(L_inf)), Q(unknot) = 1.
LaurentPoly q_polynomial(const Diagram& d, int cap = kQCrossingCap);
LaurentPoly q_polynomial(const PDCode& pd, int cap = kQCrossingCap);

/// Exact |Q(-phibar)| = sqrt(5)^k with phibar = (1 - sqrt 5)/2; returns k. Throws InvariantError
/// (NotPowerOfSqrt5).
int q_abs_at_phibar(const LaurentPoly& q);

struct GoeritzData {
  IntMatrix matrix;
  int correction = 0;  // signature = signature(matrix) - correction
};

/// Goeritz matrix of a checkerboard colouring and the Gordon-Litherland correction term.
/// Throws InvariantError (DisconnectedDiagram) for split diagrams.
GoeritzData goeritz(const Diagram& d);

/// Invariant factors d1 | d2 | ... (non-negative; zeros last) of an integer matrix.
std::vector<std::int64_t> smith_normal_form(const IntMatrix& m);

/// Exact determinant and signature of a symmetric integer matrix.
std::int64_t determinant(const IntMatrix& m);
int symmetric_signature(const IntMatrix& m);

struct InvariantSet {
  std::int64_t det = 1;
  int sigma = 0;
  int arf = 0;  // -1 when det is even (undefined)
  int e2 = 0;
  int delta3 = 0;
  int rank5 = 0;
  int n_components = 1;
  std::vector<std::int64_t> invariant_factors;  // non-unit factors: H1 of the double branched cover
};

InvariantSet invariant_set(const Diagram& d);
InvariantSet invariant_set(const PDCode& pd);

/// Arf invariant from the determinant: 0 if det = +-1 (mod 8), 1 if det = +-3 (mod 8), -1 if even.
int arf_from_det(std::int64_t det);

}  // namespace knotband
