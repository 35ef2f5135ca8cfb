#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace knotband {

/// Integer Laurent polynomial in one variable. Zero coefficients are never stored.
class LaurentPoly {
 public:
  using Terms = std::map<int, std::int64_t>;

  LaurentPoly() = default;
  static LaurentPoly constant(std::int64_t c) { return monomial(0, c); }
  static LaurentPoly monomial(int exponent, std::int64_t coeff);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::int64_t coeff(int exponent) const;
  int min_exponent() const;
  int max_exponent() const;

  void add_term(int exponent, std::int64_t coeff);

  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly operator-() const;
  bool operator==(const LaurentPoly& other) const = default;

  /// x -> x^-1
  LaurentPoly inverted() const;
  LaurentPoly pow(int n) const;

  /// Canonical form: "e:c" tokens sorted by exponent, "0" for the zero polynomial.
  std::string serialize() const;
  static LaurentPoly parse(std::string_view text);

 private:
  Terms terms_;
};

/// Integer Laurent polynomial in two variables (l, m) used for HOMFLY-PT.
class LaurentPoly2 {
 public:
  using Exponent = std::pair<int, int>;
  using Terms = std::map<Exponent, std::int64_t>;

  LaurentPoly2() = default;
  static LaurentPoly2 constant(std::int64_t c) { return monomial(0, 0, c); }
  static LaurentPoly2 monomial(int l_exp, int m_exp, std::int64_t coeff);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::int64_t coeff(int l_exp, int m_exp) const;

  void add_term(int l_exp, int m_exp, std::int64_t coeff);

  LaurentPoly2& operator+=(const LaurentPoly2& other);
  LaurentPoly2& operator-=(const LaurentPoly2& other);
  friend LaurentPoly2 operator+(LaurentPoly2 a, const LaurentPoly2& b) { return a += b; }
  friend LaurentPoly2 operator-(LaurentPoly2 a, const LaurentPoly2& b) { return a -= b; }
  friend LaurentPoly2 operator*(const LaurentPoly2& a, const LaurentPoly2& b);
  bool operator==(const LaurentPoly2& other) const = default;
  bool operator<(const LaurentPoly2& other) const { return terms_ < other.terms_; }

  /// l -> l^-1, the effect of mirroring on HOMFLY-PT.
  LaurentPoly2 l_inverted() const;
  LaurentPoly2 pow(int n) const;

  /// Exact division; returns false (and leaves quotient unspecified) when b does not divide a.
  static bool divide(const LaurentPoly2& a, const LaurentPoly2& b, LaurentPoly2& quotient);

  /// "a,b:c" tokens sorted by (a, b); "0" for the zero polynomial.
  std::string serialize() const;
  static LaurentPoly2 parse(std::string_view text);

 private:
  Terms terms_;
};

}  // namespace knotband
