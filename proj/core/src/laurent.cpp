#include "knotband/laurent.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace knotband {
namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad integer in polynomial: '" + std::string(s) + "'");
  }
  return v;
}

template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) fn(text.substr(i, j - i));
    i = j;
  }
}

}  // namespace

LaurentPoly LaurentPoly::monomial(int exponent, std::int64_t coeff) {
  LaurentPoly p;
  p.add_term(exponent, coeff);
  return p;
}

std::int64_t LaurentPoly::coeff(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? 0 : it->second;
}

int LaurentPoly::min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int LaurentPoly::max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

void LaurentPoly::add_term(int exponent, std::int64_t coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  for (auto [e, c] : other.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
  for (auto [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly out;
  for (auto [ea, ca] : a.terms_) {
    for (auto [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  }
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out;
  for (auto [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

LaurentPoly LaurentPoly::inverted() const {
  LaurentPoly out;
  for (auto [e, c] : terms_) out.terms_.emplace(-e, c);
  return out;
}

LaurentPoly LaurentPoly::pow(int n) const {
  if (n < 0) throw std::invalid_argument("negative power of a Laurent polynomial");
  LaurentPoly out = constant(1);
  for (int i = 0; i < n; ++i) out = out * *this;
  return out;
}

std::string LaurentPoly::serialize() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [e, c] : terms_) {
    if (!first) os << ' ';
    os << e << ':' << c;
    first = false;
  }
  return os.str();
}

LaurentPoly LaurentPoly::parse(std::string_view text) {
  LaurentPoly p;
  for_each_token(text, [&](std::string_view tok) {
    if (tok == "0") return;
    auto colon = tok.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("bad polynomial token");
    p.add_term(static_cast<int>(parse_int(tok.substr(0, colon))), parse_int(tok.substr(colon + 1)));
  });
  return p;
}

LaurentPoly2 LaurentPoly2::monomial(int l_exp, int m_exp, std::int64_t coeff) {
  LaurentPoly2 p;
  p.add_term(l_exp, m_exp, coeff);
  return p;
}

std::int64_t LaurentPoly2::coeff(int l_exp, int m_exp) const {
  auto it = terms_.find({l_exp, m_exp});
  return it == terms_.end() ? 0 : it->second;
}

void LaurentPoly2::add_term(int l_exp, int m_exp, std::int64_t coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace({l_exp, m_exp}, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPoly2& LaurentPoly2::operator+=(const LaurentPoly2& other) {
  for (const auto& [e, c] : other.terms_) add_term(e.first, e.second, c);
  return *this;
}

LaurentPoly2& LaurentPoly2::operator-=(const LaurentPoly2& other) {
  for (const auto& [e, c] : other.terms_) add_term(e.first, e.second, -c);
  return *this;
}

LaurentPoly2 operator*(const LaurentPoly2& a, const LaurentPoly2& b) {
  LaurentPoly2 out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      out.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
    }
  }
  return out;
}

LaurentPoly2 LaurentPoly2::l_inverted() const {
  LaurentPoly2 out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(Exponent{-e.first, e.second}, c);
  return out;
}

LaurentPoly2 LaurentPoly2::pow(int n) const {
  if (n < 0) throw std::invalid_argument("negative power of a Laurent polynomial");
  LaurentPoly2 out = constant(1);
  for (int i = 0; i < n; ++i) out = out * *this;
  return out;
}

bool LaurentPoly2::divide(const LaurentPoly2& a, const LaurentPoly2& b, LaurentPoly2& quotient) {
  quotient = LaurentPoly2();
  if (b.is_zero()) return false;
  if (a.is_zero()) return true;
  // Lex order on (l, m); an exact quotient has l-exponents no lower than this bound.
  const auto [b_lead, b_coeff] = *b.terms_.rbegin();
  const int min_l = a.terms_.begin()->first.first - b.terms_.begin()->first.first;
  auto min_m = [](const LaurentPoly2& p) {
    int m = p.terms_.begin()->first.second;
    for (const auto& [e, c] : p.terms_) m = std::min(m, e.second);
    return m;
  };
  const int min_qm = min_m(a) - min_m(b);
  LaurentPoly2 rem = a;
  while (!rem.is_zero()) {
    const auto [r_lead, r_coeff] = *rem.terms_.rbegin();
    const int ql = r_lead.first - b_lead.first;
    const int qm = r_lead.second - b_lead.second;
    if (ql < min_l || qm < min_qm || r_coeff % b_coeff != 0) return false;
    const LaurentPoly2 q = monomial(ql, qm, r_coeff / b_coeff);
    quotient += q;
    rem -= q * b;
  }
  return true;
}

std::string LaurentPoly2::serialize() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << ' ';
    os << e.first << ',' << e.second << ':' << c;
    first = false;
  }
  return os.str();
}

LaurentPoly2 LaurentPoly2::parse(std::string_view text) {
  LaurentPoly2 p;
  for_each_token(text, [&](std::string_view tok) {
    if (tok == "0") return;
    auto comma = tok.find(',');
    auto colon = tok.find(':');
    if (comma == std::string_view::npos || colon == std::string_view::npos || comma > colon) {
      throw std::invalid_argument("bad polynomial token");
    }
    p.add_term(static_cast<int>(parse_int(tok.substr(0, comma))),
               static_cast<int>(parse_int(tok.substr(comma + 1, colon - comma - 1))),
               parse_int(tok.substr(colon + 1)));
  });
  return p;
}

}  // namespace knotband
