#include "knotband/obstructions.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <stdexcept>

namespace knotband {
namespace {

using json = nlohmann::ordered_json;

CriterionResult make(const std::string& name, const std::string& citation) {
  CriterionResult r;
  r.criterion = name;
  r.citation = citation;
  return r;
}

CriterionResult not_applicable(CriterionResult r, const std::string& why) {
  r.status = Status::NotApplicable;
  r.unmet_hypothesis = why;
  return r;
}

CriterionResult decide(CriterionResult r, bool obstructed) {
  r.status = obstructed ? Status::Obstructed : Status::NotObstructed;
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

bool is_square_free(std::int64_t m) {
  m = std::llabs(m);
  if (m == 0) return false;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % (p * p) == 0) return false;
    if (m % p == 0) m /= p;
  }
  return true;
}

bool is_quadratic_residue(std::int64_t a, std::int64_t m) {
  // a = s^2 (mod m) for some integer s in [0, m).
  if (m == 1) return true;
  const std::int64_t target = mod(a, m);
  for (std::int64_t s = 0; s < m; ++s) {
    if ((s * s) % m == target) return true;
  }
  return false;
}

std::optional<int> parse_torus(const std::string& name) {
  static const std::regex re(R"(T\(2,\s*(-?\d+)\))");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return std::stoi(m[1]);
}

const BandSide* unknot_partner(const BandSide& k, const BandSide& kp) {
  if (kp.is_unknot) return &k;
  if (k.is_unknot) return &kp;
  return nullptr;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Obstructed: return "OBSTRUCTED";
    case Status::NotObstructed: return "NOT_OBSTRUCTED";
    case Status::NotApplicable: return "NOT_APPLICABLE";
  }
  return "NOT_APPLICABLE";
}

// Sides ---------------------------------------------------------------------------------------

BandSide side_from_diagram(const Diagram& input, const std::string& name) {
  const Diagram d = simplify(input);
  BandSide s;
  s.name = name;
  const InvariantSet inv = invariant_set(d);
  s.n_components = d.component_count();
  s.det = inv.det;
  s.sigma = inv.sigma;
  s.arf = inv.arf;
  s.e2 = inv.e2;
  s.delta3 = inv.delta3;
  s.rank5 = inv.rank5;
  s.is_unknot = s.n_components == 1 && d.crossing_count() == 0;
  if (s.is_unknot) s.torus_param = 1;

  // Signatures for every relative orientation: reverse each subset of the crossed components
  // other than the first.
  const auto starts = d.component_starts();
  const int extra = std::max(0, static_cast<int>(starts.size()) - 1);
  for (int mask = 0; mask < (1 << extra); ++mask) {
    Diagram o = d;
    for (int b = 0; b < extra; ++b) {
      if (mask & (1 << b)) o.reverse_component(starts[static_cast<std::size_t>(b) + 1]);
    }
    const int sig = mask == 0 ? s.sigma : invariant_set(o).sigma;
    if (std::find(s.oriented_signatures.begin(), s.oriented_signatures.end(), sig) == s.oriented_signatures.end()) {
      s.oriented_signatures.push_back(sig);
    }
  }
  std::sort(s.oriented_signatures.begin(), s.oriented_signatures.end());

  if (d.crossing_count() <= kHomflyCrossingCap) {
    const LaurentPoly v = jones_from_homfly(homfly(d));
    s.jones_omega_k = jones_abs_at_omega(v);
    if (s.n_components == 1) s.jones_derivative = jones_derivative_at_minus_one(v);
  }
  if (d.crossing_count() <= kQCrossingCap) s.q_phibar_k = q_abs_at_phibar(q_polynomial(d));
  return s;
}

BandSide side_from_record(const KnotRecord& r) {
  BandSide s = side_from_diagram(Diagram::from_pd(r.pd), r.name);
  s.u = r.u;
  s.u2 = r.u2;
  s.qa = r.qa;
  s.torus_param = r.torus_param;
  s.is_unknot = r.name == "0_1";
  return s;
}

BandSide side_from_torus_link(int n) {
  if (n % 2 != 0) throw std::invalid_argument("T(2,n) links need even n");
  BandSide s = side_from_diagram(torus_2n_diagram(n, true), "T(2," + std::to_string(n) + ")");
  s.torus_param = n;
  return s;
}

BandSide resolve_side(const std::string& name, const KnotTable& table) {
  if (const KnotRecord* r = table.find(name)) return side_from_record(*r);
  if (name == "unknot") return side_from_record(table.at("0_1"));
  if (name == "unlink") return side_from_torus_link(0);
  if (auto n = parse_torus(name)) {
    if (*n % 2 == 0) return side_from_torus_link(*n);
    if (std::abs(*n) == 1) {
      BandSide s = side_from_record(table.at("0_1"));
      s.torus_param = *n;
      return s;
    }
    for (const auto& r : table.records()) {
      if (r.torus_param && *r.torus_param == *n) {
        BandSide s = side_from_record(r);
        s.name = name + " = " + r.name;
        return s;
      }
    }
    throw std::invalid_argument("T(2," + std::to_string(*n) + ") is outside the knot table");
  }
  throw std::invalid_argument("unknown knot or link name: " + name);
}

// Criteria ------------------------------------------------------------------------------------

CriterionResult criterion_e2(const BandSide& k, const BandSide& kp, BandKind mode) {
  auto r = make("e2", "Abe-Kanenobu Lemma 5.1: |e_2(K) - e_2(K')| <= 1 under an H(2)-move");
  if (mode != BandKind::NonCoherent) return not_applicable(r, "non-coherent banding only");
  r.witness = {{"e2_K", k.e2}, {"e2_K_prime", kp.e2}, {"bound", 1}};
  return decide(r, std::abs(k.e2 - kp.e2) > 1);
}

CriterionResult criterion_jones_omega(const BandSide& k, const BandSide& kp, BandKind) {
  auto r = make("jones_omega", "Abe-Kanenobu Theorem 5.5: |V(L;w)/V(L';w)| in {1, sqrt3^(+-1)}");
  r.witness = {{"delta_K", k.delta3}, {"delta_K_prime", kp.delta3}};
  if (k.jones_omega_k) r.witness["jones_omega_exponent_K"] = *k.jones_omega_k;
  if (kp.jones_omega_k) r.witness["jones_omega_exponent_K_prime"] = *kp.jones_omega_k;
  return decide(r, std::abs(k.delta3 - kp.delta3) > 1);
}

CriterionResult criterion_q_phibar(const BandSide& k, const BandSide& kp, BandKind) {
  auto r = make("q_phibar", "Abe-Kanenobu Theorem 5.5: |Q(L;-phibar)/Q(L';-phibar)| in {1, sqrt5^(+-1)}");
  r.witness = {{"r_K", k.rank5}, {"r_K_prime", kp.rank5}};
  if (k.q_phibar_k) r.witness["q_phibar_exponent_K"] = *k.q_phibar_k;
  if (kp.q_phibar_k) r.witness["q_phibar_exponent_K_prime"] = *kp.q_phibar_k;
  return decide(r, std::abs(k.rank5 - kp.rank5) > 1);
}

CriterionResult criterion_murasugi(const BandSide& k, const BandSide& kp, BandKind mode) {
  auto r = make("murasugi", "Murasugi: |sigma(L) - sigma(L')| <= 1 under coherent band surgery");
  if (mode != BandKind::Coherent) return not_applicable(r, "coherent banding only");
  if (std::abs(k.n_components - kp.n_components) != 1) {
    return not_applicable(r, "coherent banding changes the component count by one");
  }
  int best = 1 << 30;
  for (int a : k.oriented_signatures) {
    for (int b : kp.oriented_signatures) best = std::min(best, std::abs(a - b));
  }
  r.witness = {{"signatures_K", k.oriented_signatures},
               {"signatures_K_prime", kp.oriented_signatures},
               {"min_abs_difference", best}};
  return decide(r, best > 1);
}

CriterionResult criterion_kanenobu_qr(const BandSide& k, const BandSide& kp, BandKind) {
  auto r = make("kanenobu_qr", "Kanenobu Theorem 2.2: 2 det(L) = +-s^2 mod det(K) when u(K) = 1");
  bool applicable = false;
  bool obstructed = false;
  json checks = json::array();
  for (const auto& [knot, other] : {std::pair{&k, &kp}, std::pair{&kp, &k}}) {
    if (knot->n_components != 1 || !knot->u || *knot->u != 1) continue;
    applicable = true;
    const std::int64_t m = knot->det;
    const bool plus = is_quadratic_residue(2 * other->det, m);
    const bool minus = is_quadratic_residue(-2 * other->det, m);
    checks.push_back({{"K", knot->name},
                      {"det_K", m},
                      {"det_L", other->det},
                      {"residue_search", json::array({0, m - 1})},
                      {"plus_2det_is_square", plus},
                      {"minus_2det_is_square", minus}});
    obstructed = obstructed || (!plus && !minus);
  }
  if (!applicable) return not_applicable(r, "neither side is a knot with unknotting number one");
  r.witness = {{"checks", checks}};
  return decide(r, obstructed);
}

CriterionResult criterion_yasuhara(const BandSide& k, const BandSide& kp, BandKind mode) {
  auto r = make("yasuhara", "Yasuhara Proposition 5.1: |8x + 4 Arf(K) - sigma(K)| <= 2 for some integer x");
  if (mode != BandKind::NonCoherent) return not_applicable(r, "non-coherent banding only");
  const BandSide* knot = unknot_partner(k, kp);
  if (!knot) return not_applicable(r, "neither side is the unknot");
  if (knot->n_components != 1) return not_applicable(r, "the other side is not a knot");
  const int val = 4 * knot->arf - knot->sigma;
  // The nearest multiple of 8 to -val minimizes |8x + val|.
  const int x = static_cast<int>(std::lround(-val / 8.0));
  int best_x = x;
  for (int c : {x - 1, x, x + 1}) {
    if (std::abs(8 * c + val) < std::abs(8 * best_x + val)) best_x = c;
  }
  r.witness = {{"K", knot->name},
               {"sigma", knot->sigma},
               {"arf", knot->arf},
               {"best_x", best_x},
               {"min_abs_value", std::abs(8 * best_x + val)}};
  return decide(r, std::abs(8 * best_x + val) > 2);
}

CriterionResult criterion_km45(const BandSide& k, const BandSide& kp, BandKind mode) {
  auto r = make("km45", "Kanenobu-Miyazawa Theorem 4.5: V'(K;-1) = (-1)^Arf(K) 8 eps (mod 24)");
  if (mode != BandKind::NonCoherent) return not_applicable(r, "non-coherent banding only");
  const BandSide* knot = unknot_partner(k, kp);
  if (!knot) return not_applicable(r, "neither side is the unknot");
  if (knot->n_components != 1) return not_applicable(r, "the other side is not a knot");
  if (knot->det % 3 != 0) return not_applicable(r, "det(K) is not divisible by 3");
  const std::int64_t s8 = mod(knot->sigma, 8);
  if (s8 != 2 && s8 != 6) return not_applicable(r, "sigma(K) is not +-2 mod 8");
  if (!knot->jones_derivative) return not_applicable(r, "Jones polynomial not available for this diagram size");
  const int eps = s8 == 2 ? 1 : -1;
  const std::int64_t expected = mod((knot->arf ? -1 : 1) * 8 * eps, 24);
  const std::int64_t actual = mod(*knot->jones_derivative, 24);
  r.witness = {{"K", knot->name},
               {"jones_derivative_at_minus_one", *knot->jones_derivative},
               {"residue_mod_24", actual},
               {"expected_mod_24", expected},
               {"epsilon", eps},
               {"arf", knot->arf}};
  return decide(r, actual != expected);
}

CriterionResult criterion_sigdif(const BandSide& k, const BandSide& kp, BandKind mode) {
  auto r = make("sigdif",
                "quasi-alternating knots with equal square-free determinant: |sigma(K) - sigma(K')| in {0, 8}");
  if (mode != BandKind::NonCoherent) return not_applicable(r, "non-coherent banding only");
  if (k.n_components != 1 || kp.n_components != 1) return not_applicable(r, "both sides must be knots");
  if (!k.qa || !*k.qa || !kp.qa || !*kp.qa) return not_applicable(r, "both knots must be quasi-alternating");
  if (k.det != kp.det) return not_applicable(r, "determinants differ");
  if (!is_square_free(k.det)) return not_applicable(r, "determinant " + std::to_string(k.det) + " is not square-free");
  const int diff = std::abs(k.sigma - kp.sigma);
  r.witness = {{"det", k.det}, {"sigma_K", k.sigma}, {"sigma_K_prime", kp.sigma}, {"abs_difference", diff}};
  return decide(r, diff != 0 && diff != 8);
}

CriterionResult torus_classification(const BandSide& k, const BandSide& kp, BandKind mode) {
  auto r = make("torus_classification",
                "bandings from T(2,3) to T(2,n): non-coherent iff n in {+-1, 3, 7}, coherent iff n in {+-2, 4, -6}");
  const BandSide* trefoil = nullptr;
  const BandSide* other = nullptr;
  if (k.torus_param && std::abs(*k.torus_param) == 3) {
    trefoil = &k;
    other = &kp;
  } else if (kp.torus_param && std::abs(*kp.torus_param) == 3) {
    trefoil = &kp;
    other = &k;
  }
  if (!trefoil) return not_applicable(r, "neither side is T(2,3) or its mirror");
  if (!other->torus_param) return not_applicable(r, "the other side is not in the T(2,n) family");
  const bool mirrored = *trefoil->torus_param < 0;
  const int n = mirrored ? -*other->torus_param : *other->torus_param;
  std::vector<int> allowed;
  if (mode == BandKind::NonCoherent) {
    if (n % 2 == 0) return not_applicable(r, "non-coherent banding needs T(2,n) with n odd");
    allowed = {-1, 1, 3, 7};
  } else {
    if (n % 2 != 0) return not_applicable(r, "coherent banding needs T(2,n) with n even");
    allowed = {-6, -2, 2, 4};
  }
  r.witness = {{"n", n}, {"mirrored_query", mirrored}, {"allowed", allowed}};
  return decide(r, std::find(allowed.begin(), allowed.end(), n) == allowed.end());
}

// Verdict -------------------------------------------------------------------------------------

const CriterionResult& Verdict::at(const std::string& criterion) const {
  for (const auto& c : criteria) {
    if (c.criterion == criterion) return c;
  }
  throw std::out_of_range("no criterion " + criterion);
}

std::vector<std::string> Verdict::obstructing() const {
  std::vector<std::string> out;
  for (const auto& c : criteria) {
    if (c.status == Status::Obstructed) out.push_back(c.criterion);
  }
  return out;
}

json Verdict::to_json() const {
  json j;
  j["query"] = {{"K", k}, {"K_prime", k_prime}, {"mode", to_string(mode)}};
  j["overall"] = to_string(overall);
  j["obstructed_by"] = obstructing();
  json list = json::array();
  for (const auto& c : criteria) {
    json e = {{"criterion", c.criterion}, {"status", to_string(c.status)}};
    if (c.status == Status::NotApplicable) {
      e["unmet_hypothesis"] = c.unmet_hypothesis;
    } else {
      e["witness"] = c.witness;
    }
    e["citation"] = c.citation;
    list.push_back(e);
  }
  j["criteria"] = list;
  j["note"] = "criteria are necessary conditions; NOT_OBSTRUCTED does not assert that a band exists";
  return j;
}

Verdict run_all(const BandSide& k, const BandSide& kp, BandKind mode) {
  static constexpr Criterion kCriteria[] = {criterion_e2,       criterion_jones_omega, criterion_q_phibar,
                                            criterion_murasugi, criterion_kanenobu_qr, criterion_yasuhara,
                                            criterion_km45,     criterion_sigdif,      torus_classification};
  Verdict v;
  v.k = k.name;
  v.k_prime = kp.name;
  v.mode = mode;
  for (Criterion c : kCriteria) v.criteria.push_back(c(k, kp, mode));
  v.overall = v.obstructing().empty() ? Status::NotObstructed : Status::Obstructed;
  return v;
}

Verdict run_all(const std::string& k, const std::string& kp, const KnotTable& table, BandKind mode) {
  return run_all(resolve_side(k, table), resolve_side(kp, table), mode);
}

}  // namespace knotband
