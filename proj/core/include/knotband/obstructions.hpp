#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "knotband/diagram.hpp"
#include "knotband/knot_table.hpp"
#include "knotband/reconnection.hpp"

namespace knotband {

enum class Status { Obstructed, NotObstructed, NotApplicable };
std::string to_string(Status s);

/// Everything the banding criteria consume about one side of a query.
struct BandSide {
  std::string name;
  int n_components = 1;
  std::int64_t det = 1;
  int sigma = 0;
  int arf = 0;  // -1 for links with even determinant
  int e2 = 0;
  int delta3 = 0;
  int rank5 = 0;
  /// Signatures over all orientations of the components (one entry for a knot).
  std::vector<int> oriented_signatures;
  std::optional<int> u;
  std::optional<int> u2;
  std::optional<bool> qa;
  std::optional<int> torus_param;  // n when the side is T(2, n)
  bool is_unknot = false;
  /// Exponent k of |V(omega)| = sqrt(3)^k and of |Q(-phibar)| = sqrt(5)^k when computable.
  std::optional<int> jones_omega_k;
  std::optional<int> q_phibar_k;
  std::optional<std::int64_t> jones_derivative;  // V'(-1), knots only
};

BandSide side_from_record(const KnotRecord& r);
/// Side computed from a diagram; two-component diagrams get both orientation signatures.
BandSide side_from_diagram(const Diagram& d, const std::string& name = "pd");
/// T(2, n) for even n (two components; n = 0 is the split unlink).
BandSide side_from_torus_link(int n);
/// Table names ("5_1*"), torus names ("T(2,-6)"), or "unlink". Throws std::invalid_argument.
BandSide resolve_side(const std::string& name, const KnotTable& table);

struct CriterionResult {
  std::string criterion;
  Status status = Status::NotApplicable;
  nlohmann::ordered_json witness = nlohmann::ordered_json::object();
  std::string unmet_hypothesis;  // set exactly when NotApplicable
  std::string citation;
};

using Criterion = CriterionResult (*)(const BandSide&, const BandSide&, BandKind);

CriterionResult criterion_e2(const BandSide& k, const BandSide& kp, BandKind mode);
CriterionResult criterion_jones_omega(const BandSide& k, const BandSide& kp, BandKind mode);
CriterionResult criterion_q_phibar(const BandSide& k, const BandSide& kp, BandKind mode);
CriterionResult criterion_murasugi(const BandSide& k, const BandSide& kp, BandKind mode);
CriterionResult criterion_kanenobu_qr(const BandSide& k, const BandSide& kp, BandKind mode);
CriterionResult criterion_yasuhara(const BandSide& k, const BandSide& kp, BandKind mode);
CriterionResult criterion_km45(const BandSide& k, const BandSide& kp, BandKind mode);
CriterionResult criterion_sigdif(const BandSide& k, const BandSide& kp, BandKind mode);
CriterionResult torus_classification(const BandSide& k, const BandSide& kp, BandKind mode);

struct Verdict {
  std::string k;
  std::string k_prime;
  BandKind mode = BandKind::NonCoherent;
  std::vector<CriterionResult> criteria;
  Status overall = Status::NotObstructed;

  const CriterionResult& at(const std::string& criterion) const;
  /// Names of the criteria that obstruct.
  std::vector<std::string> obstructing() const;
  nlohmann::ordered_json to_json() const;
};

/// Runs every criterion; overall is Obstructed iff some applicable criterion obstructs.
Verdict run_all(const BandSide& k, const BandSide& kp, BandKind mode = BandKind::NonCoherent);
Verdict run_all(const std::string& k, const std::string& kp, const KnotTable& table,
                BandKind mode = BandKind::NonCoherent);

}  // namespace knotband
