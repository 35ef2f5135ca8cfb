#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "knotband/diagram.hpp"
#include "knotband/invariants.hpp"
#include "knotband/lattice.hpp"
#include "knotband/laurent.hpp"

namespace knotband {

class TableInconsistent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Identity card of one chirality-resolved knot type. Starred names ("5_1*") are mirrors.
struct KnotRecord {
  std::string name;
  int crossing_number = 0;
  bool chiral = false;
  LaurentPoly2 homfly;
  std::int64_t det = 1;
  int sigma = 0;
  int arf = 0;
  std::optional<bool> qa;
  std::optional<int> u;
  std::optional<int> u2;
  std::optional<int> u2_max;  // published upper bound when u2 itself is not known
  std::optional<int> torus_param;  // n when the knot is T(2, n)
  PDCode pd;  // reference diagram (mirrored for starred records)
};

/// Name of the mirror image: "5_1" <-> "5_1*"; amphicheiral names map to themselves when
/// `chiral` is false.
std::string mirror_name(const std::string& name, bool chiral = true);

struct TableValidation {
  int records_checked = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

class KnotTable {
 public:
  /// Loads knot_table.tsv and knot_pd.tsv from `data_dir`. Every record's invariants are
  /// recomputed from its reference PD; throws TableInconsistent on any mismatch.
  static KnotTable load(const std::string& data_dir);
  /// Loads without throwing and reports every mismatch.
  static KnotTable load_unchecked(const std::string& data_dir);
  TableValidation validate() const;

  const std::vector<KnotRecord>& records() const { return records_; }
  const KnotRecord* find(const std::string& name) const;
  const KnotRecord& at(const std::string& name) const;
  std::vector<const KnotRecord*> by_homfly(const LaurentPoly2& h) const;
  /// Records with crossing number <= n, both chiralities.
  std::vector<const KnotRecord*> up_to(int crossings) const;

 private:
  std::vector<KnotRecord> records_;
  std::map<std::string, std::size_t> by_name_;
  std::multimap<LaurentPoly2, std::size_t> by_homfly_;
};

/// Two-component torus link T(2, n) (n even, or n = 0 for the unlink) with oriented signatures.
struct TorusLinkRecord {
  std::string name;  // "T(2,4)", "T(2,-6)"
  int n = 0;
  LaurentPoly2 homfly_parallel;
  LaurentPoly2 homfly_antiparallel;
  int sigma_parallel = 0;
  int sigma_antiparallel = 0;
  std::int64_t det = 0;
};

/// Standard two-strand braid closure diagram of T(2, n); `parallel` selects the orientation in
/// which both strands run the same way.
Diagram torus_2n_diagram(int n, bool parallel = true);
/// T(2, n) link records for even |n| <= max_abs_n, built from diagrams.
std::vector<TorusLinkRecord> torus_link_records(int max_abs_n = 10);

enum class Confidence { Exact, TieBroken, Ambiguous, Unknown };
std::string to_string(Confidence c);

struct IdentificationResult {
  std::string name = "Unknown";
  Confidence confidence = Confidence::Unknown;
  int crossings = -1;  // diagram size at identification
  int retries = 0;
  int n_components = 1;
  std::string diagnostic;
  bool known() const { return confidence == Confidence::Exact || confidence == Confidence::TieBroken; }
};

struct IdentifyOptions {
  int crossing_cap = kHomflyCrossingCap;
  int max_retries = 3;
  std::uint64_t direction_seed = 0x9a0b1c2d;
  ShrinkOptions shrink;
  /// Shrink before the first projection (always done before retries).
  bool shrink_first = false;
};

/// Identification of a simplified diagram against the table.
IdentificationResult identify_diagram(const Diagram& d, const KnotTable& table,
                                      const IdentifyOptions& opts = {});

/// shrink -> project -> simplify -> HOMFLY lookup, tie-broken by (det, signature).
IdentificationResult identify(const LatticePolygon& p, const KnotTable& table, const IdentifyOptions& opts = {});

/// Identification of a multi-component product (coherent banding). Two-component results are
/// matched against T(2, n) links in either orientation.
IdentificationResult identify_link(const std::vector<LatticePolygon>& components, const KnotTable& table,
                                   const IdentifyOptions& opts = {});

}  // namespace knotband
