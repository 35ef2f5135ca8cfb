#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "knotband/lattice.hpp"

namespace knotband {

enum class Alignment { Parallel, Antiparallel };
enum class BandKind { NonCoherent, Coherent };

std::string to_string(Alignment a);
std::string to_string(BandKind k);

class ReplacementCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two polygon edges on opposite sides of a unit lattice square. edge_a < edge_b; the square
/// lists vertex(edge_a), vertex(edge_a + 1) and their translates by the unit offset.
struct SitePair {
  int edge_a = 0;
  int edge_b = 0;
  std::array<Point3, 4> square{};
  Alignment alignment = Alignment::Parallel;
  friend bool operator==(const SitePair&, const SitePair&) = default;
};

struct SiteScan {
  std::vector<SitePair> sites;  // usable sites
  int excluded = 0;             // square pairs whose replacement edges are already polygon edges
};

/// All usable sites plus the count of excluded ones.
SiteScan scan_sites(const LatticePolygon& p);
/// Usable sites only.
std::vector<SitePair> find_sites(const LatticePolygon& p);
/// Usable sites of one alignment.
std::vector<SitePair> find_sites(const LatticePolygon& p, Alignment alignment);

/// The usable site on edges (edge_a, edge_b) in either order, if there is one.
std::optional<SitePair> site_at(const LatticePolygon& p, int edge_a, int edge_b);

struct ReconnectionOutcome {
  std::vector<LatticePolygon> products;
  BandKind kind = BandKind::NonCoherent;
  /// Edge indices of the two inserted edges in each product (for the involution check).
  std::vector<std::array<int, 2>> new_edges;
};

/// Band surgery at `s`: deletes both site edges and inserts the other two sides of the square.
/// Parallel sites give one polygon with the inner arc reversed; antiparallel sites give two.
ReconnectionOutcome reconnect(const LatticePolygon& p, const SitePair& s);

/// One row of the event log. A conformation without a usable site is logged with
/// has_site = false (alignment "none") and no products, so attempted events stay countable.
struct ReconnectionEvent {
  std::string substrate_knot;
  int substrate_length = 0;
  Alignment alignment = Alignment::Parallel;
  bool has_site = true;
  std::vector<std::string> product_knots;
  std::vector<int> product_lengths;
  int chain_id = 0;
  std::uint64_t step = 0;
};

/// Event-log CSV. Multiple products are joined with ';' inside one field.
void write_event_log_header(std::ostream& out);
void write_event(std::ostream& out, const ReconnectionEvent& e);
std::vector<ReconnectionEvent> read_event_log(std::istream& in);

/// One explicit banding realized on a lattice conformation: the band is the unit square of
/// the site on (edge_a, edge_b) and `product` is the expected identification of the result.
struct CorpusBanding {
  std::string id;
  std::string substrate;
  BandKind kind = BandKind::NonCoherent;
  int edge_a = 0;
  int edge_b = 0;
  std::string product;
  LatticePolygon polygon;
};

/// Corpus directory layout: `bandings.tsv` (id, substrate, kind, edge_a, edge_b, product; one
/// row per banding) and `bandings.txt` (polygon file, conformations in the same order).
std::vector<CorpusBanding> read_corpus(const std::string& dir);
void write_corpus(const std::string& dir, const std::vector<CorpusBanding>& bandings,
                  const std::vector<std::string>& metadata = {});

}  // namespace knotband
