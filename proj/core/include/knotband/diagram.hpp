#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "knotband/lattice.hpp"

namespace knotband {

/// Planar diagram code in the X[a,b,c,d] convention: a is the incoming under-arc and the labels
/// run counterclockwise around the crossing. Arc labels increase along the orientation of each
/// component. Crossingless components are carried in `loops`.
struct PDCode {
  std::vector<std::array<int, 4>> crossings;
  std::vector<int> signs;  // +1 / -1 per crossing
  int loops = 0;
  int n_components = 1;
  int writhe = 0;

  int crossing_count() const { return static_cast<int>(crossings.size()); }
  /// "X[1,5,2,4] X[3,1,4,6] ..." followed by one "Loop[]" token per crossingless component.
  std::string to_string() const;
  /// Accepts the text format above, with or without a surrounding PD[...] and commas between
  /// tokens, as well as the nested-list form [[1,5,2,4],[3,1,4,6],...].
  static PDCode parse(std::string_view text);
};

class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Working representation of an oriented link diagram. Each crossing owns four slots numbered
/// counterclockwise; slot 0 holds the incoming under-arc and slot 2 the outgoing one. On a
/// positive crossing the over-arc enters at slot 3, on a negative one at slot 1. Every slot is
/// paired with exactly one other slot by an arc.
class Diagram {
 public:
  Diagram() = default;
  static Diagram from_pd(const PDCode& pd);
  /// Canonically labelled PD code.
  PDCode to_pd() const;

  static Diagram unknot() {
    Diagram d;
    d.loops_ = 1;
    return d;
  }

  int crossing_count() const { return static_cast<int>(sign_.size()); }
  int sign(int c) const { return sign_[static_cast<std::size_t>(c)]; }
  int link(int slot) const { return link_[static_cast<std::size_t>(slot)]; }
  int loops() const { return loops_; }
  int writhe() const;
  int component_count() const;
  bool is_connected() const;

  /// Crossing change at c.
  void switch_crossing(int c);
  /// Changes every crossing.
  void mirror();
  /// Reverses the orientation of the component through `slot`.
  void reverse_component(int slot);
  /// Replaces crossing c by its orientation-respecting smoothing.
  void smooth_oriented(int c);
  /// Replaces crossing c by the smoothing that joins slot 0 with `partner` (1 or 3), then
  /// re-derives a consistent orientation.
  void smooth_unoriented(int c, int partner);
  /// Deletes crossings by passing both strands straight through (used by Reidemeister removals).
  void remove_passthrough(std::vector<int> crossings);

  /// Slot through which a strand entering at `slot` leaves the same crossing.
  static int through(int slot) { return (slot & ~3) | ((slot + 2) & 3); }

  /// One incoming slot per crossed component, in a deterministic component order.
  std::vector<int> component_starts() const;

  /// Faces as cycles of corners; corner k of crossing c (index 4c+k) lies between slots k and k+1.
  std::vector<std::vector<int>> faces() const;

  /// Relabels crossings so that equal diagrams (up to relabelling) compare equal.
  Diagram canonical() const;
  std::vector<int> encode() const;

  friend bool operator==(const Diagram&, const Diagram&) = default;

  // Reidemeister moves. Each returns true when it changed the diagram.
  bool reduce_r1();
  bool reduce_r2();
  /// Applies an R3 move on the triangle face formed by `corners` if the heights allow it.
  bool apply_r3(const std::vector<int>& corners);
  std::vector<std::vector<int>> r3_candidates() const;

  /// Consistency check of the slot pairing and orientation; throws DiagramError.
  void check() const;

 private:
  void permute_slots(const std::vector<int>& perm);
  void join(int a, int b);
  void delete_crossing(int c);
  void reorient();
  void rebuild_from_incoming(const std::vector<char>& incoming);

  std::vector<int> link_;
  std::vector<std::int8_t> sign_;
  int loops_ = 0;
};

/// Exact projection of a lattice polygon along a generic integer direction derived from
/// `direction_seed`; degenerate directions are retried. Throws DiagramError (NoGenericDirection)
/// after the retry cap.
Diagram project(const LatticePolygon& p, std::uint64_t direction_seed);
/// Projection of several disjoint polygons into one link diagram.
Diagram project_link(const std::vector<LatticePolygon>& components, std::uint64_t direction_seed);

/// Linking number of two disjoint oriented polygons (signed crossings of a generic projection).
/// Coordinates must stay below 2000 in absolute value so that the fixed projection is generic.
int linking_number(const LatticePolygon& a, const LatticePolygon& b);

/// Projection along an explicit direction; std::nullopt when the direction is degenerate.
std::optional<Diagram> project_along(const std::vector<LatticePolygon>& components, Point3 direction);

struct SimplifyOptions {
  int r3_moves_per_crossing = 2;
  int max_rounds = 10;
};

/// Reidemeister I/II reduction to a fixed point interleaved with randomized R3 rounds. The R3
/// exploration is seeded from the canonical form, so the result depends only on the input
/// diagram up to relabelling and simplify(simplify(d)) == simplify(d).
Diagram simplify(const Diagram& d, const SimplifyOptions& opts = {});
PDCode simplify(const PDCode& pd, const SimplifyOptions& opts = {});

}  // namespace knotband
