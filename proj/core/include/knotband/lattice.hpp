#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace knotband {

struct Point3 {
  int x = 0;
  int y = 0;
  int z = 0;

  friend Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend auto operator<=>(const Point3&, const Point3&) = default;
};

inline int manhattan(Point3 a, Point3 b) {
  auto d = a - b;
  return (d.x < 0 ? -d.x : d.x) + (d.y < 0 ? -d.y : d.y) + (d.z < 0 ? -d.z : d.z);
}

/// The six lattice unit vectors, in the fixed order +x, -x, +y, -y, +z, -z.
inline constexpr Point3 kUnitSteps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                         {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

enum class PolygonError { NotClosed, NotUnitStep, SelfIntersecting, OddLength };

std::string to_string(PolygonError e);

class PolygonException : public std::runtime_error {
 public:
  PolygonException(PolygonError code, const std::string& detail)
      : std::runtime_error(to_string(code) + ": " + detail), code_(code) {}
  PolygonError code() const { return code_; }

 private:
  PolygonError code_;
};

/// Closed self-avoiding polygon on the simple cubic lattice. Vertex i is joined to
/// vertex i+1 (cyclically) by a unit step; the edge with index i starts at vertex i.
class LatticePolygon {
 public:
  /// Checks closure, unit steps, self-avoidance and length; throws PolygonException.
  static LatticePolygon validate(std::vector<Point3> vertices);

  std::span<const Point3> vertices() const { return vertices_; }
  int length() const { return static_cast<int>(vertices_.size()); }
  Point3 vertex(int i) const { return vertices_[static_cast<std::size_t>(wrap(i))]; }
  /// Unit direction of edge i (from vertex i to vertex i+1).
  Point3 edge_direction(int i) const { return vertex(i + 1) - vertex(i); }
  int wrap(int i) const {
    const int n = length();
    return ((i % n) + n) % n;
  }

  /// Same polygon under the map (x, y, z) -> (x, y, -z).
  LatticePolygon mirrored() const;
  /// Same cyclic sequence shifted so the lexicographically smallest vertex comes first and the
  /// traversal direction is fixed by the smaller neighbour; equal iff the polygons coincide as sets
  /// of edges up to starting point and orientation.
  LatticePolygon canonical() const;
  LatticePolygon translated(Point3 offset) const;

  friend bool operator==(const LatticePolygon&, const LatticePolygon&) = default;

 private:
  explicit LatticePolygon(std::vector<Point3> v) : vertices_(std::move(v)) {}
  std::vector<Point3> vertices_;

  friend class BfacfChain;
};

/// Open-addressing set of lattice points. Coordinates must lie in (-2^20, 2^20).
class PointSet {
 public:
  explicit PointSet(std::size_t expected = 64);
  bool contains(Point3 p) const;
  void insert(Point3 p);
  void erase(Point3 p);
  std::size_t size() const { return size_; }
  void clear();

 private:
  static std::uint64_t key(Point3 p);
  std::size_t slot(std::uint64_t k) const;
  void grow();

  std::vector<std::uint64_t> table_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

using Rng = std::mt19937_64;

/// Tallies of proposed and accepted BFACF moves by length change.
struct MoveStats {
  std::uint64_t proposed = 0;
  std::uint64_t accepted_minus = 0;
  std::uint64_t accepted_zero = 0;
  std::uint64_t accepted_plus = 0;
  std::uint64_t cap_rejections = 0;
};

/// Mutable BFACF state: one polygon plus its occupancy set. Moves act on a uniformly chosen
/// edge and a uniformly chosen perpendicular direction; with fugacity b the acceptance
/// probabilities are b^2/(1+3b^2) (+2), (1+b^2)/(2(1+3b^2)) (0) and 1/(1+3b^2) (-2), which leave
/// the length-weighted distribution n * b^n invariant.
class BfacfChain {
 public:
  BfacfChain(const LatticePolygon& seed, double fugacity, int max_length = 1000);

  /// Attempts one move; returns the length change actually applied (-2, 0 or +2; 0 also on
  /// rejection).
  int step(Rng& rng);
  void run(Rng& rng, std::uint64_t moves) {
    for (std::uint64_t i = 0; i < moves; ++i) step(rng);
  }

  int length() const { return static_cast<int>(v_.size()); }
  double fugacity() const { return fugacity_; }
  void set_fugacity(double b);
  int max_length() const { return max_length_; }
  const MoveStats& stats() const { return stats_; }
  LatticePolygon polygon() const { return LatticePolygon(v_); }
  void swap_state(BfacfChain& other);

 private:
  std::vector<Point3> v_;
  PointSet occupied_;
  double fugacity_ = 0.0;
  double p_plus_ = 0.0;
  double p_zero_ = 0.0;
  double p_minus_ = 0.0;
  int max_length_ = 1000;
  MoveStats stats_;
};

/// One BFACF move on a polygon value (convenience form; the chain class is the fast path).
LatticePolygon bfacf_step(const LatticePolygon& p, double fugacity, Rng& rng);

struct ChainParams {
  std::vector<double> fugacities = {0.200, 0.203, 0.206, 0.209, 0.212};
  std::uint64_t swap_interval = 1000;
  std::uint64_t sample_interval = 10000;
  std::uint64_t burn_in = 1000000;
  int max_length = 1000;
  std::uint64_t rng_seed = 1;

  int n_chains() const { return static_cast<int>(fugacities.size()); }
  /// Throws std::invalid_argument when the invariants do not hold for a seed of this length.
  void validate(int seed_length) const;
  /// Flat key=value rendering embedded in every output artifact.
  std::string describe() const;
};

struct ChainDiagnostics {
  std::vector<double> fugacity;
  std::vector<double> mean_length;  // over sample points
  std::vector<std::uint64_t> swaps_proposed;
  std::vector<std::uint64_t> swaps_accepted;  // between chain i and i+1
  std::uint64_t cap_rejections = 0;
  std::uint64_t samples = 0;
};

/// Composite Markov chain: BFACF chains at increasing fugacities with Metropolis replica swaps
/// between neighbours every swap_interval moves. Samples come from chain 0.
class CompositeChain {
 public:
  CompositeChain(const LatticePolygon& seed, ChainParams params);

  /// Advances all chains by sample_interval moves (after a one-time burn-in) and returns the
  /// current conformation of chain 0.
  LatticePolygon next();
  const ChainParams& params() const { return params_; }
  ChainDiagnostics diagnostics() const;
  const BfacfChain& chain(int i) const { return chains_[static_cast<std::size_t>(i)]; }

 private:
  void advance(std::uint64_t moves);
  void attempt_swaps();

  ChainParams params_;
  std::vector<BfacfChain> chains_;
  std::vector<Rng> rngs_;
  Rng swap_rng_;
  bool burned_in_ = false;
  std::uint64_t since_swap_ = 0;
  std::uint64_t swap_round_ = 0;
  std::vector<std::uint64_t> swaps_proposed_;
  std::vector<std::uint64_t> swaps_accepted_;
  std::vector<double> length_sum_;
  std::uint64_t samples_ = 0;
};

/// Convenience stream: collects `count` samples from a composite chain.
std::vector<LatticePolygon> cmc_sample(const LatticePolygon& seed, const ChainParams& params,
                                       std::size_t count);

struct ShrinkOptions {
  double fugacity = 0.03;
  std::uint64_t max_moves = 400000;
  /// Stop after this many moves without a new shortest conformation (scaled by length).
  std::uint64_t patience_per_edge = 400;
  std::uint64_t seed = 0x5eed;
};

/// Low-fugacity BFACF run that returns the shortest conformation visited; never longer than p.
LatticePolygon shrink(const LatticePolygon& p, int target_length, const ShrinkOptions& opts = {});

/// One conformation of a polygon file: `# knot=<name> length=<n>` followed by `x y z` lines.
struct NamedPolygon {
  std::string knot;
  LatticePolygon polygon;
};

/// Reads every conformation of a polygon file. Comment lines other than the `knot=` header are
/// ignored; conformations are separated by blank lines. Throws PolygonException on invalid
/// geometry and std::runtime_error on malformed text.
std::vector<NamedPolygon> read_polygons(std::istream& in);
std::vector<NamedPolygon> read_polygon_file(const std::string& path);

/// Writes conformations in the polygon file format; `metadata` lines (e.g. ChainParams) are
/// emitted first as `# ` comments.
void write_polygons(std::ostream& out, const std::vector<NamedPolygon>& polygons,
                    const std::vector<std::string>& metadata = {});
void write_polygon_file(const std::string& path, const std::vector<NamedPolygon>& polygons,
                        const std::vector<std::string>& metadata = {});

/// Stable 64-bit hash of a polygon's vertex sequence (used to derive deterministic seeds).
std::uint64_t polygon_hash(const LatticePolygon& p);

}  // namespace knotband
