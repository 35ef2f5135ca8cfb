#include "knotband/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace knotband {

std::string to_string(PolygonError e) {
  switch (e) {
    case PolygonError::NotClosed: return "NotClosed";
    case PolygonError::NotUnitStep: return "NotUnitStep";
    case PolygonError::SelfIntersecting: return "SelfIntersecting";
    case PolygonError::OddLength: return "OddLength";
  }
  return "PolygonError";
}

namespace {

std::string describe_point(Point3 p) {
  std::ostringstream os;
  os << '(' << p.x << ',' << p.y << ',' << p.z << ')';
  return os.str();
}

}  // namespace

LatticePolygon LatticePolygon::validate(std::vector<Point3> v) {
  const std::size_t n = v.size();
  if (n < 2) throw PolygonException(PolygonError::NotClosed, "fewer than two vertices");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (manhattan(v[i], v[i + 1]) != 1) {
      throw PolygonException(PolygonError::NotUnitStep,
                             "vertex " + std::to_string(i) + " " + describe_point(v[i]) + " to " +
                                 describe_point(v[i + 1]));
    }
  }
  PointSet seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen.contains(v[i])) {
      throw PolygonException(PolygonError::SelfIntersecting,
                             "vertex " + describe_point(v[i]) + " repeated at index " + std::to_string(i));
    }
    seen.insert(v[i]);
  }
  if (n % 2 != 0) throw PolygonException(PolygonError::OddLength, std::to_string(n) + " vertices");
  if (n < 4) throw PolygonException(PolygonError::SelfIntersecting, "a length-2 cycle retraces its edge");
  if (manhattan(v[n - 1], v[0]) != 1) {
    throw PolygonException(PolygonError::NotClosed,
                           describe_point(v[n - 1]) + " is not adjacent to " + describe_point(v[0]));
  }
  return LatticePolygon(std::move(v));
}

LatticePolygon LatticePolygon::mirrored() const {
  std::vector<Point3> out(vertices_.begin(), vertices_.end());
  for (auto& p : out) p.z = -p.z;
  return LatticePolygon(std::move(out));
}

LatticePolygon LatticePolygon::translated(Point3 offset) const {
  std::vector<Point3> out(vertices_.begin(), vertices_.end());
  for (auto& p : out) p = p + offset;
  return LatticePolygon(std::move(out));
}

LatticePolygon LatticePolygon::canonical() const {
  const int n = length();
  const auto start = static_cast<int>(std::min_element(vertices_.begin(), vertices_.end()) - vertices_.begin());
  const bool forward = vertex(start + 1) < vertex(start - 1);
  std::vector<Point3> out;
  out.reserve(vertices_.size());
  for (int k = 0; k < n; ++k) out.push_back(vertex(forward ? start + k : start - k));
  return LatticePolygon(std::move(out));
}

std::uint64_t polygon_hash(const LatticePolygon& p) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto v : p.vertices()) {
    for (int c : {v.x, v.y, v.z}) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

// PointSet ------------------------------------------------------------------------------------

namespace {
constexpr std::int64_t kOffset = 1 << 20;
}

PointSet::PointSet(std::size_t expected) {
  std::size_t cap = 16;
  while (cap < expected * 2) cap <<= 1;
  table_.assign(cap, 0);
  mask_ = cap - 1;
}

std::uint64_t PointSet::key(Point3 p) {
  return (static_cast<std::uint64_t>(p.x + kOffset) << 42) |
         (static_cast<std::uint64_t>(p.y + kOffset) << 21) | static_cast<std::uint64_t>(p.z + kOffset);
}

std::size_t PointSet::slot(std::uint64_t k) const {
  return static_cast<std::size_t>((k * 0x9E3779B97F4A7C15ull) >> 17) & mask_;
}

bool PointSet::contains(Point3 p) const {
  const auto k = key(p);
  for (std::size_t i = slot(k);; i = (i + 1) & mask_) {
    if (table_[i] == k) return true;
    if (table_[i] == 0) return false;
  }
}

void PointSet::insert(Point3 p) {
  if ((size_ + 1) * 2 > table_.size()) grow();
  const auto k = key(p);
  std::size_t i = slot(k);
  while (table_[i] != 0) {
    if (table_[i] == k) return;
    i = (i + 1) & mask_;
  }
  table_[i] = k;
  ++size_;
}

void PointSet::erase(Point3 p) {
  const auto k = key(p);
  std::size_t i = slot(k);
  while (table_[i] != k) {
    if (table_[i] == 0) return;
    i = (i + 1) & mask_;
  }
  // Backward-shift deletion keeps probe sequences intact without tombstones.
  std::size_t hole = i;
  for (std::size_t j = (hole + 1) & mask_; table_[j] != 0; j = (j + 1) & mask_) {
    const std::size_t home = slot(table_[j]);
    const bool movable = (hole <= j) ? (home <= hole || home > j) : (home <= hole && home > j);
    if (movable) {
      table_[hole] = table_[j];
      hole = j;
    }
  }
  table_[hole] = 0;
  --size_;
}

void PointSet::clear() {
  std::fill(table_.begin(), table_.end(), 0);
  size_ = 0;
}

void PointSet::grow() {
  std::vector<std::uint64_t> old;
  old.swap(table_);
  table_.assign(old.size() * 2, 0);
  mask_ = table_.size() - 1;
  size_ = 0;
  for (auto k : old) {
    if (k == 0) continue;
    std::size_t i = slot(k);
    while (table_[i] != 0) i = (i + 1) & mask_;
    table_[i] = k;
    ++size_;
  }
}

// BFACF ---------------------------------------------------------------------------------------

namespace {

// The four unit vectors perpendicular to a unit edge direction.
void perpendiculars(Point3 e, Point3 out[4]) {
  int k = 0;
  for (auto d : kUnitSteps) {
    if (d.x * e.x + d.y * e.y + d.z * e.z == 0) out[k++] = d;
  }
}

}  // namespace

BfacfChain::BfacfChain(const LatticePolygon& seed, double fugacity, int max_length)
    : v_(seed.vertices().begin(), seed.vertices().end()),
      occupied_(static_cast<std::size_t>(max_length) + 16),
      max_length_(max_length) {
  for (auto p : v_) occupied_.insert(p);
  set_fugacity(fugacity);
}

void BfacfChain::set_fugacity(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("fugacity must be positive");
  fugacity_ = b;
  const double b2 = b * b;
  const double denom = 1.0 + 3.0 * b2;
  p_plus_ = b2 / denom;
  p_zero_ = (1.0 + b2) / (2.0 * denom);
  p_minus_ = 1.0 / denom;
}

void BfacfChain::swap_state(BfacfChain& other) {
  std::swap(v_, other.v_);
  std::swap(occupied_, other.occupied_);
}

int BfacfChain::step(Rng& rng) {
  const int n = length();
  ++stats_.proposed;
  const std::uint64_t r = rng();
  const int i = static_cast<int>((r >> 32) % static_cast<std::uint64_t>(n));
  const int dir = static_cast<int>(r & 3);
  const double accept = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

  const int i1 = (i + 1 == n) ? 0 : i + 1;
  const int i_prev = (i == 0) ? n - 1 : i - 1;
  const int i_next = (i1 + 1 == n) ? 0 : i1 + 1;
  const Point3 u = v_[static_cast<std::size_t>(i)];
  const Point3 w = v_[static_cast<std::size_t>(i1)];
  Point3 perp[4];
  perpendiculars(w - u, perp);
  const Point3 d = perp[dir];
  const Point3 ud = u + d;
  const Point3 wd = w + d;
  const bool prev_at = v_[static_cast<std::size_t>(i_prev)] == ud;
  const bool next_at = v_[static_cast<std::size_t>(i_next)] == wd;

  if (prev_at && next_at) {
    if (n <= 4 || accept >= p_minus_) return 0;
    occupied_.erase(u);
    occupied_.erase(w);
    if (i1 == 0) {
      v_.pop_back();
      v_.erase(v_.begin());
    } else {
      v_.erase(v_.begin() + i, v_.begin() + i + 2);
    }
    ++stats_.accepted_minus;
    return -2;
  }
  if (prev_at) {
    if (accept >= p_zero_ || occupied_.contains(wd)) return 0;
    occupied_.erase(u);
    occupied_.insert(wd);
    v_[static_cast<std::size_t>(i)] = wd;
    ++stats_.accepted_zero;
    return 0;
  }
  if (next_at) {
    if (accept >= p_zero_ || occupied_.contains(ud)) return 0;
    occupied_.erase(w);
    occupied_.insert(ud);
    v_[static_cast<std::size_t>(i1)] = ud;
    ++stats_.accepted_zero;
    return 0;
  }
  if (accept >= p_plus_ || occupied_.contains(ud) || occupied_.contains(wd)) return 0;
  if (n + 2 > max_length_) {
    ++stats_.cap_rejections;
    return 0;
  }
  occupied_.insert(ud);
  occupied_.insert(wd);
  if (i1 == 0) {
    v_.push_back(ud);
    v_.push_back(wd);
  } else {
    const Point3 ins[2] = {ud, wd};
    v_.insert(v_.begin() + i1, ins, ins + 2);
  }
  ++stats_.accepted_plus;
  return 2;
}

LatticePolygon bfacf_step(const LatticePolygon& p, double fugacity, Rng& rng) {
  BfacfChain chain(p, fugacity, std::max(1000, p.length() + 2));
  chain.step(rng);
  return chain.polygon();
}

// Composite chain -----------------------------------------------------------------------------

void ChainParams::validate(int seed_length) const {
  if (fugacities.empty()) throw std::invalid_argument("n_chains must be at least 1");
  for (std::size_t i = 0; i < fugacities.size(); ++i) {
    if (!(fugacities[i] > 0.0)) throw std::invalid_argument("fugacities must be positive");
    if (i > 0 && !(fugacities[i] > fugacities[i - 1])) {
      throw std::invalid_argument("fugacities must be strictly increasing across chains");
    }
  }
  if (swap_interval == 0 || sample_interval == 0) throw std::invalid_argument("intervals must be positive");
  if (max_length < seed_length) throw std::invalid_argument("max_length is shorter than the seed");
}

std::string ChainParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "fugacities=";
  for (std::size_t i = 0; i < fugacities.size(); ++i) os << (i ? "," : "") << fugacities[i];
  os << " n_chains=" << fugacities.size() << " swap_interval=" << swap_interval
     << " sample_interval=" << sample_interval << " burn_in=" << burn_in << " max_length=" << max_length
     << " rng_seed=" << rng_seed;
  return os.str();
}

CompositeChain::CompositeChain(const LatticePolygon& seed, ChainParams params) : params_(std::move(params)) {
  params_.validate(seed.length());
  std::seed_seq seq{static_cast<std::uint32_t>(params_.rng_seed),
                    static_cast<std::uint32_t>(params_.rng_seed >> 32), 0x6b6e6f74u};
  std::vector<std::uint64_t> seeds(params_.fugacities.size() + 1);
  std::vector<std::uint32_t> words(seeds.size() * 2);
  seq.generate(words.begin(), words.end());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    seeds[i] = (static_cast<std::uint64_t>(words[2 * i]) << 32) | words[2 * i + 1];
  }
  for (std::size_t i = 0; i < params_.fugacities.size(); ++i) {
    chains_.emplace_back(seed, params_.fugacities[i], params_.max_length);
    rngs_.emplace_back(seeds[i]);
  }
  swap_rng_.seed(seeds.back());
  const std::size_t pairs = chains_.size() > 1 ? chains_.size() - 1 : 0;
  swaps_proposed_.assign(pairs, 0);
  swaps_accepted_.assign(pairs, 0);
  length_sum_.assign(chains_.size(), 0.0);
}

void CompositeChain::advance(std::uint64_t moves) {
  while (moves > 0) {
    const std::uint64_t chunk = std::min(moves, params_.swap_interval - since_swap_);
    for (std::size_t c = 0; c < chains_.size(); ++c) chains_[c].run(rngs_[c], chunk);
    since_swap_ += chunk;
    moves -= chunk;
    if (since_swap_ == params_.swap_interval) {
      attempt_swaps();
      since_swap_ = 0;
    }
  }
}

void CompositeChain::attempt_swaps() {
  if (chains_.size() < 2) return;
  // Alternate even and odd neighbour pairs so every pair is visited every two rounds.
  const std::size_t parity = swap_round_++ % 2;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = parity; i + 1 < chains_.size(); i += 2) {
    auto& a = chains_[i];
    auto& b = chains_[i + 1];
    ++swaps_proposed_[i];
    // Ratio of n b^n weights after and before exchanging conformations.
    const double log_ratio =
        static_cast<double>(b.length() - a.length()) * (std::log(a.fugacity()) - std::log(b.fugacity()));
    const double u = unif(swap_rng_);
    if (log_ratio >= 0.0 || u < std::exp(log_ratio)) {
      a.swap_state(b);
      ++swaps_accepted_[i];
    }
  }
}

LatticePolygon CompositeChain::next() {
  if (!burned_in_) {
    advance(params_.burn_in);
    burned_in_ = true;
  }
  advance(params_.sample_interval);
  ++samples_;
  for (std::size_t c = 0; c < chains_.size(); ++c) length_sum_[c] += chains_[c].length();
  return chains_.front().polygon();
}

ChainDiagnostics CompositeChain::diagnostics() const {
  ChainDiagnostics d;
  d.fugacity = params_.fugacities;
  d.samples = samples_;
  for (std::size_t c = 0; c < chains_.size(); ++c) {
    d.mean_length.push_back(samples_ ? length_sum_[c] / static_cast<double>(samples_) : 0.0);
    d.cap_rejections += chains_[c].stats().cap_rejections;
  }
  d.swaps_proposed = swaps_proposed_;
  d.swaps_accepted = swaps_accepted_;
  return d;
}

std::vector<LatticePolygon> cmc_sample(const LatticePolygon& seed, const ChainParams& params, std::size_t count) {
  CompositeChain chain(seed, params);
  std::vector<LatticePolygon> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(chain.next());
  return out;
}

// Shrinking -----------------------------------------------------------------------------------

LatticePolygon shrink(const LatticePolygon& p, int target_length, const ShrinkOptions& opts) {
  if (p.length() <= target_length) return p;
  BfacfChain chain(p, opts.fugacity, p.length() + 2);
  Rng rng(opts.seed ^ polygon_hash(p));
  LatticePolygon best = p;
  std::uint64_t since_best = 0;
  for (std::uint64_t move = 0; move < opts.max_moves; ++move) {
    chain.step(rng);
    if (chain.length() < best.length()) {
      best = chain.polygon();
      since_best = 0;
      if (best.length() <= target_length) break;
    } else if (++since_best > opts.patience_per_edge * static_cast<std::uint64_t>(best.length())) {
      break;
    }
  }
  return best;
}

}  // namespace knotband
