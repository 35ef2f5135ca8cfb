#include "knotband/diagram.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>

namespace knotband {

// PDCode --------------------------------------------------------------------------------------

std::string PDCode::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& x : crossings) {
    if (!first) os << ' ';
    os << "X[" << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3] << ']';
    first = false;
  }
  for (int i = 0; i < loops; ++i) {
    if (!first) os << ' ';
    os << "Loop[]";
    first = false;
  }
  return os.str();
}

PDCode PDCode::parse(std::string_view text) {
  static const std::regex quad(R"(\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\])");
  static const std::regex loop(R"(Loop\[[^\]]*\])");
  const std::string s(text);
  PDCode pd;
  pd.loops = static_cast<int>(std::distance(std::sregex_iterator(s.begin(), s.end(), loop), std::sregex_iterator()));
  for (auto it = std::sregex_iterator(s.begin(), s.end(), quad); it != std::sregex_iterator(); ++it) {
    std::array<int, 4> x{};
    for (int k = 0; k < 4; ++k) x[static_cast<std::size_t>(k)] = std::stoi((*it)[k + 1].str());
    pd.crossings.push_back(x);
  }
  if (pd.crossings.empty() && pd.loops == 0) {
    // An empty code denotes the crossingless unknot.
    pd.loops = 1;
  }
  const Diagram d = Diagram::from_pd(pd);
  pd.signs.resize(pd.crossings.size());
  for (int c = 0; c < d.crossing_count(); ++c) pd.signs[static_cast<std::size_t>(c)] = d.sign(c);
  pd.n_components = d.component_count();
  pd.writhe = d.writhe();
  return pd;
}

// Diagram construction ------------------------------------------------------------------------

Diagram Diagram::from_pd(const PDCode& pd) {
  Diagram d;
  const int n = pd.crossing_count();
  d.loops_ = pd.loops;
  d.link_.assign(static_cast<std::size_t>(4 * n), -1);
  d.sign_.assign(static_cast<std::size_t>(n), 1);
  std::map<int, std::vector<int>> where;
  for (int c = 0; c < n; ++c) {
    for (int s = 0; s < 4; ++s) where[pd.crossings[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)]].push_back(4 * c + s);
  }
  for (const auto& [label, slots] : where) {
    if (slots.size() != 2) {
      throw DiagramError("arc label " + std::to_string(label) + " appears " + std::to_string(slots.size()) +
                         " times");
    }
    d.link_[static_cast<std::size_t>(slots[0])] = slots[1];
    d.link_[static_cast<std::size_t>(slots[1])] = slots[0];
  }

  // Orientation: slot 0 is incoming by convention; propagate along strands. Components that only
  // pass over take their direction from consecutive labels.
  std::vector<signed char> incoming(static_cast<std::size_t>(4 * n), -1);
  auto mark = [&](int slot) {
    int s = slot;
    do {
      const auto idx = static_cast<std::size_t>(s);
      if (incoming[idx] == 0) throw DiagramError("inconsistent orientation in PD code");
      if (incoming[idx] == 1) return;
      incoming[idx] = 1;
      const int out = through(s);
      if (incoming[static_cast<std::size_t>(out)] == 1) throw DiagramError("inconsistent orientation in PD code");
      incoming[static_cast<std::size_t>(out)] = 0;
      s = d.link_[static_cast<std::size_t>(out)];
    } while (s != slot);
  };
  for (int c = 0; c < n; ++c) mark(4 * c);
  const bool have_signs = static_cast<int>(pd.signs.size()) == n;
  for (int c = 0; c < n; ++c) {
    if (incoming[static_cast<std::size_t>(4 * c + 1)] != -1) continue;
    const auto& x = pd.crossings[static_cast<std::size_t>(c)];
    bool b_to_d;  // over strand runs from slot 1 to slot 3
    if (have_signs) {
      b_to_d = pd.signs[static_cast<std::size_t>(c)] < 0;
    } else {
      const int j = x[1];
      const int l = x[3];
      if (l == j + 1) b_to_d = true;
      else if (j == l + 1) b_to_d = false;
      else b_to_d = j > l;
    }
    mark(4 * c + (b_to_d ? 1 : 3));
  }
  for (int c = 0; c < n; ++c) d.sign_[static_cast<std::size_t>(c)] = incoming[static_cast<std::size_t>(4 * c + 3)] == 1 ? 1 : -1;
  d.check();
  return d;
}

std::vector<int> Diagram::component_starts() const {
  const int slots = 4 * crossing_count();
  std::vector<char> seen(static_cast<std::size_t>(slots), 0);
  std::vector<int> starts;
  for (int i = 0; i < slots; ++i) {
    const int s = i & 3;
    const bool in = s == 0 || (s == 3 && sign_[static_cast<std::size_t>(i >> 2)] > 0) ||
                    (s == 1 && sign_[static_cast<std::size_t>(i >> 2)] < 0);
    if (!in || seen[static_cast<std::size_t>(i)]) continue;
    starts.push_back(i);
    int cur = i;
    do {
      seen[static_cast<std::size_t>(cur)] = 1;
      cur = link_[static_cast<std::size_t>(through(cur))];
    } while (cur != i);
  }
  return starts;
}

PDCode Diagram::to_pd() const {
  const Diagram d = canonical();
  PDCode pd;
  const int n = d.crossing_count();
  pd.crossings.assign(static_cast<std::size_t>(n), {0, 0, 0, 0});
  std::vector<int> label(static_cast<std::size_t>(4 * n), 0);
  int next = 1;
  for (int start : d.component_starts()) {
    int cur = start;
    do {
      // The arc arriving at `cur` gets the next label.
      label[static_cast<std::size_t>(cur)] = next;
      label[static_cast<std::size_t>(d.link_[static_cast<std::size_t>(cur)])] = next;
      ++next;
      cur = d.link_[static_cast<std::size_t>(through(cur))];
    } while (cur != start);
  }
  for (int c = 0; c < n; ++c) {
    for (int s = 0; s < 4; ++s) pd.crossings[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] = label[static_cast<std::size_t>(4 * c + s)];
    pd.signs.push_back(d.sign(c));
  }
  // Labels along each component must start at the arc entering the first visited crossing; the
  // KnotAtlas convention wants a_i -> a_i + 1 along the strand, which holds by construction.
  pd.loops = d.loops_;
  pd.n_components = d.component_count();
  pd.writhe = d.writhe();
  return pd;
}

int Diagram::writhe() const {
  int w = 0;
  for (auto s : sign_) w += s;
  return w;
}

int Diagram::component_count() const {
  return static_cast<int>(component_starts().size()) + loops_;
}

bool Diagram::is_connected() const {
  const int n = crossing_count();
  if (n == 0) return loops_ <= 1;
  if (loops_ > 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    for (int s = 0; s < 4; ++s) {
      const int o = link_[static_cast<std::size_t>(4 * c + s)] >> 2;
      if (!seen[static_cast<std::size_t>(o)]) {
        seen[static_cast<std::size_t>(o)] = 1;
        ++count;
        stack.push_back(o);
      }
    }
  }
  return count == n;
}

void Diagram::check() const {
  const int slots = 4 * crossing_count();
  if (static_cast<int>(link_.size()) != slots) throw DiagramError("slot table size mismatch");
  for (int i = 0; i < slots; ++i) {
    const int j = link_[static_cast<std::size_t>(i)];
    if (j < 0 || j >= slots || j == i || link_[static_cast<std::size_t>(j)] != i) {
      throw DiagramError("slot pairing is not an involution at slot " + std::to_string(i));
    }
    const auto in = [&](int k) {
      const int s = k & 3;
      const int sg = sign_[static_cast<std::size_t>(k >> 2)];
      return s == 0 || (s == 3 && sg > 0) || (s == 1 && sg < 0);
    };
    if (in(i) == in(j)) throw DiagramError("arc at slot " + std::to_string(i) + " is not oriented consistently");
  }
}

// Mutations -----------------------------------------------------------------------------------

void Diagram::permute_slots(const std::vector<int>& perm) {
  std::vector<int> out(link_.size());
  for (std::size_t i = 0; i < link_.size(); ++i) {
    out[static_cast<std::size_t>(perm[i])] = perm[static_cast<std::size_t>(link_[i])];
  }
  link_.swap(out);
}

void Diagram::switch_crossing(int c) {
  std::vector<int> perm(link_.size());
  std::iota(perm.begin(), perm.end(), 0);
  const int shift = sign_[static_cast<std::size_t>(c)] > 0 ? 1 : 3;
  for (int s = 0; s < 4; ++s) perm[static_cast<std::size_t>(4 * c + s)] = 4 * c + (s + shift) % 4;
  permute_slots(perm);
  sign_[static_cast<std::size_t>(c)] = static_cast<std::int8_t>(-sign_[static_cast<std::size_t>(c)]);
}

void Diagram::mirror() {
  std::vector<int> perm(link_.size());
  for (int c = 0; c < crossing_count(); ++c) {
    const int shift = sign_[static_cast<std::size_t>(c)] > 0 ? 1 : 3;
    for (int s = 0; s < 4; ++s) perm[static_cast<std::size_t>(4 * c + s)] = 4 * c + (s + shift) % 4;
    sign_[static_cast<std::size_t>(c)] = static_cast<std::int8_t>(-sign_[static_cast<std::size_t>(c)]);
  }
  permute_slots(perm);
}

void Diagram::reverse_component(int slot) {
  const int slots = 4 * crossing_count();
  std::vector<char> incoming(static_cast<std::size_t>(slots), 0);
  for (int i = 0; i < slots; ++i) {
    const int s = i & 3;
    const int sg = sign_[static_cast<std::size_t>(i >> 2)];
    incoming[static_cast<std::size_t>(i)] = s == 0 || (s == 3 && sg > 0) || (s == 1 && sg < 0);
  }
  const int start = incoming[static_cast<std::size_t>(slot)] ? slot : through(slot);
  int cur = start;
  do {
    const int out = through(cur);
    incoming[static_cast<std::size_t>(cur)] = 0;
    incoming[static_cast<std::size_t>(out)] = 1;
    cur = link_[static_cast<std::size_t>(out)];
  } while (cur != start);
  rebuild_from_incoming(incoming);
}

void Diagram::join(int a, int b) {
  const int x = link_[static_cast<std::size_t>(a)];
  const int y = link_[static_cast<std::size_t>(b)];
  if (x == b) {
    ++loops_;
    return;
  }
  link_[static_cast<std::size_t>(x)] = y;
  link_[static_cast<std::size_t>(y)] = x;
}

void Diagram::delete_crossing(int c) {
  const int last = crossing_count() - 1;
  if (c != last) {
    auto f = [&](int x) { return (x >> 2) == last ? 4 * c + (x & 3) : x; };
    for (int s = 0; s < 4; ++s) link_[static_cast<std::size_t>(4 * c + s)] = f(link_[static_cast<std::size_t>(4 * last + s)]);
    for (int s = 0; s < 4; ++s) {
      const int p = link_[static_cast<std::size_t>(4 * c + s)];
      if ((p >> 2) != c) link_[static_cast<std::size_t>(p)] = 4 * c + s;
    }
    sign_[static_cast<std::size_t>(c)] = sign_[static_cast<std::size_t>(last)];
  }
  link_.resize(link_.size() - 4);
  sign_.pop_back();
}

void Diagram::smooth_oriented(int c) {
  if (sign_[static_cast<std::size_t>(c)] > 0) {
    join(4 * c + 0, 4 * c + 1);
    join(4 * c + 2, 4 * c + 3);
  } else {
    join(4 * c + 0, 4 * c + 3);
    join(4 * c + 1, 4 * c + 2);
  }
  delete_crossing(c);
}

void Diagram::smooth_unoriented(int c, int partner) {
  if (partner == 1) {
    join(4 * c + 0, 4 * c + 1);
    join(4 * c + 2, 4 * c + 3);
  } else {
    join(4 * c + 0, 4 * c + 3);
    join(4 * c + 1, 4 * c + 2);
  }
  delete_crossing(c);
  reorient();
}

void Diagram::remove_passthrough(std::vector<int> crossings) {
  for (int c : crossings) {
    join(4 * c + 0, 4 * c + 2);
    join(4 * c + 1, 4 * c + 3);
  }
  std::sort(crossings.begin(), crossings.end(), std::greater<>());
  for (int c : crossings) delete_crossing(c);
}

void Diagram::reorient() {
  const int slots = 4 * crossing_count();
  std::vector<char> incoming(static_cast<std::size_t>(slots), 0);
  std::vector<char> seen(static_cast<std::size_t>(slots), 0);
  for (int i = 0; i < slots; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    const int s = i & 3;
    const int sg = sign_[static_cast<std::size_t>(i >> 2)];
    const bool in = s == 0 || (s == 3 && sg > 0) || (s == 1 && sg < 0);
    // Keep the current role of slot i and walk the component in that direction.
    const int start = in ? i : through(i);
    int cur = start;
    do {
      incoming[static_cast<std::size_t>(cur)] = 1;
      seen[static_cast<std::size_t>(cur)] = 1;
      const int out = through(cur);
      seen[static_cast<std::size_t>(out)] = 1;
      cur = link_[static_cast<std::size_t>(out)];
    } while (cur != start);
  }
  rebuild_from_incoming(incoming);
}

void Diagram::rebuild_from_incoming(const std::vector<char>& incoming) {
  std::vector<int> perm(link_.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (int c = 0; c < crossing_count(); ++c) {
    const int rot = incoming[static_cast<std::size_t>(4 * c)] ? 0 : 2;
    for (int s = 0; s < 4; ++s) perm[static_cast<std::size_t>(4 * c + (s + rot) % 4)] = 4 * c + s;
    const bool over_in_at_3 = incoming[static_cast<std::size_t>(4 * c + (3 + rot) % 4)] != 0;
    sign_[static_cast<std::size_t>(c)] = over_in_at_3 ? 1 : -1;
  }
  permute_slots(perm);
}

// Faces and canonical form --------------------------------------------------------------------

std::vector<std::vector<int>> Diagram::faces() const {
  const int corners = 4 * crossing_count();
  std::vector<char> seen(static_cast<std::size_t>(corners), 0);
  std::vector<std::vector<int>> out;
  for (int k = 0; k < corners; ++k) {
    if (seen[static_cast<std::size_t>(k)]) continue;
    std::vector<int> face;
    int cur = k;
    do {
      seen[static_cast<std::size_t>(cur)] = 1;
      face.push_back(cur);
      const int exit = (cur & ~3) | ((cur + 1) & 3);
      cur = link_[static_cast<std::size_t>(exit)];
    } while (cur != k);
    out.push_back(std::move(face));
  }
  return out;
}

namespace {

// BFS code of the diagram rooted at `root`; `order` receives the visiting order of crossings.
std::vector<int> bfs_code(const Diagram& d, int root, std::vector<int>& order) {
  const int n = d.crossing_count();
  std::vector<int> id(static_cast<std::size_t>(n), -1);
  order.clear();
  std::vector<int> code;
  code.reserve(static_cast<std::size_t>(5 * n));
  int next_root = 0;
  auto visit = [&](int c) {
    id[static_cast<std::size_t>(c)] = static_cast<int>(order.size());
    order.push_back(c);
  };
  visit(root);
  for (std::size_t head = 0; head < static_cast<std::size_t>(n); ++head) {
    if (head == order.size()) {
      while (id[static_cast<std::size_t>(next_root)] != -1) ++next_root;
      visit(next_root);
    }
    const int c = order[head];
    code.push_back(d.sign(c));
    for (int s = 0; s < 4; ++s) {
      const int t = d.link(4 * c + s);
      if (id[static_cast<std::size_t>(t >> 2)] == -1) visit(t >> 2);
      code.push_back(4 * id[static_cast<std::size_t>(t >> 2)] + (t & 3));
    }
  }
  return code;
}

}  // namespace

Diagram Diagram::canonical() const {
  const int n = crossing_count();
  if (n == 0) return *this;
  std::vector<int> best_code;
  std::vector<int> best_order;
  std::vector<int> order;
  for (int r = 0; r < n; ++r) {
    auto code = bfs_code(*this, r, order);
    if (best_code.empty() || code < best_code) {
      best_code = std::move(code);
      best_order = order;
    }
  }
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(best_order[static_cast<std::size_t>(i)])] = i;
  Diagram out;
  out.loops_ = loops_;
  out.sign_.resize(sign_.size());
  out.link_.resize(link_.size());
  for (int c = 0; c < n; ++c) {
    const int nc = id[static_cast<std::size_t>(c)];
    out.sign_[static_cast<std::size_t>(nc)] = sign_[static_cast<std::size_t>(c)];
    for (int s = 0; s < 4; ++s) {
      const int t = link_[static_cast<std::size_t>(4 * c + s)];
      out.link_[static_cast<std::size_t>(4 * nc + s)] = 4 * id[static_cast<std::size_t>(t >> 2)] + (t & 3);
    }
  }
  return out;
}

std::vector<int> Diagram::encode() const {
  std::vector<int> code{crossing_count(), loops_};
  for (int c = 0; c < crossing_count(); ++c) {
    code.push_back(sign_[static_cast<std::size_t>(c)]);
    for (int s = 0; s < 4; ++s) code.push_back(link_[static_cast<std::size_t>(4 * c + s)]);
  }
  return code;
}

// Reidemeister moves --------------------------------------------------------------------------

bool Diagram::reduce_r1() {
  bool changed = false;
  for (bool again = true; again;) {
    again = false;
    for (int c = 0; c < crossing_count() && !again; ++c) {
      for (int s = 0; s < 4; ++s) {
        if (link_[static_cast<std::size_t>(4 * c + s)] == 4 * c + (s + 1) % 4) {
          remove_passthrough({c});
          again = changed = true;
          break;
        }
      }
    }
  }
  return changed;
}

bool Diagram::reduce_r2() {
  for (const auto& face : faces()) {
    if (face.size() != 2) continue;
    const int c1 = face[0] >> 2;
    const int c2 = face[1] >> 2;
    if (c1 == c2) continue;
    const int k1 = face[0] & 3;
    const int k2 = face[1] & 3;
    // The arc leaving corner 1 sits in slot k1+1 at c1 and slot k2 at c2; odd slots are over.
    if (((k1 + 1) & 1) == (k2 & 1)) {
      remove_passthrough({c1, c2});
      return true;
    }
  }
  return false;
}

std::vector<std::vector<int>> Diagram::r3_candidates() const {
  std::vector<std::vector<int>> out;
  for (auto& face : faces()) {
    if (face.size() != 3) continue;
    const int a = face[0] >> 2;
    const int b = face[1] >> 2;
    const int c = face[2] >> 2;
    if (a == b || b == c || a == c) continue;
    bool movable = false;
    for (int i = 0; i < 3; ++i) {
      const int ki = face[static_cast<std::size_t>(i)] & 3;
      const int kj = face[static_cast<std::size_t>((i + 1) % 3)] & 3;
      if (((ki + 1) & 1) == (kj & 1)) movable = true;
    }
    if (movable) out.push_back(face);
  }
  return out;
}

bool Diagram::apply_r3(const std::vector<int>& corners) {
  if (corners.size() != 3) return false;
  int x_tri[3], x_ext[3], y_tri[3], y_ext[3];
  bool movable = false;
  for (int i = 0; i < 3; ++i) {
    const int ci = corners[static_cast<std::size_t>(i)] >> 2;
    const int ki = corners[static_cast<std::size_t>(i)] & 3;
    const int cj = corners[static_cast<std::size_t>((i + 1) % 3)] >> 2;
    const int kj = corners[static_cast<std::size_t>((i + 1) % 3)] & 3;
    x_tri[i] = 4 * ci + (ki + 1) % 4;
    x_ext[i] = 4 * ci + (ki + 3) % 4;
    y_tri[i] = 4 * cj + kj;
    y_ext[i] = 4 * cj + (kj + 2) % 4;
    if (link_[static_cast<std::size_t>(x_tri[i])] != y_tri[i]) return false;
    if (((ki + 1) & 1) == (kj & 1)) movable = true;
  }
  if (!movable) return false;
  // Each strand's two triangle crossings trade places; external arcs follow their strand.
  std::vector<int> port_to(link_.size(), -1);
  for (int i = 0; i < 3; ++i) {
    port_to[static_cast<std::size_t>(x_ext[i])] = y_tri[i];
    port_to[static_cast<std::size_t>(y_ext[i])] = x_tri[i];
  }
  std::vector<int> out = link_;
  for (int i = 0; i < 3; ++i) {
    for (int p : {x_ext[i], y_ext[i]}) {
      const int q = link_[static_cast<std::size_t>(p)];
      const int np = port_to[static_cast<std::size_t>(p)];
      const int nq = port_to[static_cast<std::size_t>(q)] >= 0 ? port_to[static_cast<std::size_t>(q)] : q;
      out[static_cast<std::size_t>(np)] = nq;
      out[static_cast<std::size_t>(nq)] = np;
    }
    out[static_cast<std::size_t>(x_ext[i])] = y_ext[i];
    out[static_cast<std::size_t>(y_ext[i])] = x_ext[i];
  }
  link_.swap(out);
  return true;
}

// Simplification ------------------------------------------------------------------------------

namespace {

std::uint64_t hash_code(const std::vector<int>& code, std::uint64_t salt) {
  std::uint64_t h = 0x84222325cbf29ce4ull ^ salt;
  for (int v : code) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return h;
}

bool reduce_12(Diagram& d) {
  bool changed = false;
  for (;;) {
    bool step = d.reduce_r1();
    step = d.reduce_r2() || step;
    if (!step) break;
    changed = true;
  }
  return changed;
}

}  // namespace

Diagram simplify(const Diagram& input, const SimplifyOptions& opts) {
  Diagram d = input;
  reduce_12(d);
  d = d.canonical();
  for (int round = 0; round < opts.max_rounds && d.crossing_count() >= 3;) {
    Rng rng(hash_code(d.encode(), static_cast<std::uint64_t>(round)));
    Diagram trial = d;
    bool reduced = false;
    const int moves = opts.r3_moves_per_crossing * d.crossing_count();
    for (int m = 0; m < moves; ++m) {
      auto candidates = trial.r3_candidates();
      if (candidates.empty()) break;
      trial.apply_r3(candidates[static_cast<std::size_t>(rng() % candidates.size())]);
      if (reduce_12(trial)) {
        reduced = true;
        break;
      }
    }
    if (reduced) {
      d = trial.canonical();
      round = 0;
    } else {
      ++round;
    }
  }
  return d;
}

PDCode simplify(const PDCode& pd, const SimplifyOptions& opts) {
  return simplify(Diagram::from_pd(pd), opts).to_pd();
}

namespace {

// Projection direction with pairwise coprime components larger than any coordinate difference:
// no vertex can project onto another polygon's edge or vertex.
constexpr std::int64_t kLkDir[3] = {2003, 3001, 4001};

struct Plane2 {
  std::int64_t u, v;
};

Plane2 lk_project(Point3 p) {
  // Basis of the plane orthogonal to kLkDir: e1 = (b, -a, 0), e2 = d x e1.
  const auto [a, b, c] = kLkDir;
  const std::int64_t x = p.x, y = p.y, z = p.z;
  return {b * x - a * y, a * c * x + b * c * y - (a * a + b * b) * z};
}

std::int64_t lk_depth(Point3 p) { return kLkDir[0] * p.x + kLkDir[1] * p.y + kLkDir[2] * p.z; }

int orient2(Plane2 o, Plane2 a, Plane2 b) {
  const __int128 d = static_cast<__int128>(a.u - o.u) * (b.v - o.v) - static_cast<__int128>(a.v - o.v) * (b.u - o.u);
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

}  // namespace

int linking_number(const LatticePolygon& a, const LatticePolygon& b) {
  for (const auto* poly : {&a, &b}) {
    for (const auto& q : poly->vertices()) {
      if (std::abs(q.x) >= 2000 || std::abs(q.y) >= 2000 || std::abs(q.z) >= 2000) {
        throw DiagramError("linking_number: coordinates out of range");
      }
    }
  }
  int twice = 0;
  for (int i = 0; i < a.length(); ++i) {
    const Point3 p0 = a.vertex(i), p1 = a.vertex(i + 1);
    const Plane2 P0 = lk_project(p0), P1 = lk_project(p1);
    for (int j = 0; j < b.length(); ++j) {
      const Point3 q0 = b.vertex(j), q1 = b.vertex(j + 1);
      const Plane2 Q0 = lk_project(q0), Q1 = lk_project(q1);
      const int o1 = orient2(P0, P1, Q0), o2 = orient2(P0, P1, Q1);
      const int o3 = orient2(Q0, Q1, P0), o4 = orient2(Q0, Q1, P1);
      if (o1 == o2 || o3 == o4) continue;
      // Crossing of edge i of a with edge j of b. The cross product of the projected directions
      // orients the crossing; the depth comparison decides which strand is over.
      const int turn = orient2({0, 0}, {P1.u - P0.u, P1.v - P0.v}, {Q1.u - Q0.u, Q1.v - Q0.v});
      const __int128 den = static_cast<__int128>(P1.u - P0.u) * (Q1.v - Q0.v) -
                           static_cast<__int128>(P1.v - P0.v) * (Q1.u - Q0.u);
      const __int128 tn = static_cast<__int128>(Q0.u - P0.u) * (Q1.v - Q0.v) -
                          static_cast<__int128>(Q0.v - P0.v) * (Q1.u - Q0.u);
      const __int128 sn = static_cast<__int128>(Q0.u - P0.u) * (P1.v - P0.v) -
                          static_cast<__int128>(Q0.v - P0.v) * (P1.u - P0.u);
      // Depths along the viewing direction at the crossing, both scaled by den (t = tn/den, s = sn/den).
      const __int128 da = static_cast<__int128>(lk_depth(p0)) * den + tn * (lk_depth(p1) - lk_depth(p0));
      const __int128 db = static_cast<__int128>(lk_depth(q0)) * den + sn * (lk_depth(q1) - lk_depth(q0));
      const bool a_over = den > 0 ? da > db : da < db;
      twice += a_over ? turn : -turn;
    }
  }
  return twice / 2;
}

}  // namespace knotband
