#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "knotband/diagram.hpp"

namespace knotband {
namespace {

using i128 = __int128;

struct Vec2 {
  std::int64_t x = 0;
  std::int64_t y = 0;
};

i128 cross(Vec2 a, Vec2 b) { return static_cast<i128>(a.x) * b.y - static_cast<i128>(a.y) * b.x; }
Vec2 sub(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
int sgn(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

struct Segment {
  int component = 0;
  int index = 0;  // edge index within its component
  Vec2 a, b;
  std::int64_t za = 0, zb = 0;
  std::int64_t min_x = 0, max_x = 0, min_y = 0, max_y = 0;
};

struct Event {
  i128 tn = 0;  // parameter along the segment is tn / td
  i128 td = 1;
  int crossing = 0;
  bool over = false;
};

struct CrossingInfo {
  int sign = 0;
};

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Point3 direction_from(std::uint64_t& state) {
  for (;;) {
    const int a = 1000 + static_cast<int>(splitmix(state) % 99000);
    const int b = 1000 + static_cast<int>(splitmix(state) % 99000);
    const int c = 1000 + static_cast<int>(splitmix(state) % 99000);
    if (a == b || b == c || a == c) continue;
    const std::uint64_t signs = splitmix(state);
    return {(signs & 1) ? a : -a, (signs & 2) ? b : -b, c};
  }
}

}  // namespace

std::optional<Diagram> project_along(const std::vector<LatticePolygon>& components, Point3 d) {
  if (d.x == 0 || d.y == 0 || d.z <= 0) return std::nullopt;
  // Translate so coordinates are small and non-negative; keeps all products well inside 128 bits.
  Point3 lo{0, 0, 0};
  bool first = true;
  for (const auto& p : components) {
    for (const auto& v : p.vertices()) {
      if (first) lo = v;
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
      first = false;
    }
  }
  auto to2 = [&](Point3 v) {
    const Point3 w = v - lo;
    return Vec2{static_cast<std::int64_t>(d.z) * w.x - static_cast<std::int64_t>(d.x) * w.z,
                static_cast<std::int64_t>(d.z) * w.y - static_cast<std::int64_t>(d.y) * w.z};
  };

  std::vector<Segment> segs;
  std::vector<int> first_seg;
  for (int ci = 0; ci < static_cast<int>(components.size()); ++ci) {
    const auto& p = components[static_cast<std::size_t>(ci)];
    first_seg.push_back(static_cast<int>(segs.size()));
    for (int i = 0; i < p.length(); ++i) {
      Segment s;
      s.component = ci;
      s.index = i;
      s.a = to2(p.vertex(i));
      s.b = to2(p.vertex(i + 1));
      s.za = p.vertex(i).z - lo.z;
      s.zb = p.vertex(i + 1).z - lo.z;
      s.min_x = std::min(s.a.x, s.b.x);
      s.max_x = std::max(s.a.x, s.b.x);
      s.min_y = std::min(s.a.y, s.b.y);
      s.max_y = std::max(s.a.y, s.b.y);
      segs.push_back(s);
    }
  }
  first_seg.push_back(static_cast<int>(segs.size()));

  std::vector<std::vector<Event>> events(segs.size());
  std::vector<CrossingInfo> crossings;
  // Sweep order by min_x lets us stop scanning once segments are strictly to the right.
  std::vector<int> order(segs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int l, int r) { return segs[static_cast<std::size_t>(l)].min_x < segs[static_cast<std::size_t>(r)].min_x; });

  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const int i = order[oi];
    const Segment& s = segs[static_cast<std::size_t>(i)];
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const int j = order[oj];
      const Segment& t = segs[static_cast<std::size_t>(j)];
      if (t.min_x > s.max_x) break;
      if (t.max_y < s.min_y || t.min_y > s.max_y) continue;
      if (s.component == t.component) {
        const int len = components[static_cast<std::size_t>(s.component)].length();
        const int gap = ((s.index - t.index) % len + len) % len;
        if (gap == 1 || gap == len - 1) continue;  // adjacent edges share only their vertex
      }
      const i128 o1 = cross(sub(s.b, s.a), sub(t.a, s.a));
      const i128 o2 = cross(sub(s.b, s.a), sub(t.b, s.a));
      const i128 o3 = cross(sub(t.b, t.a), sub(s.a, t.a));
      const i128 o4 = cross(sub(t.b, t.a), sub(s.b, t.a));
      if (o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0) {
        if ((o1 == 0 && on_segment(s.a, s.b, t.a)) || (o2 == 0 && on_segment(s.a, s.b, t.b)) ||
            (o3 == 0 && on_segment(t.a, t.b, s.a)) || (o4 == 0 && on_segment(t.a, t.b, s.b))) {
          return std::nullopt;  // a vertex projects onto another segment
        }
        continue;
      }
      if (sgn(o1) == sgn(o2) || sgn(o3) == sgn(o4)) continue;
      // Proper crossing: s(tp) = t(up), tp = tn/den, up = un/den.
      const Vec2 r = sub(s.b, s.a);
      const Vec2 q = sub(t.b, t.a);
      const Vec2 w = sub(t.a, s.a);
      i128 den = cross(r, q);
      i128 tn = cross(w, q);
      i128 un = cross(w, r);
      if (den < 0) {
        den = -den;
        tn = -tn;
        un = -un;
      }
      const i128 zs = static_cast<i128>(s.za) * den + tn * (s.zb - s.za);
      const i128 zt = static_cast<i128>(t.za) * den + un * (t.zb - t.za);
      if (zs == zt) return std::nullopt;  // the 3D edges meet; cannot happen for valid input
      const bool s_over = zs > zt;
      const Vec2 over_dir = s_over ? r : q;
      const Vec2 under_dir = s_over ? q : r;
      const int k = static_cast<int>(crossings.size());
      crossings.push_back({cross(over_dir, under_dir) > 0 ? 1 : -1});
      events[static_cast<std::size_t>(i)].push_back({tn, den, k, s_over});
      events[static_cast<std::size_t>(j)].push_back({un, den, k, !s_over});
    }
  }

  for (auto& ev : events) {
    std::sort(ev.begin(), ev.end(), [](const Event& l, const Event& r) { return l.tn * r.td < r.tn * l.td; });
    for (std::size_t e = 1; e < ev.size(); ++e) {
      if (ev[e - 1].tn * ev[e].td == ev[e].tn * ev[e - 1].td) return std::nullopt;  // triple point
    }
  }

  // Label arcs along each component; X[under_in, ., under_out, .] with the over labels placed
  // according to the crossing sign.
  PDCode pd;
  pd.crossings.assign(crossings.size(), {0, 0, 0, 0});
  pd.signs.resize(crossings.size());
  for (std::size_t k = 0; k < crossings.size(); ++k) pd.signs[k] = crossings[k].sign;
  int next_label = 1;
  for (int ci = 0; ci < static_cast<int>(components.size()); ++ci) {
    std::vector<std::pair<int, bool>> visits;
    for (int si = first_seg[static_cast<std::size_t>(ci)]; si < first_seg[static_cast<std::size_t>(ci) + 1]; ++si) {
      for (const auto& e : events[static_cast<std::size_t>(si)]) visits.emplace_back(e.crossing, e.over);
    }
    if (visits.empty()) {
      ++pd.loops;
      continue;
    }
    const int base = next_label;
    const int m = static_cast<int>(visits.size());
    next_label += m;
    for (int v = 0; v < m; ++v) {
      const int in_label = base + (v + m - 1) % m;
      const int out_label = base + v;
      const auto [k, over] = visits[static_cast<std::size_t>(v)];
      auto& x = pd.crossings[static_cast<std::size_t>(k)];
      const int sign = crossings[static_cast<std::size_t>(k)].sign;
      if (!over) {
        x[0] = in_label;
        x[2] = out_label;
      } else if (sign > 0) {
        x[3] = in_label;
        x[1] = out_label;
      } else {
        x[1] = in_label;
        x[3] = out_label;
      }
    }
  }
  return Diagram::from_pd(pd);
}

Diagram project_link(const std::vector<LatticePolygon>& components, std::uint64_t direction_seed) {
  constexpr int kRetryCap = 64;
  std::uint64_t state = direction_seed;
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    if (auto d = project_along(components, direction_from(state))) return *d;
  }
  throw DiagramError("NoGenericDirection: no generic projection direction found after " +
                     std::to_string(kRetryCap) + " attempts");
}

Diagram project(const LatticePolygon& p, std::uint64_t direction_seed) {
  return project_link({p}, direction_seed);
}

}  // namespace knotband
