#include "knotband/reconnection.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace knotband {
namespace {

struct PointHash {
  std::size_t operator()(Point3 p) const {
    std::uint64_t h = static_cast<std::uint32_t>(p.x);
    h = h * 0x9e3779b97f4a7c15ull ^ static_cast<std::uint32_t>(p.y);
    h = h * 0x9e3779b97f4a7c15ull ^ static_cast<std::uint32_t>(p.z);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

bool is_edge(const LatticePolygon& p, const std::unordered_map<Point3, int, PointHash>& index, Point3 a, Point3 b) {
  auto ia = index.find(a);
  auto ib = index.find(b);
  if (ia == index.end() || ib == index.end()) return false;
  const int n = p.length();
  const int d = ((ia->second - ib->second) % n + n) % n;
  return d == 1 || d == n - 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        out.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + f(v[i]);
  return out;
}

}  // namespace

std::string to_string(Alignment a) { return a == Alignment::Parallel ? "parallel" : "antiparallel"; }
std::string to_string(BandKind k) { return k == BandKind::NonCoherent ? "non-coherent" : "coherent"; }

SiteScan scan_sites(const LatticePolygon& p) {
  const int n = p.length();
  std::unordered_map<Point3, int, PointHash> index;
  index.reserve(static_cast<std::size_t>(n) * 2);
  for (int i = 0; i < n; ++i) index.emplace(p.vertex(i), i);

  SiteScan scan;
  for (int i = 0; i < n; ++i) {
    const Point3 a0 = p.vertex(i);
    const Point3 a1 = p.vertex(i + 1);
    const Point3 dir = a1 - a0;
    for (const Point3 u : kUnitSteps) {
      if (u == dir || u == Point3{-dir.x, -dir.y, -dir.z}) continue;
      auto b0 = index.find(a0 + u);
      auto b1 = index.find(a1 + u);
      if (b0 == index.end() || b1 == index.end()) continue;
      int j = -1;
      Alignment al = Alignment::Parallel;
      if (p.wrap(b0->second + 1) == b1->second) {
        j = b0->second;
      } else if (p.wrap(b1->second + 1) == b0->second) {
        j = b1->second;
        al = Alignment::Antiparallel;
      } else {
        continue;
      }
      if (j <= i) continue;  // each pair is reported once, from its lower edge
      if (is_edge(p, index, a0, a0 + u) || is_edge(p, index, a1, a1 + u)) {
        ++scan.excluded;
        continue;
      }
      scan.sites.push_back({i, j, {a0, a1, a1 + u, a0 + u}, al});
    }
  }
  return scan;
}

std::vector<SitePair> find_sites(const LatticePolygon& p) { return scan_sites(p).sites; }

std::vector<SitePair> find_sites(const LatticePolygon& p, Alignment alignment) {
  auto sites = find_sites(p);
  std::erase_if(sites, [&](const SitePair& s) { return s.alignment != alignment; });
  return sites;
}

ReconnectionOutcome reconnect(const LatticePolygon& p, const SitePair& s) {
  const int n = p.length();
  const int i = s.edge_a;
  const int j = s.edge_b;
  if (!(0 <= i && i < j && j < n)) throw ReplacementCollision("site edges out of range");
  const Point3 u = s.square[3] - s.square[0];
  const bool parallel = p.vertex(j) == p.vertex(i) + u && p.vertex(j + 1) == p.vertex(i + 1) + u;
  const bool anti = p.vertex(j) == p.vertex(i + 1) + u && p.vertex(j + 1) == p.vertex(i) + u;
  if (manhattan(u, {0, 0, 0}) != 1 || parallel == anti ||
      (parallel ? Alignment::Parallel : Alignment::Antiparallel) != s.alignment) {
    throw ReplacementCollision("site does not match the polygon");
  }
  ReconnectionOutcome out;
  try {
    if (parallel) {
      // v0..vi, vj, v(j-1), .., v(i+1), v(j+1), .., v(n-1): the inner arc is traversed backwards.
      std::vector<Point3> v;
      v.reserve(static_cast<std::size_t>(n));
      for (int k = 0; k <= i; ++k) v.push_back(p.vertex(k));
      for (int k = j; k >= i + 1; --k) v.push_back(p.vertex(k));
      for (int k = j + 1; k < n; ++k) v.push_back(p.vertex(k));
      out.kind = BandKind::NonCoherent;
      out.products.push_back(LatticePolygon::validate(std::move(v)));
      out.new_edges.push_back({i, j});
    } else {
      std::vector<Point3> inner;
      for (int k = i + 1; k <= j; ++k) inner.push_back(p.vertex(k));
      std::vector<Point3> outer;
      for (int k = j + 1; k <= i + n; ++k) outer.push_back(p.vertex(k));
      out.kind = BandKind::Coherent;
      const int inner_len = static_cast<int>(inner.size());
      const int outer_len = static_cast<int>(outer.size());
      out.products.push_back(LatticePolygon::validate(std::move(inner)));
      out.products.push_back(LatticePolygon::validate(std::move(outer)));
      out.new_edges.push_back({inner_len - 1, inner_len - 1});
      out.new_edges.push_back({outer_len - 1, outer_len - 1});
    }
  } catch (const PolygonException& e) {
    throw ReplacementCollision(std::string("product is not a valid polygon: ") + e.what());
  }
  return out;
}

void write_event_log_header(std::ostream& out) {
  out << "substrate_knot,substrate_length,site_alignment,product_knots,product_lengths,chain_id,step\n";
}

void write_event(std::ostream& out, const ReconnectionEvent& e) {
  out << csv_field(e.substrate_knot) << ',' << e.substrate_length << ',' << (e.has_site ? to_string(e.alignment) : "none") << ','
      << csv_field(join(e.product_knots, [](const std::string& s) { return s; })) << ','
      << join(e.product_lengths, [](int l) { return std::to_string(l); }) << ',' << e.chain_id << ',' << e.step
      << '\n';
}

std::vector<ReconnectionEvent> read_event_log(std::istream& in) {
  std::vector<ReconnectionEvent> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.rfind("substrate_knot,", 0) == 0) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw std::runtime_error("malformed event on line " + std::to_string(line_no));
    ReconnectionEvent e;
    e.substrate_knot = f[0];
    e.substrate_length = std::stoi(f[1]);
    if (f[2] == "parallel") {
      e.alignment = Alignment::Parallel;
    } else if (f[2] == "antiparallel") {
      e.alignment = Alignment::Antiparallel;
    } else if (f[2] == "none") {
      e.has_site = false;
    } else {
      throw std::runtime_error("unknown alignment on line " + std::to_string(line_no));
    }
    if (!f[3].empty()) e.product_knots = split(f[3], ';');
    if (!f[4].empty()) {
      for (const auto& l : split(f[4], ';')) e.product_lengths.push_back(std::stoi(l));
    }
    e.chain_id = std::stoi(f[5]);
    e.step = std::stoull(f[6]);
    out.push_back(std::move(e));
  }
  return out;
}

std::optional<SitePair> site_at(const LatticePolygon& p, int edge_a, int edge_b) {
  const int lo = std::min(edge_a, edge_b);
  const int hi = std::max(edge_a, edge_b);
  for (const auto& s : find_sites(p)) {
    if (s.edge_a == lo && s.edge_b == hi) return s;
  }
  return std::nullopt;
}

std::vector<CorpusBanding> read_corpus(const std::string& dir) {
  std::ifstream manifest(dir + "/bandings.tsv");
  if (!manifest) throw std::runtime_error("cannot open " + dir + "/bandings.tsv");
  const auto polygons = read_polygon_file(dir + "/bandings.txt");
  std::vector<CorpusBanding> out;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("id\t", 0) == 0) continue;
    const auto f = split(line, '\t');
    if (f.size() != 6) throw std::runtime_error("malformed corpus row: " + line);
    if (out.size() >= polygons.size()) throw std::runtime_error("corpus manifest lists more bandings than conformations");
    BandKind kind = BandKind::NonCoherent;
    if (f[2] == to_string(BandKind::Coherent)) {
      kind = BandKind::Coherent;
    } else if (f[2] != to_string(BandKind::NonCoherent)) {
      throw std::runtime_error("unknown band kind " + f[2]);
    }
    const auto& named = polygons[out.size()];
    if (named.knot != f[1]) {
      throw std::runtime_error("corpus conformation " + std::to_string(out.size()) + " is labelled " + named.knot +
                               ", manifest says " + f[1]);
    }
    CorpusBanding b{f[0], f[1], kind, std::stoi(f[3]), std::stoi(f[4]), f[5], named.polygon};
    out.push_back(std::move(b));
  }
  if (out.size() != polygons.size()) throw std::runtime_error("corpus manifest and polygon file disagree in size");
  return out;
}

void write_corpus(const std::string& dir, const std::vector<CorpusBanding>& bandings,
                  const std::vector<std::string>& metadata) {
  std::ofstream manifest(dir + "/bandings.tsv", std::ios::binary);
  if (!manifest) throw std::runtime_error("IoFailure: cannot write " + dir + "/bandings.tsv");
  for (const auto& m : metadata) manifest << "# " << m << "\n";
  manifest << "id\tsubstrate\tkind\tedge_a\tedge_b\tproduct\n";
  std::vector<NamedPolygon> polys;
  for (const auto& b : bandings) {
    manifest << b.id << '\t' << b.substrate << '\t' << to_string(b.kind) << '\t' << b.edge_a << '\t' << b.edge_b
             << '\t' << b.product << '\n';
    polys.push_back({b.substrate, b.polygon});
  }
  write_polygon_file(dir + "/bandings.txt", polys, metadata);
}

}  // namespace knotband
