// Searches CMC samples for lattice conformations realizing specific bandings and writes the
// shipped banding corpus (data/corpus).

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotband/diagram.hpp"
#include "knotband/knot_table.hpp"
#include "knotband/lattice.hpp"
#include "knotband/pipeline.hpp"
#include "knotband/reconnection.hpp"

namespace {

using namespace knotband;

struct Target {
  std::string id;
  std::string substrate;
  BandKind kind;
  std::string product;
  /// Knot type whose conformations are searched. When it is the product (non-coherent only),
  /// the band is found in reverse and carried over through the reconnection involution.
  std::string search_knot;
  /// Required |linking number| of a two-component product (cheap prefilter), or -1.
  int abs_lk = -1;
};

const std::vector<Target> kPlan = {
    {"t23_to_t27", "3_1", BandKind::NonCoherent, "7_1", "7_1"},
    {"t23_to_t23", "3_1", BandKind::NonCoherent, "3_1", "3_1"},
    {"t23_to_unknot", "3_1", BandKind::NonCoherent, "0_1", "3_1"},
    {"t23_to_t2m6", "3_1", BandKind::Coherent, "T(2,-6)", "7_1*", 3},
    {"t23_to_t22", "3_1", BandKind::Coherent, "T(2,2)", "3_1", 1},
    {"t23_to_t24", "3_1", BandKind::Coherent, "T(2,4)", "3_1", 2},
    {"zekovic_5_1_mirror", "5_1", BandKind::NonCoherent, "5_1*", "5_1"},
};

std::string product_name(const ReconnectionOutcome& out, const KnotTable& table, const IdentifyOptions& opts) {
  const auto r = out.products.size() == 1 ? identify(out.products.front(), table, opts)
                                          : identify_link(out.products, table, opts);
  return r.known() ? r.name : std::string("Unknown");
}

/// Joins two disjoint components with a coherent band on the unit square whose sides are edge i
/// of `a` and an edge of `b` running the opposite way. Returns the merged knot and its site (the
/// two band edges), which reconnects back to {a, b}.
std::optional<std::pair<LatticePolygon, SitePair>> merge(const LatticePolygon& a, const LatticePolygon& b, int i,
                                                         Point3 u) {
  const Point3 a0 = a.vertex(i), a1 = a.vertex(i + 1);
  int j = -1;
  for (int k = 0; k < b.length(); ++k) {
    if (b.vertex(k) == a1 + u && b.vertex(k + 1) == a0 + u) {
      j = k;
      break;
    }
  }
  if (j < 0) return std::nullopt;
  std::vector<Point3> v;
  for (int k = 0; k <= i; ++k) v.push_back(a.vertex(k));
  for (int k = 1; k <= b.length(); ++k) v.push_back(b.vertex(j + k));
  for (int k = i + 1; k < a.length(); ++k) v.push_back(a.vertex(k));
  const LatticePolygon merged = LatticePolygon::validate(std::move(v));
  const auto site = site_at(merged, i, i + b.length());
  if (!site) return std::nullopt;
  return std::make_pair(merged, *site);
}

/// Coherent bandings K -> L found backwards: L is sampled as a coherent product of conformations
/// of `link_source`, then every merge band on L is tried.
std::optional<CorpusBanding> search_by_merge(const Target& t, const std::string& link_source, int abs_lk,
                                             const KnotTable& table, const std::vector<NamedPolygon>& seeds,
                                             const ChainParams& params, std::uint64_t max_samples) {
  CompositeChain chain(seed_for(link_source, seeds), params);
  std::optional<CorpusBanding> best;
  const Point3 dirs[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::uint64_t links = 0;
  for (std::uint64_t s = 0; s < max_samples; ++s) {
    const LatticePolygon conf = chain.next();
    if (best && best->polygon.length() <= conf.length()) continue;
    for (const auto& site : find_sites(conf, Alignment::Antiparallel)) {
      const auto out = reconnect(conf, site);
      if (std::abs(linking_number(out.products[0], out.products[1])) != abs_lk) continue;
      if (product_name(out, table, {}) != t.product) continue;
      ++links;
      for (const bool flip : {false, true}) {
        const LatticePolygon& a = out.products[0];
        std::vector<Point3> bv(out.products[1].vertices().begin(), out.products[1].vertices().end());
        if (flip) std::reverse(bv.begin(), bv.end());
        const LatticePolygon b = LatticePolygon::validate(bv);
        for (int i = 0; i < a.length(); ++i) {
          for (const Point3 u : dirs) {
            const Point3 d = a.edge_direction(i);
            if (u == d || u == Point3{-d.x, -d.y, -d.z}) continue;
            const auto m = merge(a, b, i, u);
            if (!m) continue;
            const auto knot = identify(m->first, table);
            if (!knot.known() || knot.name != t.substrate) continue;
            if (product_name(reconnect(m->first, m->second), table, {}) != t.product) continue;
            if (best && best->polygon.length() <= m->first.length()) continue;
            best = CorpusBanding{t.id, t.substrate, t.kind, m->second.edge_a, m->second.edge_b, t.product, m->first};
            std::cerr << t.id << ": length " << m->first.length() << " at sample " << s << " (" << links
                      << " links tried)\n";
          }
        }
      }
    }
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find lattice realizations of the shipped banding corpus"};
  std::string data = "data";
  std::string out_dir = "data/corpus";
  std::uint64_t max_samples = 20000;
  std::uint64_t seed = 20240607;
  double fugacity = 0.17;
  app.add_option("--data", data);
  app.add_option("--out", out_dir);
  app.add_option("--max-samples", max_samples, "conformations per substrate");
  app.add_option("--seed", seed);
  app.add_option("--fugacity", fugacity, "lowest CMC fugacity (short conformations)");
  std::vector<std::string> only;
  app.add_option("--only", only, "search only these banding ids (the corpus is written only when all are searched)")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const auto table = KnotTable::load(data);
  const auto seeds = read_polygon_file(data + "/seeds/seeds.txt");
  IdentifyOptions iopts;

  std::map<std::string, CorpusBanding> found;
  std::map<std::string, std::vector<const Target*>> by_search_knot;
  auto wanted = [&](const Target& t) { return only.empty() || std::find(only.begin(), only.end(), t.id) != only.end(); };
  for (const auto& t : kPlan) {
    if (!wanted(t)) continue;
    if (t.kind == BandKind::Coherent && t.search_knot != t.substrate) {
      ChainParams params;
      params.fugacities = {fugacity, fugacity + 0.01, fugacity + 0.02, fugacity + 0.03};
      params.burn_in = 100000;
      params.sample_interval = 2000;
      params.rng_seed = seed;
      if (auto b = search_by_merge(t, t.search_knot, t.abs_lk, table, seeds, params, max_samples)) {
        found.insert_or_assign(t.id, *b);
      }
      continue;
    }
    by_search_knot[t.search_knot].push_back(&t);
  }

  for (const auto& [search_knot, targets] : by_search_knot) {
    ChainParams params;
    params.fugacities = {fugacity, fugacity + 0.01, fugacity + 0.02, fugacity + 0.03};
    params.burn_in = 100000;
    params.sample_interval = 2000;
    params.rng_seed = seed;
    CompositeChain chain(seed_for(search_knot, seeds), params);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t s = 0; s < max_samples; ++s) {
      const LatticePolygon conf = chain.next();
      for (const auto* t : targets) {
        auto it = found.find(t->id);
        // Keep the shortest realization seen so far.
        if (it != found.end() && it->second.polygon.length() <= conf.length()) continue;
        const bool reverse = t->search_knot != t->substrate;
        const Alignment a = t->kind == BandKind::NonCoherent ? Alignment::Parallel : Alignment::Antiparallel;
        for (const auto& site : find_sites(conf, a)) {
          const auto out = reconnect(conf, site);
          if (t->abs_lk >= 0 && std::abs(linking_number(out.products[0], out.products[1])) != t->abs_lk) continue;
          if (product_name(out, table, iopts) != (reverse ? t->substrate : t->product)) continue;
          if (!reverse) {
            found.insert_or_assign(t->id, CorpusBanding{t->id, t->substrate, t->kind, site.edge_a, site.edge_b,
                                                        t->product, conf});
          } else {
            const auto& back = out.products.front();
            const auto [ea, eb] = out.new_edges.front();
            const auto fwd = site_at(back, ea, eb);
            if (!fwd || product_name(reconnect(back, *fwd), table, iopts) != t->product) continue;
            found.insert_or_assign(t->id, CorpusBanding{t->id, t->substrate, t->kind, fwd->edge_a, fwd->edge_b,
                                                        t->product, back});
          }
          std::cerr << t->id << ": length " << conf.length() << " at sample " << s << "\n";
          break;
        }
      }
    }
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << search_knot << ": " << max_samples << " samples in " << dt << " s\n";
  }

  std::vector<CorpusBanding> corpus;
  int missing = 0;
  for (const auto& t : kPlan) {
    if (!wanted(t)) continue;
    auto it = found.find(t.id);
    if (it == found.end()) {
      std::cerr << "not found: " << t.id << "\n";
      ++missing;
      continue;
    }
    corpus.push_back(it->second);
  }
  if (!only.empty()) return missing == 0 ? 0 : 1;
  write_corpus(out_dir, corpus,
               {"generated by find_corpus seed=" + std::to_string(seed) + " max_samples=" +
                std::to_string(max_samples) + " fugacity=" + std::to_string(fugacity)});
  return missing == 0 ? 0 : 1;
}
