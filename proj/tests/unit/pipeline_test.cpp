#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "knotband/diagram.hpp"
#include "knotband/knot_table.hpp"
#include "knotband/obstructions.hpp"
#include "knotband/pipeline.hpp"
#include "test_data.hpp"

namespace knotband {
namespace {

using knotband::testing::data_path;

const KnotTable& table() {
  static const KnotTable t = KnotTable::load(KNOTBAND_DATA_DIR);
  return t;
}

const std::vector<NamedPolygon>& seeds() {
  static const auto s = read_polygon_file(data_path("seeds/seeds.txt"));
  return s;
}

LatticePolygon rect(std::vector<Point3> v) { return LatticePolygon::validate(std::move(v)); }

// 2x2 square in z = 0 and a 2x2 square in y = 1 threaded once through it.
LatticePolygon hopf_a() {
  return rect({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {2, 1, 0}, {2, 2, 0}, {1, 2, 0}, {0, 2, 0}, {0, 1, 0}});
}
LatticePolygon hopf_b(bool reversed) {
  std::vector<Point3> v{{1, 1, -1}, {1, 1, 0}, {1, 1, 1}, {2, 1, 1}, {3, 1, 1}, {3, 1, 0}, {3, 1, -1}, {2, 1, -1}};
  if (reversed) std::reverse(v.begin(), v.end());
  return rect(v);
}

ChainParams quick_chain(std::uint64_t seed) {
  ChainParams p;
  p.fugacities = {0.19, 0.2};
  p.burn_in = 20000;
  p.sample_interval = 1000;
  p.swap_interval = 500;
  p.rng_seed = seed;
  return p;
}

TEST(LinkingNumber, HopfLinkAndOrientation) {
  EXPECT_EQ(std::abs(linking_number(hopf_a(), hopf_b(false))), 1);
  EXPECT_EQ(linking_number(hopf_a(), hopf_b(false)), -linking_number(hopf_a(), hopf_b(true)));
  EXPECT_EQ(linking_number(hopf_a(), hopf_b(false)), linking_number(hopf_b(false), hopf_a()));
  EXPECT_EQ(linking_number(hopf_a(), hopf_a().translated({10, 0, 0})), 0);
}

TEST(LinkingNumber, HopfOrientationsNameBothChiralities) {
  const auto pos = identify_link({hopf_a(), hopf_b(false)}, table());
  const auto neg = identify_link({hopf_a(), hopf_b(true)}, table());
  ASSERT_TRUE(pos.known());
  ASSERT_TRUE(neg.known());
  const int lk = linking_number(hopf_a(), hopf_b(false));
  EXPECT_EQ(pos.name, lk > 0 ? "T(2,2)" : "T(2,-2)");
  EXPECT_EQ(neg.name, lk > 0 ? "T(2,-2)" : "T(2,2)");
  EXPECT_EQ(pos.diagnostic, "parallel orientation");
}

// Oracle: a product identified as T(2, n) with n even has |lk| = |n| / 2.
TEST(LinkingNumber, AgreesWithTorusLinkIdentification) {
  CompositeChain chain(seed_for("3_1", seeds()), quick_chain(3));
  int checked = 0;
  for (int s = 0; s < 40; ++s) {
    const auto conf = chain.next();
    for (const auto& site : find_sites(conf, Alignment::Antiparallel)) {
      const auto out = reconnect(conf, site);
      const auto r = identify_link(out.products, table());
      if (!r.known()) continue;
      const int n = std::stoi(r.name.substr(r.name.find(',') + 1));
      EXPECT_EQ(std::abs(linking_number(out.products[0], out.products[1])), std::abs(n) / 2) << r.name;
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(ChooseSite, EmptyAndDeterministic) {
  EXPECT_EQ(choose_site({}, 1, 0), nullptr);
  const auto conf = CompositeChain(seed_for("4_1", seeds()), quick_chain(5)).next();
  const auto sites = find_sites(conf, Alignment::Parallel);
  ASSERT_GE(sites.size(), 2u);
  for (std::uint64_t step = 0; step < 20; ++step) {
    EXPECT_EQ(choose_site(sites, 9, step), choose_site(sites, 9, step));
  }
}

TEST(ChooseSite, UniformOverSites) {
  std::vector<SitePair> sites(5);
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int step = 0; step < n; ++step) ++counts[static_cast<std::size_t>(choose_site(sites, 77, step) - sites.data())];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 5.0) * (c - n / 5.0) / (n / 5.0);
  EXPECT_LT(chi2, 18.47);  // chi-square 4 dof, p = 0.001
}

TEST(Recombine, EventsAreConsistentWithTheSubstrate) {
  RecombineOptions opts;
  opts.chain = quick_chain(11);
  opts.events = 40;
  const auto events = recombine("3_1", seed_for("3_1", seeds()), table(), opts);
  ASSERT_EQ(events.size(), 40u);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    EXPECT_EQ(e.step, i);
    EXPECT_EQ(e.substrate_knot, "3_1");
    if (!e.has_site) {
      EXPECT_TRUE(e.product_knots.empty());
      continue;
    }
    EXPECT_EQ(e.alignment, Alignment::Parallel);
    ASSERT_EQ(e.product_lengths.size(), 1u);
    EXPECT_EQ(e.product_lengths[0], e.substrate_length);
    ASSERT_EQ(e.product_knots.size(), 1u);
  }
}

TEST(Recombine, CoherentModeGivesTwoComponents) {
  RecombineOptions opts;
  opts.chain = quick_chain(12);
  opts.events = 25;
  opts.mode = BandKind::Coherent;
  for (const auto& e : recombine("3_1", seed_for("3_1", seeds()), table(), opts)) {
    if (!e.has_site) continue;
    EXPECT_EQ(e.alignment, Alignment::Antiparallel);
    ASSERT_EQ(e.product_lengths.size(), 2u);
    EXPECT_EQ(e.product_lengths[0] + e.product_lengths[1], e.substrate_length);
  }
}

std::string event_log(const std::vector<ReconnectionEvent>& events) {
  std::ostringstream out;
  write_event_log_header(out);
  for (const auto& e : events) write_event(out, e);
  return out.str();
}

TEST(Recombine, DeterministicAndIndependentOfWorkerCount) {
  RecombineOptions opts;
  opts.chain = quick_chain(13);
  opts.events = 30;
  opts.block = 7;
  const auto a = event_log(recombine("4_1", seed_for("4_1", seeds()), table(), opts));
  const auto b = event_log(recombine("4_1", seed_for("4_1", seeds()), table(), opts));
  opts.workers = 3;
  const auto c = event_log(recombine("4_1", seed_for("4_1", seeds()), table(), opts));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  opts.chain.rng_seed = 14;
  EXPECT_NE(a, event_log(recombine("4_1", seed_for("4_1", seeds()), table(), opts)));
}

TEST(Recombine, UnknownSeedKnotThrows) { EXPECT_THROW(seed_for("9_99", seeds()), std::invalid_argument); }

TEST(SiteAt, FindsUsableSitesOnly) {
  const LatticePolygon r = rect({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {3, 1, 0}, {2, 1, 0}, {1, 1, 0}, {0, 1, 0}});
  const auto s = site_at(r, 5, 1);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->edge_a, 1);
  EXPECT_EQ(s->edge_b, 5);
  EXPECT_FALSE(site_at(r, 0, 1).has_value());
  EXPECT_FALSE(site_at(r, 0, 4).has_value());  // excluded: replacement edges already present
}

TEST(Corpus, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "knotband_corpus_test";
  std::filesystem::create_directories(dir);
  const LatticePolygon r = rect({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {3, 1, 0}, {2, 1, 0}, {1, 1, 0}, {0, 1, 0}});
  const std::vector<CorpusBanding> in{{"split", "0_1", BandKind::Coherent, 1, 5, "T(2,0)", r},
                                      {"tref", "3_1", BandKind::NonCoherent, 3, 9, "0_1", seed_for("3_1", seeds())}};
  write_corpus(dir.string(), in, {"test corpus"});
  const auto out = read_corpus(dir.string());
  ASSERT_EQ(out.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(out[i].id, in[i].id);
    EXPECT_EQ(out[i].substrate, in[i].substrate);
    EXPECT_EQ(out[i].kind, in[i].kind);
    EXPECT_EQ(out[i].edge_a, in[i].edge_a);
    EXPECT_EQ(out[i].edge_b, in[i].edge_b);
    EXPECT_EQ(out[i].product, in[i].product);
    EXPECT_EQ(out[i].polygon, in[i].polygon);
  }
  // A manifest row whose substrate disagrees with the conformation label is rejected.
  {
    std::ofstream m(dir / "bandings.tsv", std::ios::app);
    m << "extra\t5_1\tnon-coherent\t0\t1\t5_1*\n";
  }
  EXPECT_THROW(read_corpus(dir.string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}

// Every shipped banding realizes its captioned product, and no criterion obstructs it.
TEST(Corpus, ShippedBandingsIdentifyAndAreUnobstructed) {
  const auto corpus = read_corpus(data_path("corpus"));
  ASSERT_EQ(corpus.size(), 7u);
  for (const auto& b : corpus) {
    const auto site = site_at(b.polygon, b.edge_a, b.edge_b);
    ASSERT_TRUE(site.has_value()) << b.id;
    EXPECT_EQ(site->alignment, b.kind == BandKind::NonCoherent ? Alignment::Parallel : Alignment::Antiparallel);
    EXPECT_EQ(identify(b.polygon, table()).name, b.substrate) << b.id;
    const auto out = reconnect(b.polygon, *site);
    const auto r = out.products.size() == 1 ? identify(out.products.front(), table())
                                            : identify_link(out.products, table());
    EXPECT_EQ(r.name, b.product) << b.id;
    EXPECT_NE(run_all(b.substrate, b.product, table(), b.kind).overall, Status::Obstructed) << b.id;
  }
}

}  // namespace
}  // namespace knotband
