#include <gtest/gtest.h>

#include "knotband/knot_table.hpp"
#include "test_data.hpp"

namespace knotband {
namespace {

const KnotTable& table() {
  static const KnotTable t = KnotTable::load(testing::data_path(""));
  return t;
}

TEST(KnotTable, LoadsAndValidates) {
  const auto v = table().validate();
  EXPECT_TRUE(v.ok()) << (v.mismatches.empty() ? "" : v.mismatches.front());
  EXPECT_GT(v.records_checked, 400);
}

TEST(KnotTable, UnknotRecord) {
  const auto& r = table().at("0_1");
  EXPECT_EQ(r.det, 1);
  EXPECT_EQ(r.sigma, 0);
  EXPECT_EQ(r.homfly, LaurentPoly2::constant(1));
}

TEST(KnotTable, UnknottingNumbersOfNineFortyNine) {
  const auto& r = table().at("9_49");
  ASSERT_TRUE(r.u && r.u2);
  EXPECT_EQ(*r.u, 3);
  EXPECT_EQ(*r.u2, 3);
}

TEST(KnotTable, OnlyEightNineteenIsNotQuasiAlternatingUpToEight) {
  for (const auto* r : table().up_to(8)) {
    if (r->crossing_number == 0) continue;
    ASSERT_TRUE(r->qa) << r->name;
    EXPECT_EQ(*r->qa, r->name.rfind("8_19", 0) != 0) << r->name;
  }
}

TEST(KnotTable, SixtyThreeChiralityResolvedKnotsUpToEight) {
  int n = 0;
  for (const auto* r : table().up_to(8)) n += r->crossing_number >= 3;
  EXPECT_EQ(n, 63);
}

TEST(KnotTable, MirrorNames) {
  EXPECT_EQ(mirror_name("5_1"), "5_1*");
  EXPECT_EQ(mirror_name("5_1*"), "5_1");
  EXPECT_EQ(mirror_name("4_1", false), "4_1");
}

TEST(TorusLinks, KnotDiagramsMatchTable) {
  for (int n : {-9, -7, -5, -3, 3, 5, 7, 9}) {
    const Diagram d = torus_2n_diagram(n);
    EXPECT_EQ(d.component_count(), 1);
    const auto res = identify_diagram(d, table());
    ASSERT_TRUE(res.known()) << n << " " << res.diagnostic;
    const auto& r = table().at(res.name);
    ASSERT_TRUE(r.torus_param) << n;
    EXPECT_EQ(*r.torus_param, n);
  }
}

TEST(TorusLinks, OneCrossingClosureIsUnknot) {
  EXPECT_EQ(homfly(torus_2n_diagram(1)), LaurentPoly2::constant(1));
  EXPECT_EQ(homfly(torus_2n_diagram(-1)), LaurentPoly2::constant(1));
}

TEST(TorusLinks, LinkSignaturesFollowConvention) {
  for (const auto& r : torus_link_records(8)) {
    if (r.n == 0) continue;
    const auto par = invariant_set(torus_2n_diagram(r.n, true));
    const auto anti = invariant_set(torus_2n_diagram(r.n, false));
    EXPECT_EQ(par.det, r.det) << r.name;
    EXPECT_EQ(par.sigma, r.sigma_parallel) << r.name;
    EXPECT_EQ(anti.sigma, r.sigma_antiparallel) << r.name;
    EXPECT_EQ(par.n_components, 2);
  }
}

TEST(Identify, ReferenceDiagramsIdentifyToThemselves) {
  for (const auto* r : table().up_to(8)) {
    const auto res = identify_diagram(Diagram::from_pd(r->pd), table());
    EXPECT_TRUE(res.known()) << r->name << " " << res.diagnostic;
    EXPECT_EQ(res.name, r->name);
  }
}

TEST(Identify, CompositeGetsFactorDiagnostic) {
  // Granny knot: concatenated Gauss words of two positive trefoils.
  const auto granny = PDCode::parse("X[12,4,1,3] X[4,2,5,1] X[2,6,3,5] X[6,10,7,9] X[10,8,11,7] X[8,12,9,11]");
  const auto res = identify_diagram(Diagram::from_pd(granny), table());
  EXPECT_EQ(res.confidence, Confidence::Unknown);
  EXPECT_NE(res.diagnostic.find("composite"), std::string::npos) << res.diagnostic;
}

}  // namespace
}  // namespace knotband
