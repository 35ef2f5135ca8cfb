#include <gtest/gtest.h>

#include <map>

#include "knotband/obstructions.hpp"
#include "test_data.hpp"

namespace knotband {
namespace {

const char* kGranny = "X[12,4,1,3] X[4,2,5,1] X[2,6,3,5] X[6,10,7,9] X[10,8,11,7] X[8,12,9,11]";
// Two figure-eight PDs with arcs 1 and 9 exchanged at their heads.
const char* kFigureEightSquared =
    "X[4,2,5,9] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8] X[12,10,13,1] X[16,14,9,13] X[14,11,15,12] X[10,15,11,16]";

const KnotTable& table() {
  static const KnotTable t = KnotTable::load(testing::data_path(""));
  return t;
}

const BandSide& side(const std::string& name) {
  static std::map<std::string, BandSide> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, resolve_side(name, table())).first;
  return it->second;
}

Status status(Criterion c, const std::string& a, const std::string& b, BandKind mode = BandKind::NonCoherent) {
  return c(side(a), side(b), mode).status;
}

constexpr auto O = Status::Obstructed;
constexpr auto N = Status::NotObstructed;
constexpr auto NA = Status::NotApplicable;

TEST(CompositeOracles, ConnectedSumsMultiplyHomfly) {
  EXPECT_EQ(homfly(PDCode::parse(kGranny)), table().at("3_1").homfly * table().at("3_1").homfly);
  EXPECT_EQ(homfly(PDCode::parse(kFigureEightSquared)), table().at("4_1").homfly * table().at("4_1").homfly);
  const auto granny = invariant_set(PDCode::parse(kGranny));
  EXPECT_EQ(granny.invariant_factors, (std::vector<std::int64_t>{3, 3}));
}

TEST(Criteria, E2) {
  const BandSide granny = side_from_diagram(Diagram::from_pd(PDCode::parse(kGranny)), "3_1#3_1");
  EXPECT_EQ(status(criterion_e2, "0_1", "3_1"), N);
  EXPECT_EQ(criterion_e2(side("0_1"), granny, BandKind::NonCoherent).status, O);
  EXPECT_EQ(status(criterion_e2, "8_18", "8_18"), N);
  EXPECT_EQ(status(criterion_e2, "0_1", "3_1", BandKind::Coherent), NA);
}

TEST(Criteria, JonesOmega) {
  const BandSide granny = side_from_diagram(Diagram::from_pd(PDCode::parse(kGranny)), "3_1#3_1");
  EXPECT_EQ(status(criterion_jones_omega, "3_1", "0_1"), N);
  EXPECT_EQ(criterion_jones_omega(granny, side("0_1"), BandKind::NonCoherent).status, O);
  EXPECT_EQ(status(criterion_jones_omega, "4_1", "4_1"), N);
  EXPECT_EQ(*granny.jones_omega_k, 2);
}

TEST(Criteria, QPhibar) {
  const BandSide sq = side_from_diagram(Diagram::from_pd(PDCode::parse(kFigureEightSquared)), "4_1#4_1");
  EXPECT_EQ(status(criterion_q_phibar, "4_1", "0_1"), N);
  EXPECT_EQ(criterion_q_phibar(sq, side("0_1"), BandKind::NonCoherent).status, O);
  EXPECT_EQ(status(criterion_q_phibar, "6_1", "6_1"), N);
  EXPECT_EQ(*sq.q_phibar_k, 2);
}

TEST(Criteria, Murasugi) {
  EXPECT_EQ(status(criterion_murasugi, "T(2,3)", "T(2,4)", BandKind::Coherent), N);
  EXPECT_EQ(status(criterion_murasugi, "T(2,3)", "T(2,8)", BandKind::Coherent), O);
  EXPECT_EQ(status(criterion_murasugi, "0_1", "unlink", BandKind::Coherent), N);
  EXPECT_EQ(status(criterion_murasugi, "3_1", "0_1", BandKind::NonCoherent), NA);
  EXPECT_EQ(criterion_murasugi(side("T(2,3)"), side("T(2,8)"), BandKind::Coherent).witness["min_abs_difference"], 3);
}

TEST(Criteria, KanenobuQuadraticResidue) {
  EXPECT_EQ(status(criterion_kanenobu_qr, "4_1", "0_1"), O);
  EXPECT_EQ(status(criterion_kanenobu_qr, "4_1", "3_1"), N);
  EXPECT_EQ(status(criterion_kanenobu_qr, "0_1", "5_1"), NA);  // u(5_1) = 2
}

TEST(Criteria, Yasuhara) {
  EXPECT_EQ(status(criterion_yasuhara, "4_1", "0_1"), O);
  EXPECT_EQ(status(criterion_yasuhara, "3_1", "0_1"), N);
  EXPECT_EQ(status(criterion_yasuhara, "0_1", "0_1"), N);
  EXPECT_EQ(status(criterion_yasuhara, "3_1", "4_1"), NA);
}

TEST(Criteria, KanenobuMiyazawa) {
  const auto r = criterion_km45(side("3_1"), side("0_1"), BandKind::NonCoherent);
  EXPECT_EQ(r.status, N);
  EXPECT_EQ(r.witness["jones_derivative_at_minus_one"], 8);
  EXPECT_EQ(status(criterion_km45, "9_49", "0_1"), NA);
  EXPECT_EQ(status(criterion_km45, "0_1", "0_1"), NA);
}

TEST(Criteria, SignatureDifference) {
  EXPECT_EQ(status(criterion_sigdif, "5_1", "5_1*"), N);
  EXPECT_EQ(status(criterion_sigdif, "7_1", "7_1*"), O);
  EXPECT_EQ(status(criterion_sigdif, "9_1", "9_1*"), NA);
  EXPECT_EQ(status(criterion_sigdif, "8_19", "8_19*"), NA);
}

TEST(Criteria, TorusClassification) {
  EXPECT_EQ(status(torus_classification, "T(2,3)", "T(2,7)"), N);
  EXPECT_EQ(status(torus_classification, "T(2,3)", "T(2,5)"), O);
  EXPECT_EQ(status(torus_classification, "T(2,3)", "T(2,-6)", BandKind::Coherent), N);
  EXPECT_EQ(status(torus_classification, "T(2,3)", "T(2,8)", BandKind::Coherent), O);
  EXPECT_EQ(status(torus_classification, "3_1*", "T(2,-7)"), N);
  EXPECT_EQ(status(torus_classification, "4_1", "0_1"), NA);
}

TEST(RunAll, NamedExamples) {
  const Verdict fig8 = run_all("4_1", "0_1", table());
  EXPECT_EQ(fig8.overall, O);
  EXPECT_EQ(fig8.at("yasuhara").status, O);
  EXPECT_EQ(fig8.at("kanenobu_qr").status, O);
  EXPECT_EQ(run_all("3_1", "3_1", table()).overall, N);
  const Verdict seven = run_all("7_1", "7_1*", table());
  EXPECT_EQ(seven.overall, O);
  EXPECT_EQ(seven.at("sigdif").status, O);
  EXPECT_EQ(run_all("5_1", "5_1*", table()).overall, N);
}

TEST(RunAll, TorusFamily) {
  for (int n = -9; n <= 9; n += 2) {
    const Verdict v = run_all("T(2,3)", "T(2," + std::to_string(n) + ")", table());
    const bool allowed = n == 1 || n == -1 || n == 3 || n == 7;
    EXPECT_EQ(v.overall, allowed ? N : O) << n;
  }
}

TEST(RunAll, JsonCarriesWitnessesAndHypotheses) {
  const auto j = run_all("4_1", "0_1", table()).to_json();
  EXPECT_EQ(j["overall"], "OBSTRUCTED");
  for (const auto& c : j["criteria"]) {
    if (c["status"] == "OBSTRUCTED") {
      EXPECT_FALSE(c["witness"].empty()) << c.dump();
    }
    if (c["status"] == "NOT_APPLICABLE") {
      EXPECT_FALSE(c["unmet_hypothesis"].get<std::string>().empty()) << c.dump();
    }
  }
}

std::vector<std::string> small_knots() {
  std::vector<std::string> out;
  for (const auto* r : table().up_to(8)) out.push_back(r->name);
  return out;
}

TEST(Properties, SymmetricInNonCoherentMode) {
  const auto names = small_knots();
  for (const auto& a : names) {
    for (const auto& b : names) {
      const Verdict ab = run_all(side(a), side(b));
      const Verdict ba = run_all(side(b), side(a));
      for (std::size_t c = 0; c < ab.criteria.size(); ++c) {
        ASSERT_EQ(ab.criteria[c].status, ba.criteria[c].status) << a << " " << b << " " << ab.criteria[c].criterion;
      }
    }
  }
}

TEST(Properties, MirrorEquivariant) {
  const auto names = small_knots();
  for (const auto& a : names) {
    for (const auto& b : names) {
      const auto& ra = table().at(a);
      const auto& rb = table().at(b);
      const Verdict v = run_all(side(a), side(b));
      const Verdict m = run_all(side(mirror_name(a, ra.chiral)), side(mirror_name(b, rb.chiral)));
      for (std::size_t c = 0; c < v.criteria.size(); ++c) {
        ASSERT_EQ(v.criteria[c].status, m.criteria[c].status) << a << " " << b << " " << v.criteria[c].criterion;
      }
    }
  }
}

TEST(Properties, ExponentsAgreeWithHomology) {
  for (const auto& name : small_knots()) {
    const BandSide& s = side(name);
    ASSERT_TRUE(s.jones_omega_k && s.q_phibar_k) << name;
    EXPECT_EQ(*s.jones_omega_k, s.delta3) << name;
    EXPECT_EQ(*s.q_phibar_k, s.rank5) << name;
  }
}

}  // namespace
}  // namespace knotband
