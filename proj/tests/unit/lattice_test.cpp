#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "knotband/lattice.hpp"

namespace knotband {
namespace {

LatticePolygon unit_square() { return LatticePolygon::validate({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}); }

PolygonError error_of(std::vector<Point3> v) {
  try {
    LatticePolygon::validate(std::move(v));
  } catch (const PolygonException& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a validation error";
  return PolygonError::NotClosed;
}

// Random unknot conformation: grow from the unit square at high fugacity.
LatticePolygon random_unknot(std::uint64_t seed, std::uint64_t moves = 20000) {
  BfacfChain chain(unit_square(), 0.25, 400);
  Rng rng(seed);
  chain.run(rng, moves);
  return chain.polygon();
}

TEST(Validate, UnitSquareIsValid) { EXPECT_EQ(unit_square().length(), 4); }

TEST(Validate, ReportsEachErrorKind) {
  EXPECT_EQ(error_of({{0, 0, 0}, {2, 0, 0}}), PolygonError::NotUnitStep);
  EXPECT_EQ(error_of({{0, 0, 0}, {1, 0, 0}, {0, 0, 0}, {0, 1, 0}}), PolygonError::SelfIntersecting);
  EXPECT_EQ(error_of({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {2, 1, 0}}), PolygonError::NotClosed);
  EXPECT_EQ(error_of({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}), PolygonError::OddLength);
}

TEST(Bfacf, UnitSquareMoves) {
  // Every proposal on the unit square is either rejected or a +2 move to an L-shaped hexagon.
  Rng rng(7);
  bool grew = false;
  for (int k = 0; k < 2000; ++k) {
    const LatticePolygon q = bfacf_step(unit_square(), 0.9, rng);
    ASSERT_TRUE(q.length() == 4 || q.length() == 6);
    if (q.length() == 6) grew = true;
    if (q.length() == 4) EXPECT_EQ(q, unit_square());
  }
  EXPECT_TRUE(grew);
}

TEST(Bfacf, EveryStateIsAValidPolygon) {
  BfacfChain chain(unit_square(), 0.22, 300);
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    chain.run(rng, 500);
    const LatticePolygon q = chain.polygon();
    const auto v = q.vertices();
    EXPECT_NO_THROW(LatticePolygon::validate({v.begin(), v.end()}));
  }
}

TEST(Bfacf, DetailedBalanceBetweenLengthsFourAndSix) {
  // Stationary weight per translation class is n * b^n: 3 squares of length 4 and 22 hexagons,
  // so P(6) / P(4) = 22 * 6 b^2 / (3 * 4) = 11 b^2.
  const double b = 0.2;
  BfacfChain chain(unit_square(), b, 1000);
  Rng rng(2024);
  constexpr int kBatches = 40;
  constexpr std::uint64_t kPerBatch = 100000;
  std::vector<double> ratios;
  double n4 = 0;
  double n6 = 0;
  for (int batch = 0; batch < kBatches; ++batch) {
    double b4 = 0;
    double b6 = 0;
    for (std::uint64_t k = 0; k < kPerBatch; ++k) {
      chain.step(rng);
      b4 += chain.length() == 4;
      b6 += chain.length() == 6;
    }
    n4 += b4;
    n6 += b6;
    ratios.push_back(b6 / b4);
  }
  double mean = 0;
  for (double r : ratios) mean += r / kBatches;
  double var = 0;
  for (double r : ratios) var += (r - mean) * (r - mean) / (kBatches - 1);
  const double se = std::sqrt(var / kBatches);
  const double expected = 11 * b * b;
  EXPECT_NEAR(n6 / n4, expected, 3 * se) << "se " << se;
}

TEST(Bfacf, LengthCapIsRespected) {
  BfacfChain chain(unit_square(), 0.5, 40);
  Rng rng(3);
  chain.run(rng, 200000);
  EXPECT_LE(chain.length(), 40);
  EXPECT_GT(chain.stats().cap_rejections, 0u);
}

TEST(ChainParams, ValidationRejectsBadParameters) {
  ChainParams p;
  EXPECT_NO_THROW(p.validate(24));
  p.fugacities = {0.2, 0.2};
  EXPECT_THROW(p.validate(24), std::invalid_argument);
  p.fugacities = {};
  EXPECT_THROW(p.validate(24), std::invalid_argument);
  p.fugacities = {0.2};
  p.max_length = 10;
  EXPECT_THROW(p.validate(24), std::invalid_argument);
}

TEST(CompositeChain, SameSeedGivesIdenticalStreams) {
  ChainParams p;
  p.fugacities = {0.18, 0.2, 0.22};
  p.burn_in = 5000;
  p.sample_interval = 1000;
  p.swap_interval = 100;
  p.rng_seed = 99;
  const auto a = cmc_sample(unit_square(), p, 30);
  const auto b = cmc_sample(unit_square(), p, 30);
  EXPECT_EQ(a, b);
  p.rng_seed = 100;
  EXPECT_NE(a, cmc_sample(unit_square(), p, 30));
}

TEST(CompositeChain, MeanLengthIncreasesWithFugacity) {
  ChainParams p;
  p.fugacities = {0.16, 0.19, 0.22};
  p.burn_in = 20000;
  p.sample_interval = 200;
  p.swap_interval = 100;
  p.rng_seed = 5;
  CompositeChain cmc(unit_square(), p);
  for (int k = 0; k < 10000; ++k) cmc.next();
  const auto d = cmc.diagnostics();
  ASSERT_EQ(d.mean_length.size(), 3u);
  EXPECT_LT(d.mean_length[0], d.mean_length[1]);
  EXPECT_LT(d.mean_length[1], d.mean_length[2]);
  EXPECT_GT(d.swaps_accepted[0], 0u);
}

TEST(Shrink, UnknotShrinksToUnitSquare) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LatticePolygon p = random_unknot(seed);
    const LatticePolygon s = shrink(p, 4);
    EXPECT_EQ(s.length(), 4) << "seed " << seed << " from length " << p.length();
  }
}

TEST(Shrink, NeverLengthens) {
  const LatticePolygon p = random_unknot(42, 3000);
  EXPECT_LE(shrink(p, p.length()).length(), p.length());
  EXPECT_EQ(shrink(unit_square(), 4), unit_square());
}

TEST(PolygonFile, RoundTrip) {
  std::vector<NamedPolygon> in = {{"0_1", unit_square()}, {"0_1", random_unknot(8, 2000)}};
  std::stringstream ss;
  write_polygons(ss, in, {"fugacities=0.2 n_chains=1"});
  const auto out = read_polygons(ss);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].knot, "0_1");
  EXPECT_EQ(out[0].polygon, in[0].polygon);
  EXPECT_EQ(out[1].polygon, in[1].polygon);
}

TEST(PolygonFile, RejectsBadInput) {
  std::stringstream bad_len("# knot=0_1 length=6\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n");
  EXPECT_THROW(read_polygons(bad_len), std::runtime_error);
  std::stringstream bad_geom("# knot=0_1 length=4\n0 0 0\n2 0 0\n2 1 0\n0 1 0\n");
  EXPECT_THROW(read_polygons(bad_geom), PolygonException);
  std::stringstream bad_text("0 0 zero\n");
  EXPECT_THROW(read_polygons(bad_text), std::runtime_error);
}

}  // namespace
}  // namespace knotband
