#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "knotband/stats.hpp"

namespace knotband {
namespace {

ReconnectionEvent event(const std::string& substrate, const std::vector<std::string>& products, std::uint64_t step) {
  ReconnectionEvent e;
  e.substrate_knot = substrate;
  e.substrate_length = 40;
  e.product_knots = products;
  e.has_site = !products.empty();
  for (std::size_t i = 0; i < products.size(); ++i) e.product_lengths.push_back(40);
  e.step = step;
  return e;
}

TEST(BatchMeans, TooFewBatches) {
  EXPECT_THROW(batch_mean_ci({0.5}), TooFewBatches);
  EXPECT_THROW(ratio_estimate({1.0}, {2.0}), TooFewBatches);
}

TEST(BatchMeans, AllZeroBatches) {
  const auto e = batch_mean_ci(std::vector<double>(30, 0.0));
  EXPECT_EQ(e.estimate, 0.0);
  EXPECT_EQ(e.half_width, 0.0);
}

TEST(BatchMeans, StudentTHalfWidthByHand) {
  // Values 1, 2, 3: mean 2, s = 1, t_{0.975, 2} = 4.302652729696142.
  const auto e = batch_mean_ci({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(e.estimate, 2.0);
  EXPECT_NEAR(e.half_width, 4.302652729696142 / std::sqrt(3.0), 1e-9);
}

TEST(Ratio, IdenticalBatchesGiveOneWithZeroWidth) {
  const std::vector<double> v = {3, 5, 8, 1};
  const auto e = ratio_estimate(v, v);
  EXPECT_DOUBLE_EQ(e.estimate, 1.0);
  EXPECT_DOUBLE_EQ(e.half_width, 0.0);
}

TEST(Ratio, ZeroDenominator) { EXPECT_THROW(ratio_estimate({0, 0}, {0, 0}), ZeroDenominator); }

TEST(Coverage, BernoulliBatchMeans) {
  std::mt19937_64 rng(1);
  std::binomial_distribution<int> batch(1000, 0.5);
  int covered = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> props;
    for (int b = 0; b < 30; ++b) props.push_back(batch(rng) / 1000.0);
    const auto e = batch_mean_ci(props);
    covered += e.low() <= 0.5 && 0.5 <= e.high();
  }
  EXPECT_GE(covered, 930);
  EXPECT_LE(covered, 970);
}

TEST(Coverage, ConditionalRatio) {
  std::mt19937_64 rng(2);
  const double p = 0.2;
  int covered = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> num, den;
    for (int b = 0; b < 30; ++b) {
      const int d = std::binomial_distribution<int>(1000, 0.6)(rng);
      num.push_back(std::binomial_distribution<int>(d, p)(rng));
      den.push_back(d);
    }
    const auto e = ratio_estimate(num, den);
    covered += e.low() <= p && p <= e.high();
  }
  EXPECT_GE(covered, 930);
  EXPECT_LE(covered, 970);
}

TEST(Coverage, WidthShrinksLikeInverseSquareRoot) {
  // Half-width against batch size on a log-log scale has slope -1/2 (within 20%).
  std::mt19937_64 rng(3);
  std::vector<double> xs, ys;
  for (int n : {100, 400, 1600, 6400, 25600}) {
    double mean_width = 0;
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> props;
      std::binomial_distribution<int> batch(n, 0.3);
      for (int b = 0; b < 30; ++b) props.push_back(static_cast<double>(batch(rng)) / n);
      mean_width += batch_mean_ci(props).half_width / 200;
    }
    xs.push_back(std::log(n));
    ys.push_back(std::log(mean_width));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / xs.size();
    my += ys[i] / ys.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, -0.5, 0.1);
}

TEST(CosmeticRates, Per1e5Rendering) {
  const std::uint64_t total = 3000000;
  EXPECT_EQ(format_per_1e5(104, total), "3.467");
  EXPECT_EQ(format_per_1e5(84, total), "2.800");
  EXPECT_EQ(format_per_1e5(0, total), "0");
  EXPECT_EQ(format_per_1e5(1285, total), "42.833");
  EXPECT_EQ(format_per_1e5(1392, total), "46.400");
  // One event in 3e6 renders as 0.033 per 1e5.
  EXPECT_EQ(format_per_1e5(1, total), "0.033");
}

TEST(Network, RecordsCountsAndUnknowns) {
  TransitionNetwork net("5_1", 2);
  net.record(event("5_1", {"5_1*"}, 0));
  net.record(event("5_1", {"Unknown"}, 1));
  net.record(event("5_1", {}, 2));
  net.record(event("5_1", {"0_1"}, 3));
  net.record(event("5_1", {"8_8*|10_129"}, 4));
  EXPECT_EQ(net.attempted(), 5u);
  EXPECT_EQ(net.usable(), 4u);
  EXPECT_EQ(net.unknown(), 2u);
  EXPECT_EQ(net.identified(), 2u);
  EXPECT_EQ(net.counts().at("5_1*"), 1u);
  const auto row = net.row("5_1*");
  EXPECT_DOUBLE_EQ(row.probability, 0.5);
  EXPECT_THROW(net.record(event("3_1", {"0_1"}, 5)), std::invalid_argument);
}

TEST(Network, BatchCountsSumToTotals) {
  TransitionNetwork net("3_1", 30);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const int r = static_cast<int>(rng() % 4);
    net.record(event("3_1", r == 0 ? std::vector<std::string>{} : std::vector<std::string>{r == 1 ? "0_1" : "3_1"}, i));
  }
  const auto [num, den] = net.batches("0_1");
  double sn = 0, sd = 0;
  for (double v : num) sn += v;
  for (double v : den) sd += v;
  EXPECT_EQ(sn, static_cast<double>(net.counts().at("0_1")));
  EXPECT_EQ(sd, static_cast<double>(net.identified()));
}

TEST(Network, ReplayedLogRebuildsIdentically) {
  std::vector<ReconnectionEvent> events;
  for (int i = 0; i < 200; ++i) events.push_back(event("8_20", {i % 50 == 0 ? "8_20*" : "8_20"}, i));
  std::stringstream log;
  write_event_log_header(log);
  for (const auto& e : events) write_event(log, e);
  const auto replay = read_event_log(log);
  const auto a = networks_from_events(events);
  const auto b = networks_from_events(replay);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].to_json().dump(), b[0].to_json().dump());
  std::stringstream ca, cb;
  a[0].write_csv(ca);
  b[0].write_csv(cb);
  EXPECT_EQ(ca.str(), cb.str());
}

TEST(Network, EmptyNetworkExportsHeaderOnly) {
  TransitionNetwork net("6_1");
  std::stringstream csv;
  net.write_csv(csv);
  EXPECT_EQ(csv.str(), "knot,probability,number_observed,ci_low,ci_high,total_events\n");
}

}  // namespace
}  // namespace knotband
