#include "knotband/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace knotband {
namespace {

double t_quantile(double confidence, std::size_t batches) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  boost::math::students_t dist(static_cast<double>(batches - 1));
  return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

Estimate batch_mean_ci(const std::vector<double>& values, double confidence) {
  const std::size_t b = values.size();
  if (b < 2) throw TooFewBatches("batch means need at least two batches, got " + std::to_string(b));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(b);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(b - 1);
  return {mean, t_quantile(confidence, b) * std::sqrt(var / static_cast<double>(b))};
}

Estimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den, double confidence) {
  const std::size_t b = num.size();
  if (den.size() != b) throw std::invalid_argument("numerator and denominator batch counts differ");
  if (b < 2) throw TooFewBatches("ratio estimation needs at least two batches, got " + std::to_string(b));
  double sn = 0.0;
  double sd = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    sn += num[i];
    sd += den[i];
  }
  if (sd == 0.0) throw ZeroDenominator("denominator batches sum to zero");
  const double r = sn / sd;
  double ss = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    const double z = num[i] - r * den[i];
    ss += z * z;
  }
  const double mean_den = sd / static_cast<double>(b);
  const double se = std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b)) / mean_den;
  return {r, t_quantile(confidence, b) * se};
}

std::string format_per_1e5(std::uint64_t count, std::uint64_t total) {
  if (count == 0) return "0";
  if (total == 0) throw ZeroDenominator("total is zero");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(count) / static_cast<double>(total) * 1e5);
  return buf;
}

std::optional<std::string> product_label(const ReconnectionEvent& e) {
  if (e.product_knots.empty()) return std::nullopt;
  std::string out;
  for (std::size_t i = 0; i < e.product_knots.size(); ++i) out += (i ? ";" : "") + e.product_knots[i];
  return out;
}

bool is_unidentified(const std::string& label) {
  return label.find("Unknown") != std::string::npos || label.find('|') != std::string::npos;
}

// Network -------------------------------------------------------------------------------------

TransitionNetwork::TransitionNetwork(std::string substrate, int n_batches)
    : substrate_(std::move(substrate)), n_batches_(n_batches) {
  if (n_batches < 2) throw TooFewBatches("a network needs at least two batches");
}

int TransitionNetwork::label_id(const std::string& label) {
  auto it = label_index_.find(label);
  if (it != label_index_.end()) return it->second;
  const int id = static_cast<int>(labels_.size());
  labels_.push_back(label);
  label_index_.emplace(label, id);
  return id;
}

void TransitionNetwork::record(const ReconnectionEvent& e) {
  if (e.substrate_knot != substrate_) {
    throw std::invalid_argument("event for " + e.substrate_knot + " recorded in the network of " + substrate_);
  }
  const auto label = product_label(e);
  if (!label) {
    outcomes_.push_back(kNoSite);
    return;
  }
  ++usable_;
  if (is_unidentified(*label)) {
    ++unknown_;
    outcomes_.push_back(kUnknown);
    return;
  }
  outcomes_.push_back(label_id(*label));
}

std::map<std::string, std::uint64_t> TransitionNetwork::counts() const {
  std::map<std::string, std::uint64_t> out;
  for (int o : outcomes_) {
    if (o >= 0) ++out[labels_[static_cast<std::size_t>(o)]];
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> TransitionNetwork::batches(const std::string& label) const {
  const auto it = label_index_.find(label);
  const int id = it == label_index_.end() ? -100 : it->second;
  std::vector<double> num(static_cast<std::size_t>(n_batches_), 0.0);
  std::vector<double> den(static_cast<std::size_t>(n_batches_), 0.0);
  const std::size_t n = outcomes_.size();
  const auto nb = static_cast<std::size_t>(n_batches_);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i * nb / n;
    const int o = outcomes_[i];
    if (o >= 0) den[b] += 1.0;
    if (o == id) num[b] += 1.0;
  }
  return {num, den};
}

NetworkRow TransitionNetwork::row(const std::string& label, double confidence) const {
  NetworkRow r;
  r.knot = label;
  const auto c = counts();
  const auto it = c.find(label);
  r.observed = it == c.end() ? 0 : it->second;
  r.total = identified();
  r.probability = r.total ? static_cast<double>(r.observed) / static_cast<double>(r.total) : 0.0;
  const auto [num, den] = batches(label);
  int nonempty = 0;
  for (double d : den) nonempty += d > 0;
  if (nonempty >= 2) r.ci = ratio_estimate(num, den, confidence);
  return r;
}

std::vector<NetworkRow> TransitionNetwork::rows(double confidence) const {
  std::vector<NetworkRow> out;
  for (const auto& [label, count] : counts()) out.push_back(row(label, confidence));
  return out;
}

void write_network_csv_header(std::ostream& out) {
  out << "knot,probability,number_observed,ci_low,ci_high,total_events\n";
}

void TransitionNetwork::write_csv(std::ostream& out, double confidence) const {
  write_network_csv_header(out);
  for (const auto& r : rows(confidence)) {
    out << (r.knot.find(',') == std::string::npos ? r.knot : "\"" + r.knot + "\"") << ','
        << format_double(r.probability) << ',' << r.observed << ','
        << (r.ci ? format_double(r.ci->low()) : "") << ',' << (r.ci ? format_double(r.ci->high()) : "") << ','
        << r.total << '\n';
  }
}

nlohmann::ordered_json TransitionNetwork::to_json(double confidence) const {
  nlohmann::ordered_json j;
  j["substrate"] = substrate_;
  j["attempted_events"] = attempted();
  j["usable_site_events"] = usable();
  j["unknown_products"] = unknown();
  j["total_events"] = identified();
  j["batches"] = n_batches_;
  j["confidence"] = confidence;
  nlohmann::ordered_json products = nlohmann::ordered_json::array();
  for (const auto& r : rows(confidence)) {
    nlohmann::ordered_json p = {{"knot", r.knot},
                                {"probability", r.probability},
                                {"number_observed", r.observed},
                                {"per_1e5", format_per_1e5(r.observed, r.total)}};
    if (r.ci) {
      p["ci_low"] = r.ci->low();
      p["ci_high"] = r.ci->high();
    } else {
      p["ci_low"] = nullptr;
      p["ci_high"] = nullptr;
    }
    p["batch_counts"] = batches(r.knot).first;
    products.push_back(p);
  }
  j["products"] = products;
  j["metadata"] = metadata_;
  return j;
}

std::vector<TransitionNetwork> networks_from_events(const std::vector<ReconnectionEvent>& events, int n_batches) {
  std::vector<TransitionNetwork> out;
  std::map<std::string, std::size_t> index;
  for (const auto& e : events) {
    auto it = index.find(e.substrate_knot);
    if (it == index.end()) {
      it = index.emplace(e.substrate_knot, out.size()).first;
      out.emplace_back(e.substrate_knot, n_batches);
    }
    out[it->second].record(e);
  }
  return out;
}

NetworkRow chirally_cosmetic_row(const TransitionNetwork& net, const std::string& mirror, double confidence) {
  NetworkRow r = net.row(mirror, confidence);
  r.knot = net.substrate();
  return r;
}

}  // namespace knotband
