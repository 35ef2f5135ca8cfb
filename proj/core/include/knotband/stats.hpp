#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "knotband/reconnection.hpp"

namespace knotband {

class TooFewBatches : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroDenominator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Estimate {
  double estimate = 0.0;
  double half_width = 0.0;
  double low() const { return estimate - half_width; }
  double high() const { return estimate + half_width; }
};

/// Mean of per-batch values with a Student-t interval on B - 1 degrees of freedom.
Estimate batch_mean_ci(const std::vector<double>& batch_values, double confidence = 0.95);

/// Ratio of batch sums sum(num) / sum(den) with a delta-method (batch residual) interval.
Estimate ratio_estimate(const std::vector<double>& numerator, const std::vector<double>& denominator,
                        double confidence = 0.95);

/// Table-1 style rendering of count / total in units of 1e-5 with three decimals ("0" for zero).
std::string format_per_1e5(std::uint64_t count, std::uint64_t total);

/// Product label of an event: joined product names, or nullopt when the event had no usable site.
std::optional<std::string> product_label(const ReconnectionEvent& e);
/// Labels that are excluded from the probability denominator (Unknown and ambiguous names).
bool is_unidentified(const std::string& label);

struct NetworkRow {
  std::string knot;
  std::uint64_t observed = 0;
  std::uint64_t total = 0;
  double probability = 0.0;
  std::optional<Estimate> ci;  // absent when fewer than two batches hold identified events
};

/// Transition counts out of one substrate, with the event order kept for batch means.
class TransitionNetwork {
 public:
  explicit TransitionNetwork(std::string substrate, int n_batches = 30);

  /// Events for another substrate throw std::invalid_argument.
  void record(const ReconnectionEvent& e);

  const std::string& substrate() const { return substrate_; }
  int n_batches() const { return n_batches_; }
  std::uint64_t attempted() const { return outcomes_.size(); }
  std::uint64_t usable() const { return usable_; }
  std::uint64_t unknown() const { return unknown_; }
  /// Usable events with an identified product: the probability denominator.
  std::uint64_t identified() const { return usable_ - unknown_; }
  std::map<std::string, std::uint64_t> counts() const;

  /// Per-batch (count of `label`, identified events) over n_batches contiguous event blocks.
  std::pair<std::vector<double>, std::vector<double>> batches(const std::string& label) const;
  NetworkRow row(const std::string& label, double confidence = 0.95) const;
  /// One row per identified product, sorted by name.
  std::vector<NetworkRow> rows(double confidence = 0.95) const;

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  void write_csv(std::ostream& out, double confidence = 0.95) const;
  nlohmann::ordered_json to_json(double confidence = 0.95) const;

 private:
  static constexpr int kNoSite = -1;
  static constexpr int kUnknown = -2;
  int label_id(const std::string& label);

  std::string substrate_;
  int n_batches_ = 30;
  std::vector<std::string> labels_;
  std::map<std::string, int> label_index_;
  std::vector<int> outcomes_;  // per attempted event: label id, kNoSite or kUnknown
  std::uint64_t usable_ = 0;
  std::uint64_t unknown_ = 0;
  std::map<std::string, std::string> metadata_;
};

/// Builds one network per substrate, in order of first appearance.
std::vector<TransitionNetwork> networks_from_events(const std::vector<ReconnectionEvent>& events,
                                                    int n_batches = 30);

void write_network_csv_header(std::ostream& out);

/// Chirally cosmetic summary: one row per substrate K with the K -> K* transition.
NetworkRow chirally_cosmetic_row(const TransitionNetwork& net, const std::string& mirror, double confidence = 0.95);

}  // namespace knotband
