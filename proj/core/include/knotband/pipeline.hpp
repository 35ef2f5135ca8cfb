#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "knotband/knot_table.hpp"
#include "knotband/lattice.hpp"
#include "knotband/reconnection.hpp"

namespace knotband {

struct RecombineOptions {
  ChainParams chain;
  std::uint64_t events = 1000;
  BandKind mode = BandKind::NonCoherent;
  IdentifyOptions identify;
  /// Identification worker threads; the event order never depends on this.
  int workers = 1;
  /// Events handed to the worker pool at a time.
  std::size_t block = 256;
};

/// Site-selection policy string recorded in every artifact.
std::string site_policy(BandKind mode);

/// Uniform choice among the usable sites of the requested alignment, driven by a per-event
/// generator derived from (rng_seed, step). Returns nullptr when there is no usable site.
const SitePair* choose_site(const std::vector<SitePair>& sites, std::uint64_t rng_seed, std::uint64_t step);

/// Samples conformations of `seed` with the composite chain, performs one reconnection per
/// conformation and identifies the products. `sink` receives events in sample order.
void recombine(const std::string& knot, const LatticePolygon& seed, const KnotTable& table,
               const RecombineOptions& opts, const std::function<void(const ReconnectionEvent&)>& sink);

std::vector<ReconnectionEvent> recombine(const std::string& knot, const LatticePolygon& seed, const KnotTable& table,
                                         const RecombineOptions& opts);

/// Seed conformation of `knot` from a polygon file (first conformation with that name).
LatticePolygon seed_for(const std::string& knot, const std::vector<NamedPolygon>& seeds);

}  // namespace knotband
