#include "knotband/pipeline.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <thread>

namespace knotband {

std::string site_policy(BandKind mode) {
  return std::string("one uniformly random usable ") + (mode == BandKind::NonCoherent ? "parallel" : "antiparallel") +
         " site per sampled conformation";
}

const SitePair* choose_site(const std::vector<SitePair>& sites, std::uint64_t rng_seed, std::uint64_t step) {
  if (sites.empty()) return nullptr;
  std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                    static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32), 0x5173u};
  Rng rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  return &sites[pick(rng)];
}

namespace {

struct Pending {
  ReconnectionEvent event;
  std::vector<LatticePolygon> products;
};

void identify_products(Pending& p, const KnotTable& table, const IdentifyOptions& opts) {
  if (p.products.empty()) return;
  IdentificationResult r =
      p.products.size() == 1 ? identify(p.products.front(), table, opts) : identify_link(p.products, table, opts);
  p.event.product_knots = {r.name};
}

}  // namespace

void recombine(const std::string& knot, const LatticePolygon& seed, const KnotTable& table,
               const RecombineOptions& opts, const std::function<void(const ReconnectionEvent&)>& sink) {
  opts.chain.validate(seed.length());
  CompositeChain cmc(seed, opts.chain);
  const Alignment wanted = opts.mode == BandKind::NonCoherent ? Alignment::Parallel : Alignment::Antiparallel;
  const int workers = std::max(1, opts.workers);
  std::vector<Pending> block;
  block.reserve(opts.block);
  auto flush = [&]() {
    if (workers == 1) {
      for (auto& p : block) identify_products(p, table, opts.identify);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
          for (std::size_t i = static_cast<std::size_t>(w); i < block.size(); i += static_cast<std::size_t>(workers)) {
            identify_products(block[i], table, opts.identify);
          }
        });
      }
      for (auto& t : pool) t.join();
    }
    for (const auto& p : block) sink(p.event);
    block.clear();
  };
  for (std::uint64_t step = 0; step < opts.events; ++step) {
    const LatticePolygon conf = cmc.next();
    Pending p;
    p.event.substrate_knot = knot;
    p.event.substrate_length = conf.length();
    p.event.alignment = wanted;
    p.event.chain_id = 0;
    p.event.step = step;
    const auto sites = find_sites(conf, wanted);
    if (const SitePair* s = choose_site(sites, opts.chain.rng_seed, step)) {
      ReconnectionOutcome out = reconnect(conf, *s);
      for (const auto& q : out.products) p.event.product_lengths.push_back(q.length());
      p.products = std::move(out.products);
    } else {
      p.event.has_site = false;
    }
    block.push_back(std::move(p));
    if (block.size() >= opts.block) flush();
  }
  flush();
}

std::vector<ReconnectionEvent> recombine(const std::string& knot, const LatticePolygon& seed, const KnotTable& table,
                                         const RecombineOptions& opts) {
  std::vector<ReconnectionEvent> out;
  recombine(knot, seed, table, opts, [&](const ReconnectionEvent& e) { out.push_back(e); });
  return out;
}

LatticePolygon seed_for(const std::string& knot, const std::vector<NamedPolygon>& seeds) {
  for (const auto& s : seeds) {
    if (s.knot == knot) return s.polygon;
  }
  throw std::invalid_argument("no seed conformation for " + knot);
}

}  // namespace knotband
