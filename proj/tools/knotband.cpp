// knotband: command-line driver for sampling, recombination, transition networks,
// identification and band-surgery obstructions.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "knotband/knot_table.hpp"
#include "knotband/lattice.hpp"
#include "knotband/obstructions.hpp"
#include "knotband/pipeline.hpp"
#include "knotband/reconnection.hpp"
#include "knotband/stats.hpp"

#ifndef KNOTBAND_DEFAULT_DATA_DIR
#define KNOTBAND_DEFAULT_DATA_DIR "data"
#endif

namespace {

using knotband::BandKind;
using json = nlohmann::ordered_json;

/// Error with a machine-readable kind, reported as JSON on stderr.
struct CliError : std::runtime_error {
  CliError(std::string k, const std::string& what) : std::runtime_error(what), kind(std::move(k)) {}
  std::string kind;
};

int report_error(const std::string& kind, const std::string& message, int code) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  std::cerr << j.dump() << "\n";
  return code;
}

/// Expands a flat key=value config file into `--key=value` tokens, skipping keys that are
/// also given on the command line (the command line wins).
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;
  std::ifstream in(config_path);
  if (!in) throw CliError("ConfigUnreadable", "cannot open config file " + config_path);
  auto given = [&](const std::string& key) {
    for (const auto& a : rest) {
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    }
    return false;
  };
  const auto items = CLI::ConfigINI().from_config(in);
  // The subcommand name stays first so that the injected options bind to it.
  std::size_t insert_at = rest.empty() ? 0 : 1;
  for (const auto& item : items) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == "default")) {
      throw CliError("ConfigInvalid", "config files are flat key=value; sections are not supported");
    }
    if (item.name == "++" || item.name == "--" || given(item.name)) continue;
    std::string value;
    for (std::size_t k = 0; k < item.inputs.size(); ++k) value += (k ? "," : "") + item.inputs[k];
    if (value.empty()) continue;  // an empty value keeps the default
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(insert_at++), "--" + item.name + "=" + value);
  }
  return rest;
}

/// Resolved options of a subcommand as flat key=value lines (the embedded run config). Output
/// paths are left out: they do not influence the payload.
std::vector<std::string> config_lines(const CLI::App& sub) {
  static const char* const kOutputKeys[] = {"out=", "csv=", "json=", "cosmetic-csv="};
  std::vector<std::string> lines;
  std::istringstream in(sub.config_to_str(true, false));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    bool output = false;
    for (const char* k : kOutputKeys) output = output || line.rfind(k, 0) == 0;
    if (!output) lines.push_back(line);
  }
  return lines;
}

json config_json(const std::vector<std::string>& lines) {
  json j = json::object();
  for (const auto& l : lines) {
    const auto eq = l.find('=');
    if (eq == std::string::npos) continue;
    std::string v = l.substr(eq + 1);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    j[l.substr(0, eq)] = v;
  }
  return j;
}

/// Writes to `path`, or stdout when the path is "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw CliError("OutputUnwritable", "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

BandKind parse_mode(const std::string& m) {
  if (m == "noncoherent" || m == "non-coherent") return BandKind::NonCoherent;
  if (m == "coherent") return BandKind::Coherent;
  throw CliError("ConfigInvalid", "mode must be noncoherent or coherent, got " + m);
}

struct ChainFlags {
  knotband::ChainParams params;
  void add(CLI::App* sub) {
    sub->add_option("--fugacities", params.fugacities, "CMC fugacities, ascending")->delimiter(',');
    sub->add_option("--swap-interval", params.swap_interval, "moves between replica swap attempts")
        ->check(CLI::PositiveNumber);
    sub->add_option("--sample-interval", params.sample_interval, "moves between samples")->check(CLI::PositiveNumber);
    sub->add_option("--burn-in", params.burn_in, "moves before the first sample");
    sub->add_option("--max-length", params.max_length, "polygon length cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", params.rng_seed, "RNG seed");
  }
};

std::vector<knotband::NamedPolygon> load_seeds(const std::string& path) {
  return knotband::read_polygon_file(path);
}

// ---------------------------------------------------------------------------------------------

int cmd_sample(const CLI::App& sub, const std::string& data, const std::string& seeds_path, const std::string& knot,
               const knotband::ChainParams& params, std::size_t samples, const std::string& out) {
  const auto seed = knotband::seed_for(knot, load_seeds(seeds_path));
  params.validate(seed.length());
  (void)data;
  knotband::CompositeChain chain(seed, params);
  std::vector<knotband::NamedPolygon> polys;
  for (std::size_t i = 0; i < samples; ++i) polys.push_back({knot, chain.next()});
  Output o(out);
  std::vector<std::string> meta;
  for (const auto& l : config_lines(sub)) meta.push_back("config." + l);
  knotband::write_polygons(o.stream(), polys, meta);
  return 0;
}

int cmd_recombine(const CLI::App& sub, const std::string& data, const std::string& seeds_path,
                  const std::string& knot, const knotband::RecombineOptions& opts, const std::string& out) {
  const auto table = knotband::KnotTable::load(data);
  if (table.find(knot) == nullptr) throw CliError("UnknownKnot", "knot " + knot + " is not in the table");
  const auto seed = knotband::seed_for(knot, load_seeds(seeds_path));
  Output o(out);
  auto& s = o.stream();
  for (const auto& l : config_lines(sub)) s << "# config." << l << "\n";
  s << "# config.site_policy=" << knotband::site_policy(opts.mode) << "\n";
  knotband::write_event_log_header(s);
  knotband::recombine(knot, seed, table, opts, [&](const knotband::ReconnectionEvent& e) {
    knotband::write_event(s, e);
  });
  s.flush();
  return 0;
}

int cmd_network(const CLI::App& sub, const std::string& data, const std::vector<std::string>& logs, int batches,
                double confidence, const std::string& csv_path, const std::string& json_path,
                const std::string& cosmetic_path) {
  const auto table = knotband::KnotTable::load(data);
  std::vector<knotband::ReconnectionEvent> events;
  std::vector<std::string> provenance;
  for (const auto& path : logs) {
    std::ifstream in(path);
    if (!in) throw CliError("InputUnreadable", "cannot open event log " + path);
    std::string line;
    while (std::getline(in, line) && !line.empty() && line[0] == '#') provenance.push_back(line.substr(2));
    in.clear();
    in.seekg(0);
    const auto part = knotband::read_event_log(in);
    events.insert(events.end(), part.begin(), part.end());
  }
  auto nets = knotband::networks_from_events(events, batches);
  const auto cfg = config_lines(sub);
  for (auto& n : nets) {
    for (const auto& l : provenance) {
      const auto eq = l.find('=');
      if (eq != std::string::npos && l.rfind("config.", 0) == 0) {
        n.metadata()["source." + l.substr(7, eq - 7)] = l.substr(eq + 1);
      }
    }
  }
  if (!csv_path.empty()) {
    const auto slot = csv_path.find("{substrate}");
    if (nets.size() > 1 && slot == std::string::npos) {
      throw CliError("ConfigInvalid", "logs hold several substrates; put {substrate} in the --csv path");
    }
    for (const auto& n : nets) {
      std::string path = csv_path;
      if (slot != std::string::npos) path.replace(slot, 11, n.substrate());
      Output o(path);
      auto& s = o.stream();
      for (const auto& l : cfg) s << "# config." << l << "\n";
      s << "# substrate=" << n.substrate() << "\n";
      n.write_csv(s, confidence);
    }
  }
  json cosmetic = json::array();
  std::ostringstream cosmetic_csv;
  cosmetic_csv << "substrate,knot,probability,number_observed,ci_low,ci_high,total_events,per_1e5\n";
  for (const auto& n : nets) {
    const auto* rec = table.find(n.substrate());
    const std::string mirror = knotband::mirror_name(n.substrate(), rec == nullptr || rec->chiral);
    const auto row = knotband::chirally_cosmetic_row(n, mirror, confidence);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%.10g,%llu,", n.substrate().c_str(), mirror.c_str(), row.probability,
                  static_cast<unsigned long long>(row.observed));
    cosmetic_csv << buf;
    if (row.ci) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g", row.ci->low(), row.ci->high());
      cosmetic_csv << buf;
    } else {
      cosmetic_csv << ",";
    }
    cosmetic_csv << "," << row.total << "," << knotband::format_per_1e5(row.observed, row.total) << "\n";
    json c;
    c["substrate"] = n.substrate();
    c["knot"] = mirror;
    c["probability"] = row.probability;
    c["number_observed"] = row.observed;
    c["total_events"] = row.total;
    if (row.ci) {
      c["ci_low"] = row.ci->low();
      c["ci_high"] = row.ci->high();
    } else {
      c["ci_low"] = nullptr;
      c["ci_high"] = nullptr;
    }
    c["per_1e5"] = knotband::format_per_1e5(row.observed, row.total);
    cosmetic.push_back(c);
  }
  if (!cosmetic_path.empty()) {
    Output o(cosmetic_path);
    for (const auto& l : cfg) o.stream() << "# config." << l << "\n";
    o.stream() << cosmetic_csv.str();
  }
  if (!json_path.empty()) {
    json j;
    j["config"] = config_json(cfg);
    j["networks"] = json::array();
    for (const auto& n : nets) j["networks"].push_back(n.to_json(confidence));
    j["chirally_cosmetic"] = cosmetic;
    Output o(json_path);
    o.stream() << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_identify(const CLI::App& sub, const std::string& data, const std::string& input,
                 const knotband::IdentifyOptions& opts, const std::string& out) {
  const auto table = knotband::KnotTable::load(data);
  const auto polys = knotband::read_polygon_file(input);
  json j;
  j["config"] = config_json(config_lines(sub));
  j["results"] = json::array();
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const auto r = knotband::identify(polys[i].polygon, table, opts);
    json e;
    e["index"] = i;
    e["label"] = polys[i].knot;
    e["length"] = polys[i].polygon.length();
    e["name"] = r.name;
    e["confidence"] = knotband::to_string(r.confidence);
    e["crossings"] = r.crossings;
    e["retries"] = r.retries;
    e["diagnostic"] = r.diagnostic;
    j["results"].push_back(e);
  }
  Output o(out);
  o.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_obstruct(const CLI::App& sub, const std::string& data, const std::string& k, const std::string& kp,
                 BandKind mode, const std::string& out) {
  const auto table = knotband::KnotTable::load(data);
  const auto v = knotband::run_all(k, kp, table, mode);
  json j = v.to_json();
  j["config"] = config_json(config_lines(sub));
  Output o(out);
  o.stream() << j.dump(2) << "\n";
  return 0;
}

int cmd_validate_table(const CLI::App& sub, const std::string& data, const std::string& out) {
  const auto table = knotband::KnotTable::load_unchecked(data);
  const auto v = table.validate();
  json j;
  j["config"] = config_json(config_lines(sub));
  j["records_checked"] = v.records_checked;
  j["mismatches"] = v.mismatches;
  j["ok"] = v.ok();
  Output o(out);
  o.stream() << j.dump(2) << "\n";
  return v.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> raw(argv + 1, argv + argc);
  CLI::App app{"Lattice band-surgery pipeline: sampling, recombination, identification and obstructions."};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_help_all_flag("--help-all");
  app.footer("--config FILE: flat key=value file of subcommand options; command-line flags override it.");

  std::string data = KNOTBAND_DEFAULT_DATA_DIR;
  std::string seeds_path;
  std::string knot;
  std::string out = "-";

  auto add_common = [&](CLI::App* sub, bool with_out = true) {
    sub->option_defaults()->always_capture_default();
    sub->add_option("--data", data, "directory holding knot_table.tsv and knot_pd.tsv");
    if (with_out) sub->add_option("--out", out, "output path ('-' for stdout)");
  };

  // sample
  auto* sample = app.add_subcommand("sample", "emit CMC conformations of a knot type");
  ChainFlags sample_chain;
  std::size_t n_samples = 10;
  add_common(sample);
  sample->add_option("--knot", knot, "knot type of the seed conformation")->required();
  sample->add_option("--seeds", seeds_path, "seed polygon file (default <data>/seeds/seeds.txt)");
  sample->add_option("--samples", n_samples, "number of conformations")->check(CLI::PositiveNumber);
  sample_chain.add(sample);

  // recombine
  auto* rec = app.add_subcommand("recombine", "sample, pick sites, reconnect, identify and log events");
  knotband::RecombineOptions ropts;
  std::string mode_name = "noncoherent";
  add_common(rec);
  rec->add_option("--knot", knot, "substrate knot type")->required();
  rec->add_option("--seeds", seeds_path, "seed polygon file (default <data>/seeds/seeds.txt)");
  rec->add_option("--events", ropts.events, "reconnection events")->check(CLI::PositiveNumber);
  rec->add_option("--mode", mode_name, "noncoherent (parallel sites) or coherent (antiparallel sites)");
  rec->add_option("--workers", ropts.workers, "identification worker threads")->check(CLI::PositiveNumber);
  rec->add_option("--max-retries", ropts.identify.max_retries, "identification retries");
  ChainFlags rec_chain;
  rec_chain.add(rec);

  // network
  auto* net = app.add_subcommand("network", "aggregate event logs into transition networks");
  std::vector<std::string> logs;
  int batches = 30;
  double confidence = 0.95;
  std::string csv_path = "-", json_path, cosmetic_path;
  add_common(net, false);
  net->add_option("--log", logs, "event log CSV (repeatable)")->required();
  net->add_option("--batches", batches, "batch count for batch means")->check(CLI::Range(2, 1000000));
  net->add_option("--confidence", confidence, "confidence level")->check(CLI::Range(0.5, 0.9999));
  net->add_option("--csv", csv_path, "network CSV path ('-' for stdout; {substrate} expands per substrate)");
  net->add_option("--json", json_path, "network JSON path");
  net->add_option("--cosmetic-csv", cosmetic_path, "chirally cosmetic summary CSV path");

  // identify
  auto* ident = app.add_subcommand("identify", "identify the knot type of each conformation in a polygon file");
  std::string input;
  knotband::IdentifyOptions iopts;
  add_common(ident);
  ident->add_option("input", input, "polygon file")->required();
  ident->add_option("--max-retries", iopts.max_retries, "projection retries");
  ident->add_flag("--shrink-first", iopts.shrink_first, "shrink before the first projection");

  // obstruct
  auto* obs = app.add_subcommand("obstruct", "run every band-surgery obstruction on a pair of knots");
  std::string k1, k2, obs_mode = "noncoherent";
  add_common(obs);
  obs->add_option("K", k1, "first knot or link (table name, unknot, unlink or T(2,n))")->required();
  obs->add_option("Kprime", k2, "second knot or link")->required();
  obs->add_option("--mode", obs_mode, "noncoherent or coherent");

  // validate-table
  auto* val = app.add_subcommand("validate-table", "recompute and cross-check every table record");
  add_common(val);

  try {
    auto args = expand_config(raw);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what(), 2);
  } catch (const CliError& e) {
    return report_error(e.kind, e.what(), 2);
  }
  if (seeds_path.empty()) seeds_path = data + "/seeds/seeds.txt";

  try {
    if (*sample) return cmd_sample(*sample, data, seeds_path, knot, sample_chain.params, n_samples, out);
    if (*rec) {
      ropts.chain = rec_chain.params;
      ropts.mode = parse_mode(mode_name);
      return cmd_recombine(*rec, data, seeds_path, knot, ropts, out);
    }
    if (*net) return cmd_network(*net, data, logs, batches, confidence, csv_path, json_path, cosmetic_path);
    if (*ident) return cmd_identify(*ident, data, input, iopts, out);
    if (*obs) return cmd_obstruct(*obs, data, k1, k2, parse_mode(obs_mode), out);
    if (*val) return cmd_validate_table(*val, data, out);
  } catch (const CliError& e) {
    return report_error(e.kind, e.what(), 1);
  } catch (const knotband::PolygonException& e) {
    return report_error("PolygonException", e.what(), 1);
  } catch (const std::invalid_argument& e) {
    return report_error("InvalidArgument", e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("RuntimeError", e.what(), 1);
  }
  return 0;
}
