#include "knotband/knot_table.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace knotband {
namespace {

std::vector<std::vector<std::string>> read_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableInconsistent("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (!header_seen && !fields.empty() && fields[0] == "name") {
      header_seen = true;
      continue;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::optional<int> opt_int(const std::string& s) {
  if (s.empty() || s == "-") return std::nullopt;
  return std::stoi(s);
}

bool is_mirror_name(const std::string& name) { return !name.empty() && name.back() == '*'; }

std::string base_name(const std::string& name) {
  return is_mirror_name(name) ? name.substr(0, name.size() - 1) : name;
}

// Builds a PD from per-component visit lists (crossing index, over?) and crossing signs.
PDCode pd_from_visits(const std::vector<std::vector<std::pair<int, bool>>>& comps, const std::vector<int>& signs,
                      int loops) {
  PDCode pd;
  pd.crossings.assign(signs.size(), {0, 0, 0, 0});
  pd.signs = signs;
  pd.loops = loops;
  int next = 1;
  for (const auto& visits : comps) {
    const int m = static_cast<int>(visits.size());
    const int base = next;
    next += m;
    for (int v = 0; v < m; ++v) {
      const int in = base + (v + m - 1) % m;
      const int out = base + v;
      const auto [k, over] = visits[static_cast<std::size_t>(v)];
      auto& x = pd.crossings[static_cast<std::size_t>(k)];
      if (!over) {
        x[0] = in;
        x[2] = out;
      } else if (signs[static_cast<std::size_t>(k)] > 0) {
        x[3] = in;
        x[1] = out;
      } else {
        x[1] = in;
        x[3] = out;
      }
    }
  }
  return pd;
}

}  // namespace

std::string mirror_name(const std::string& name, bool chiral) {
  if (!chiral) return name;
  return is_mirror_name(name) ? base_name(name) : name + "*";
}

std::string to_string(Confidence c) {
  switch (c) {
    case Confidence::Exact: return "exact";
    case Confidence::TieBroken: return "tie_broken";
    case Confidence::Ambiguous: return "ambiguous";
    case Confidence::Unknown: return "unknown";
  }
  return "unknown";
}

// Table ---------------------------------------------------------------------------------------

KnotTable KnotTable::load_unchecked(const std::string& data_dir) {
  std::map<std::string, PDCode> pds;
  for (auto& row : read_tsv(data_dir + "/knot_pd.tsv")) {
    if (row.size() < 2) throw TableInconsistent("malformed PD row");
    pds[row[0]] = PDCode::parse(row[1]);
  }
  KnotTable t;
  for (auto& row : read_tsv(data_dir + "/knot_table.tsv")) {
    if (row.size() < 12) throw TableInconsistent("malformed table row for " + (row.empty() ? "?" : row[0]));
    KnotRecord r;
    r.name = row[0];
    r.crossing_number = std::stoi(row[1]);
    r.chiral = row[2] == "1";
    r.homfly = LaurentPoly2::parse(row[3]);
    r.det = std::stoll(row[4]);
    r.sigma = std::stoi(row[5]);
    r.arf = std::stoi(row[6]);
    if (auto qa = opt_int(row[7])) r.qa = *qa != 0;
    r.u = opt_int(row[8]);
    r.u2 = opt_int(row[9]);
    r.u2_max = opt_int(row[10]);
    r.torus_param = opt_int(row[11]);
    auto it = pds.find(base_name(r.name));
    if (it == pds.end()) throw TableInconsistent("no reference PD for " + r.name);
    if (is_mirror_name(r.name)) {
      Diagram d = Diagram::from_pd(it->second);
      d.mirror();
      r.pd = d.to_pd();
    } else {
      r.pd = it->second;
    }
    if (t.by_name_.count(r.name)) throw TableInconsistent("duplicate record " + r.name);
    t.by_name_[r.name] = t.records_.size();
    t.by_homfly_.emplace(r.homfly, t.records_.size());
    t.records_.push_back(std::move(r));
  }
  return t;
}

KnotTable KnotTable::load(const std::string& data_dir) {
  KnotTable t = load_unchecked(data_dir);
  const TableValidation v = t.validate();
  if (!v.ok()) {
    std::string msg = "TableInconsistent: " + std::to_string(v.mismatches.size()) + " mismatches; first: " +
                      v.mismatches.front();
    throw TableInconsistent(msg);
  }
  return t;
}

TableValidation KnotTable::validate() const {
  TableValidation v;
  auto fail = [&](const KnotRecord& r, const std::string& what) { v.mismatches.push_back(r.name + ": " + what); };
  for (const auto& r : records_) {
    ++v.records_checked;
    const Diagram d = Diagram::from_pd(r.pd);
    if (d.component_count() != 1) fail(r, "reference PD is not a knot");
    if (homfly(d, 32) != r.homfly) fail(r, "HOMFLY differs from reference PD");
    const InvariantSet s = invariant_set(d);
    if (s.det != r.det) fail(r, "det " + std::to_string(r.det) + " != computed " + std::to_string(s.det));
    if (s.sigma != r.sigma) fail(r, "sigma " + std::to_string(r.sigma) + " != computed " + std::to_string(s.sigma));
    if (arf_from_det(s.det) != r.arf) fail(r, "arf differs from det mod 8");
    if (r.det % 2 == 0) fail(r, "even determinant");
    if (r.sigma % 2 != 0) fail(r, "odd signature");
    if (r.u && r.u2 && *r.u2 > *r.u + 1) fail(r, "u2 > u + 1");
    if (r.torus_param) {
      const int n = *r.torus_param;
      const int expect = n > 0 ? 1 - n : -(1 + n);
      if (r.sigma != expect) fail(r, "torus signature convention");
      if (r.det != std::abs(n)) fail(r, "torus determinant");
    }
    if (r.crossing_number <= 8 && r.crossing_number > 0) {
      const bool expect_qa = base_name(r.name) != "8_19";
      if (!r.qa || *r.qa != expect_qa) fail(r, "quasi-alternating flag");
    }
    const std::string m = mirror_name(r.name, r.chiral);
    const KnotRecord* mr = find(m);
    if (!mr) {
      fail(r, "missing mirror record " + m);
    } else {
      if (mr->homfly != r.homfly.l_inverted()) fail(r, "mirror HOMFLY is not l-inverted");
      if (mr->sigma != -r.sigma) fail(r, "mirror signature is not negated");
      if (mr->det != r.det || mr->arf != r.arf) fail(r, "mirror det/arf differ");
    }
  }
  return v;
}

const KnotRecord* KnotTable::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &records_[it->second];
}

const KnotRecord& KnotTable::at(const std::string& name) const {
  const KnotRecord* r = find(name);
  if (!r) throw std::out_of_range("unknown knot " + name);
  return *r;
}

std::vector<const KnotRecord*> KnotTable::by_homfly(const LaurentPoly2& h) const {
  std::vector<const KnotRecord*> out;
  auto [lo, hi] = by_homfly_.equal_range(h);
  for (auto it = lo; it != hi; ++it) out.push_back(&records_[it->second]);
  return out;
}

std::vector<const KnotRecord*> KnotTable::up_to(int crossings) const {
  std::vector<const KnotRecord*> out;
  for (const auto& r : records_) {
    if (r.crossing_number <= crossings) out.push_back(&r);
  }
  return out;
}

// Torus links ---------------------------------------------------------------------------------

Diagram torus_2n_diagram(int n, bool parallel) {
  const int k = std::abs(n);
  if (k == 0) return Diagram::from_pd(PDCode::parse("Loop[] Loop[]"));
  const int sign = n > 0 ? 1 : -1;
  std::vector<std::vector<std::pair<int, bool>>> comps;
  std::vector<int> signs(static_cast<std::size_t>(k), sign);
  if (k % 2 == 1) {
    std::vector<std::pair<int, bool>> visits;
    for (int t = 0; t < 2 * k; ++t) visits.emplace_back(t % k, t % 2 == 1);
    comps.push_back(visits);
  } else {
    std::vector<std::pair<int, bool>> a;
    std::vector<std::pair<int, bool>> b;
    for (int c = 0; c < k; ++c) {
      a.emplace_back(c, c % 2 == 1);
      b.emplace_back(c, c % 2 == 0);
    }
    if (!parallel) {
      std::reverse(b.begin(), b.end());
      for (auto& s : signs) s = -s;
    }
    comps.push_back(a);
    comps.push_back(b);
  }
  return Diagram::from_pd(pd_from_visits(comps, signs, 0));
}

std::vector<TorusLinkRecord> torus_link_records(int max_abs_n) {
  std::vector<TorusLinkRecord> out;
  for (int n = -max_abs_n; n <= max_abs_n; ++n) {
    if (n % 2 != 0) continue;
    TorusLinkRecord r;
    r.n = n;
    r.name = "T(2," + std::to_string(n) + ")";
    const Diagram par = torus_2n_diagram(n, true);
    const Diagram anti = torus_2n_diagram(n, false);
    r.homfly_parallel = homfly(par, 32);
    r.homfly_antiparallel = homfly(anti, 32);
    r.det = std::abs(n);
    // Signature convention: 1 - n with parallel strands, 1 with one strand reversed (n > 0);
    // mirrors negate both, and T(2,0) is the split unlink.
    if (n == 0) {
      r.sigma_parallel = r.sigma_antiparallel = 0;
    } else if (n > 0) {
      r.sigma_parallel = 1 - n;
      r.sigma_antiparallel = 1;
    } else {
      r.sigma_parallel = -(1 + n);
      r.sigma_antiparallel = -1;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Identification ------------------------------------------------------------------------------

namespace {

std::string factor_diagnostic(const LaurentPoly2& h, const KnotTable& table) {
  for (const auto& r : table.records()) {
    if (r.crossing_number < 3) continue;
    LaurentPoly2 q;
    if (!LaurentPoly2::divide(h, r.homfly, q)) continue;
    const auto rest = table.by_homfly(q);
    if (!rest.empty() && rest.front()->crossing_number >= 3) {
      return "composite: HOMFLY factors as " + r.name + " # " + rest.front()->name;
    }
  }
  return "no table match for HOMFLY " + h.serialize();
}

}  // namespace

IdentificationResult identify_diagram(const Diagram& input, const KnotTable& table, const IdentifyOptions& opts) {
  IdentificationResult res;
  const Diagram d = simplify(input);
  res.crossings = d.crossing_count();
  res.n_components = d.component_count();
  if (d.crossing_count() > opts.crossing_cap) {
    res.diagnostic = "crossing cap exceeded (" + std::to_string(d.crossing_count()) + ")";
    return res;
  }
  if (res.n_components != 1) {
    res.diagnostic = "not a knot: " + std::to_string(res.n_components) + " components";
    return res;
  }
  const LaurentPoly2 h = homfly(d, opts.crossing_cap);
  const auto candidates = table.by_homfly(h);
  if (candidates.size() == 1) {
    res.name = candidates.front()->name;
    res.confidence = Confidence::Exact;
    return res;
  }
  if (candidates.empty()) {
    res.diagnostic = factor_diagnostic(h, table);
    return res;
  }
  const InvariantSet s = invariant_set(d);
  std::vector<const KnotRecord*> kept;
  for (const auto* c : candidates) {
    // A diagram never has fewer crossings than the crossing number of its knot.
    if (c->det == s.det && c->sigma == s.sigma && c->crossing_number <= d.crossing_count()) kept.push_back(c);
  }
  if (kept.size() > 1) {
    // HOMFLY-twins such as 8_8/10_129 are separated by the Q polynomial.
    try {
      const LaurentPoly q = q_polynomial(d, opts.crossing_cap);
      std::vector<const KnotRecord*> by_q;
      for (const auto* c : kept) {
        if (q_polynomial(c->pd, opts.crossing_cap) == q) by_q.push_back(c);
      }
      kept = by_q;
    } catch (const InvariantError&) {
      // Too large for Q: fall through to an ambiguous answer.
    }
  }
  if (kept.size() == 1) {
    res.name = kept.front()->name;
    res.confidence = Confidence::TieBroken;
    return res;
  }
  const auto& pool = kept.empty() ? candidates : kept;
  std::string joined;
  for (const auto* c : pool) joined += (joined.empty() ? "" : "|") + c->name;
  res.name = joined;
  res.confidence = Confidence::Ambiguous;
  res.diagnostic = "HOMFLY, det and signature do not separate " + joined;
  return res;
}

IdentificationResult identify(const LatticePolygon& p, const KnotTable& table, const IdentifyOptions& opts) {
  LatticePolygon poly = opts.shrink_first ? shrink(p, 4, opts.shrink) : p;
  IdentificationResult res;
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    const Diagram d = project(poly, opts.direction_seed + static_cast<std::uint64_t>(attempt));
    res = identify_diagram(d, table, opts);
    res.retries = attempt;
    if (res.crossings <= opts.crossing_cap) return res;
    ShrinkOptions so = opts.shrink;
    so.seed += static_cast<std::uint64_t>(attempt) + 1;
    so.max_moves *= static_cast<std::uint64_t>(attempt) + 1;
    poly = shrink(poly, 4, so);
  }
  res.diagnostic = "Unidentified: " + res.diagnostic + " after " + std::to_string(opts.max_retries) + " re-shrinks";
  return res;
}

IdentificationResult identify_link(const std::vector<LatticePolygon>& components, const KnotTable& table,
                                   const IdentifyOptions& opts) {
  if (components.size() == 1) return identify(components.front(), table, opts);
  IdentificationResult res;
  const Diagram d = simplify(project_link(components, opts.direction_seed));
  res.crossings = d.crossing_count();
  res.n_components = d.component_count();
  if (d.crossing_count() > opts.crossing_cap) {
    res.diagnostic = "crossing cap exceeded (" + std::to_string(d.crossing_count()) + ")";
    return res;
  }
  const LaurentPoly2 h = homfly(d, opts.crossing_cap);
  if (components.size() == 2) {
    // Parallel matches win: the Hopf links T(2,2) parallel and T(2,-2) antiparallel are the
    // same oriented link, and the braid-closure orientation is the standard name.
    const auto records = torus_link_records(10);
    for (const bool parallel : {true, false}) {
      for (const auto& t : records) {
        if ((parallel ? t.homfly_parallel : t.homfly_antiparallel) == h) {
          res.name = t.name;
          res.confidence = Confidence::Exact;
          res.diagnostic = parallel ? "parallel orientation" : "antiparallel orientation";
          return res;
        }
      }
    }
  }
  res.diagnostic = "link not in the T(2,n) family; HOMFLY " + h.serialize();
  return res;
}

}  // namespace knotband
