// Builds the shipped seed conformations: grid diagram -> lattice polygon -> chirality fix ->
// BFACF length minimisation -> identification check.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

#include "knotband/knot_table.hpp"
#include "knotband/lattice.hpp"

using namespace knotband;

namespace {

std::map<std::string, std::vector<std::pair<int, int>>> read_grids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::map<std::string, std::vector<std::pair<int, int>>> out;
  std::string line;
  const std::regex pair_re(R"(\[(\d+),(\d+)\])");
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string name = line.substr(0, tab);
    const std::string body = line.substr(tab + 1);
    auto& marks = out[name];
    for (std::sregex_iterator it(body.begin(), body.end(), pair_re), end; it != end; ++it) {
      marks.emplace_back(std::stoi((*it)[1]), std::stoi((*it)[2]));
    }
  }
  return out;
}

void append_line(std::vector<Point3>& v, Point3 to) {
  Point3 cur = v.back();
  while (cur != to) {
    if (cur.x != to.x) cur.x += to.x > cur.x ? 1 : -1;
    else if (cur.y != to.y) cur.y += to.y > cur.y ? 1 : -1;
    else cur.z += to.z > cur.z ? 1 : -1;
    v.push_back(cur);
  }
}

// Column segments run at height 1 over row segments at height 0.
LatticePolygon grid_polygon(const std::vector<std::pair<int, int>>& marks) {
  std::map<int, std::vector<int>> rows_in_col;
  std::map<int, std::vector<int>> cols_in_row;
  for (auto [c, r] : marks) {
    rows_in_col[c].push_back(r);
    cols_in_row[r].push_back(c);
  }
  const int c0 = marks.front().first;
  int c = c0;
  int r = rows_in_col[c][0];
  std::vector<Point3> v = {{c, r, 1}};
  do {
    const auto& rs = rows_in_col[c];
    const int r2 = rs[0] == r ? rs[1] : rs[0];
    append_line(v, {c, r2, 1});
    append_line(v, {c, r2, 0});
    const auto& cs = cols_in_row[r2];
    const int c2 = cs[0] == c ? cs[1] : cs[0];
    append_line(v, {c2, r2, 0});
    append_line(v, {c2, r2, 1});
    c = c2;
    r = r2;
  } while (!(c == c0 && r == rows_in_col[c0][0]));
  v.pop_back();  // back at the start vertex
  return LatticePolygon::validate(std::move(v));
}

LatticePolygon minimise(const LatticePolygon& p, int rounds, std::uint64_t seed) {
  LatticePolygon best = shrink(p, 4, {0.03, 2000000, 2000, seed});
  Rng rng(seed);
  for (int round = 0; round < rounds; ++round) {
    BfacfChain chain(best, 0.19, best.length() + 10);
    chain.run(rng, 20000);
    const LatticePolygon q = shrink(chain.polygon(), 4, {0.03, 2000000, 2000, seed + 1000 + round});
    if (q.length() < best.length()) best = q;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate seed conformations for the knot table"};
  std::string data_dir = "data";
  std::string out_path = "data/seeds/seeds.txt";
  int max_crossings = 8;
  int rounds = 30;
  std::uint64_t seed = 20240601;
  app.add_option("--data", data_dir, "data directory");
  app.add_option("--out", out_path, "output polygon file");
  app.add_option("--max-crossings", max_crossings);
  app.add_option("--rounds", rounds, "anneal/shrink rounds per knot");
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  const KnotTable table = KnotTable::load(data_dir);
  const auto grids = read_grids(data_dir + "/knot_grids.tsv");
  std::vector<NamedPolygon> seeds = {{"0_1", LatticePolygon::validate({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}})}};
  IdentifyOptions id_opts;
  for (const auto* rec : table.up_to(max_crossings)) {
    if (rec->crossing_number == 0 || rec->name.back() == '*') continue;
    LatticePolygon p = grid_polygon(grids.at(rec->name));
    const LaurentPoly2 h = homfly(simplify(project(p, 1)));
    if (h == rec->homfly.l_inverted() && h != rec->homfly) p = p.mirrored();
    else if (h != rec->homfly) throw std::runtime_error("grid for " + rec->name + " has the wrong HOMFLY");
    const LatticePolygon m = minimise(p, rounds, seed ^ std::hash<std::string>{}(rec->name));
    std::vector<NamedPolygon> pair = {{rec->name, m}};
    if (rec->chiral) pair.push_back({mirror_name(rec->name), m.mirrored()});
    for (const auto& np : pair) {
      const auto id = identify(np.polygon, table, id_opts);
      if (id.name != np.knot) {
        throw std::runtime_error("seed for " + np.knot + " identifies as " + id.name + " (" + id.diagnostic + ")");
      }
      std::cerr << np.knot << " length " << np.polygon.length() << " (grid " << grid_polygon(grids.at(rec->name)).length()
                << ")\n";
      seeds.push_back(np);
    }
  }
  write_polygon_file(out_path, seeds,
                     {"seed conformations: grid diagram, chirality fixed by HOMFLY, BFACF-minimised",
                      "rounds=" + std::to_string(rounds) + " seed=" + std::to_string(seed)});
  std::cerr << seeds.size() << " seeds written to " << out_path << "\n";
  return 0;
}
