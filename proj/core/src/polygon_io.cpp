#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "knotband/lattice.hpp"

namespace knotband {
namespace {

std::string header_value(const std::string& line, const std::string& key) {
  const auto pos = line.find(key + "=");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 1;
  const auto end = line.find_first_of(" \t", start);
  return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

std::vector<NamedPolygon> read_polygons(std::istream& in) {
  std::vector<NamedPolygon> out;
  std::string knot;
  std::string declared_length;
  std::vector<Point3> vertices;
  int line_no = 0;
  auto flush = [&]() {
    if (vertices.empty()) return;
    LatticePolygon p = LatticePolygon::validate(std::move(vertices));
    if (!declared_length.empty() && std::stoi(declared_length) != p.length()) {
      throw std::runtime_error("polygon ending before line " + std::to_string(line_no) + " declares length " +
                               declared_length + " but has " + std::to_string(p.length()) + " vertices");
    }
    out.push_back({knot.empty() ? "Unknown" : knot, std::move(p)});
    vertices.clear();
    knot.clear();
    declared_length.clear();
  };
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      const std::string k = line.rfind("# knot=", 0) == 0 ? header_value(line, "knot") : std::string();
      if (!k.empty()) {
        flush();
        knot = k;
        declared_length = header_value(line, "length");
      }
      continue;
    }
    std::istringstream ls(line);
    Point3 v;
    std::string extra;
    if (!(ls >> v.x >> v.y >> v.z) || (ls >> extra)) {
      throw std::runtime_error("malformed vertex on line " + std::to_string(line_no) + ": " + line);
    }
    vertices.push_back(v);
  }
  flush();
  return out;
}

std::vector<NamedPolygon> read_polygon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polygon file " + path);
  return read_polygons(in);
}

void write_polygons(std::ostream& out, const std::vector<NamedPolygon>& polygons,
                    const std::vector<std::string>& metadata) {
  for (const auto& m : metadata) out << "# " << m << '\n';
  bool first = true;
  for (const auto& np : polygons) {
    if (!first) out << '\n';
    first = false;
    out << "# knot=" << np.knot << " length=" << np.polygon.length() << '\n';
    for (const auto& v : np.polygon.vertices()) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
  }
}

void write_polygon_file(const std::string& path, const std::vector<NamedPolygon>& polygons,
                        const std::vector<std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("IoFailure: cannot write " + path);
  write_polygons(out, polygons, metadata);
  if (!out) throw std::runtime_error("IoFailure: write failed for " + path);
}

}  // namespace knotband
