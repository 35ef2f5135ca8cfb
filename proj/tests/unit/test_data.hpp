#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace knotband::testing {

/// Rows of a tab-separated data file, skipping '#' comments.
inline std::vector<std::vector<std::string>> read_tsv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

inline std::map<std::string, std::string> reference_pds() {
  std::map<std::string, std::string> out;
  for (auto& row : read_tsv(std::string(KNOTBAND_DATA_DIR) + "/knot_pd.tsv")) out[row[0]] = row[1];
  return out;
}

inline std::string data_path(const std::string& name) { return std::string(KNOTBAND_DATA_DIR) + "/" + name; }
inline std::string test_data_path(const std::string& name) {
  return std::string(KNOTBAND_TEST_DATA_DIR) + "/" + name;
}

}  // namespace knotband::testing
