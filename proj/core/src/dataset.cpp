#include "graphdm/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "graphdm/error.hpp"

namespace graphdm {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& what) {
  throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

GraphRecord parse_record(const std::string& path, std::size_t line_no,
                         const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path, line_no, std::string("malformed JSON record: ") + e.what());
  }
  if (!j.is_object() || !j.contains("id") || !j.contains("n") ||
      !j.contains("edges") || !j.contains("params") || !j.contains("seed"))
    fail(path, line_no, "record must carry id, n, edges, params, seed");

  GraphRecord rec;
  try {
    rec.id = j.at("id").get<std::string>();
    const int n = j.at("n").get<int>();
    if (n < 1) fail(path, line_no, "node count must be positive");
    rec.graph = Graph(n);
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        fail(path, line_no, "edge must be a [u, v] pair");
      const int u = e.at(0).get<int>();
      const int v = e.at(1).get<int>();
      if (!(0 <= u && u < v && v < n))
        fail(path, line_no,
             "edge endpoints out of range or unordered: [" +
                 std::to_string(u) + ", " + std::to_string(v) + "] with n=" +
                 std::to_string(n));
      rec.graph.add_edge(u, v);
    }
    for (const auto& [key, value] : j.at("params").items())
      rec.params[key] = value.get<double>();
    rec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(path, line_no, std::string("bad field type: ") + e.what());
  }
  return rec;
}

}  // namespace

std::vector<GraphRecord> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);

  std::vector<GraphRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    GraphRecord rec = parse_record(path, line_no, line);
    if (!seen.insert(rec.id).second)
      fail(path, line_no, "duplicate record id: " + rec.id);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_dataset(const std::vector<GraphRecord>& records,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open dataset file for write: " + path);
  for (const auto& rec : records) {
    ordered_json j;
    j["id"] = rec.id;
    j["n"] = rec.graph.node_count();
    auto edges = ordered_json::array();
    for (const auto& [u, v] : rec.graph.edges())
      edges.push_back(ordered_json::array({u, v}));
    j["edges"] = std::move(edges);
    j["params"] = ordered_json::object();
    for (const auto& [key, value] : rec.params) j["params"][key] = value;
    j["seed"] = rec.seed;
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("failed writing dataset file: " + path);
}

void sort_by_id(std::vector<GraphRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const GraphRecord& a, const GraphRecord& b) {
              return a.id < b.id;
            });
}

int common_node_count(const std::vector<GraphRecord>& records, int min_n) {
  if (records.empty()) throw DataError("dataset is empty");
  const int n = records.front().graph.node_count();
  for (const auto& rec : records) {
    if (rec.graph.node_count() != n)
      throw DataError("dataset mixes node counts (" + std::to_string(n) +
                      " vs " + std::to_string(rec.graph.node_count()) +
                      " at id " + rec.id + ")");
  }
  if (n < min_n)
    throw DataError("dataset node count " + std::to_string(n) +
                    " below required minimum " + std::to_string(min_n));
  return n;
}

}  // namespace graphdm
