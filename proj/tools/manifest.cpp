#include "manifest.hpp"

#include <fstream>
#include <sstream>

#include "graphdm/error.hpp"

namespace graphdm::cli {

namespace fs = std::filesystem;

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot hash missing file: " + path.string());
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

ManifestWriter::ManifestWriter(std::string command, fs::path out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)) {}

void ManifestWriter::set_config(nlohmann::ordered_json config) {
  config_ = std::move(config);
}

void ManifestWriter::add_input(const fs::path& path) {
  nlohmann::ordered_json entry;
  entry["hash"] = hash_file(path);
  const fs::path manifest = path.parent_path() / "manifest.json";
  if (fs::exists(manifest)) entry["stage_manifest"] = hash_file(manifest);
  inputs_[path.string()] = std::move(entry);
}

void ManifestWriter::add_output(const fs::path& path) {
  outputs_[path.filename().string()] = hash_file(path);
}

void ManifestWriter::write() const {
  nlohmann::ordered_json j;
  j["tool"] = "graphdm";
  j["command"] = command_;
  j["config"] = config_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  std::ofstream out(out_dir_ / "manifest.json");
  if (!out)
    throw DataError("cannot write manifest in " + out_dir_.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw DataError("no manifest.json in " + dir.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed manifest " + path.string() + ": " + e.what());
  }
  return j;
}

nlohmann::json check_stage_file(const fs::path& file) {
  const nlohmann::json manifest = read_manifest(file.parent_path());
  const std::string name = file.filename().string();
  if (!manifest.contains("outputs") || !manifest["outputs"].contains(name))
    throw DataError("stage manifest in " + file.parent_path().string() +
                    " does not list " + name);
  const std::string recorded = manifest["outputs"][name].get<std::string>();
  const std::string actual = hash_file(file);
  if (recorded != actual)
    throw DataError("stage content mismatch for " + file.string() +
                    ": manifest records hash " + recorded + " but the file " +
                    "hashes to " + actual +
                    " (stage outputs were modified after the manifest was "
                    "written; re-run the stage)");
  return manifest;
}

void refuse_mismatch(const std::string& what, const nlohmann::json& expected,
                     const nlohmann::json& actual) {
  throw DataError(what + "\n  expected: " + expected.dump() +
                  "\n  actual:   " + actual.dump());
}

}  // namespace graphdm::cli
