#pragma once

// Stage manifests: every command writes `manifest.json` next to its outputs
// with the full configuration, the hashes of the exact inputs it read, and
// the hashes of what it wrote. Downstream commands re-hash their inputs and
// refuse to run when a file no longer matches the manifest that produced it,
// or when metric tags disagree between stages.

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace graphdm::cli {

/// FNV-1a 64 over the file bytes, hex-encoded.
std::string hash_file(const std::filesystem::path& path);

class ManifestWriter {
 public:
  ManifestWriter(std::string command, std::filesystem::path out_dir);

  void set_config(nlohmann::ordered_json config);
  /// Records an input file plus, when its directory holds a manifest, that
  /// manifest's own hash (the provenance chain).
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  /// Writes <out_dir>/manifest.json.
  void write() const;

 private:
  std::string command_;
  std::filesystem::path out_dir_;
  nlohmann::ordered_json config_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::object();
};

/// Loads <dir>/manifest.json (DataError when absent or malformed).
nlohmann::json read_manifest(const std::filesystem::path& dir);

/// Verifies that `file` still hashes to what the manifest of its directory
/// recorded; returns the manifest. Stale or tampered stages are refused.
nlohmann::json check_stage_file(const std::filesystem::path& file);

/// Refuses with a side-by-side diff of the two configs (DataError).
[[noreturn]] void refuse_mismatch(const std::string& what,
                                  const nlohmann::json& expected,
                                  const nlohmann::json& actual);

}  // namespace graphdm::cli
