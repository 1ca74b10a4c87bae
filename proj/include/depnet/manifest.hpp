#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace depnet {

inline constexpr const char* kToolVersion = "depnet 0.3.0";

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Everything needed to re-run a command: its argv, resolved parameters
/// (including the seed actually used) and digests of its inputs.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  double duration_seconds = 0.0;

  nlohmann::json to_json() const;
  void save(const std::filesystem::path& path) const;
};

}  // namespace depnet
