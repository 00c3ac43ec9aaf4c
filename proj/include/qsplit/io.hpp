#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace qsplit::io {

/// %.17g, so every double round-trips.
std::string format_double(double v);

/// Header plus rectangular rows, '\n' line endings. Written to a temporary
/// file beside the target, then renamed over it.
void write_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
               const std::filesystem::path& path);

void write_text(const std::string& content, const std::filesystem::path& path);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters;
  std::vector<std::filesystem::path> outputs;
  std::map<std::string, std::string> checksums;
  std::string versions;
};

/// Hashes every listed output, stamps the time and writes manifest.json
/// into dir. Call after all other outputs are in place.
void write_manifest(RunManifest& m, const std::filesystem::path& dir);

inline constexpr const char* kVersion = "qsplit 1.0.0";

}  // namespace qsplit::io
