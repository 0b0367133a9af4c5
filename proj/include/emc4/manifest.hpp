#pragma once

// SHA-256 manifests over an output directory.

#include <filesystem>
#include <string>
#include <vector>

namespace emc4 {

inline constexpr const char* kManifestName = "MANIFEST.sha256";

std::string sha256_hex(const std::string& bytes);
/// Throws ResourceError when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

/// "<digest>  <relative path>" for every regular file below dir except the
/// manifest itself, sorted by path. Returns the manifest text after writing it.
std::string emit_manifest(const std::filesystem::path& dir);

struct ManifestCheck {
  bool ok = false;
  std::vector<std::string> problems;  // "changed: path", "missing: path", "unlisted: path"
};

/// Recomputes every digest. A missing manifest is a problem, not an exception.
ManifestCheck verify_manifest(const std::filesystem::path& dir);

}  // namespace emc4
