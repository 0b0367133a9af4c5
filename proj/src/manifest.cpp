#include "emc4/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "emc4/rational.hpp"

namespace emc4 {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw ResourceError("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

namespace {

std::map<std::string, std::string> digest_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel == kManifestName) continue;
    out[rel] = sha256_file(e.path());
  }
  return out;
}

}  // namespace

std::string emit_manifest(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ResourceError("not a directory: " + dir.string());
  std::string text;
  for (const auto& [rel, digest] : digest_tree(dir)) text += digest + "  " + rel + "\n";
  std::ofstream out(dir / kManifestName, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot write manifest in " + dir.string());
  out << text;
  return text;
}

ManifestCheck verify_manifest(const fs::path& dir) {
  ManifestCheck c;
  std::ifstream in(dir / kManifestName, std::ios::binary);
  if (!in) {
    c.problems.push_back(std::string("missing: ") + kManifestName);
    return c;
  }
  std::map<std::string, std::string> listed;
  std::string line;
  while (std::getline(in, line)) {
    if (line.size() < 67 || line.compare(64, 2, "  ") != 0) {
      c.problems.push_back("malformed manifest line: " + line);
      continue;
    }
    listed[line.substr(66)] = line.substr(0, 64);
  }
  const auto actual = digest_tree(dir);
  for (const auto& [rel, digest] : listed) {
    const auto it = actual.find(rel);
    if (it == actual.end()) {
      c.problems.push_back("missing: " + rel);
    } else if (it->second != digest) {
      c.problems.push_back("changed: " + rel);
    }
  }
  for (const auto& [rel, digest] : actual) {
    if (!listed.count(rel)) c.problems.push_back("unlisted: " + rel);
  }
  c.ok = c.problems.empty();
  return c;
}

}  // namespace emc4
