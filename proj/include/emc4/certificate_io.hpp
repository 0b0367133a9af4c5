#pragma once

// JSON forms of certificates, search transcripts and check reports. Every
// number is written as a decimal string; floating-point literals are rejected
// anywhere in an input document.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "emc4/exact_lp.hpp"
#include "emc4/lattice.hpp"
#include "emc4/notopstar.hpp"

namespace emc4 {

using Json = nlohmann::json;

/// Malformed input; the message names the offending field.
class SchemaError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

/// "farkas" for top-star branches, "dual-cut" for the board duals.
Json certificate_to_json(const FarkasCertificate& cert, const std::string& kind);
FarkasCertificate certificate_from_json(const Json& j, const std::string& kind, const std::string& where = "$");

Json certificate_bundle_to_json(const std::vector<FarkasCertificate>& certs);
std::vector<FarkasCertificate> certificate_bundle_from_json(const Json& j);

/// 64 hex digits, cell 255 first.
std::string mask_to_hex(const CellMask& m);
CellMask mask_from_hex(const std::string& hex, const std::string& where);

/// Single-trace minima and critical pattern searches: optimum, tree size and
/// witness per instance, plus the upper blocker.
Json no_topstar_transcript(const NoTopstarReport& rep);

/// Fails on floats, then on the schema of the given kind.
void check_no_floats(const Json& j, const std::string& where = "$");

/// Canonical bytes: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);
void write_json(const std::filesystem::path& path, const Json& j);
/// Throws ResourceError when unreadable, SchemaError on bad JSON or floats.
Json read_json(const std::filesystem::path& path);

std::string require_string(const Json& j, const std::string& key, const std::string& where);
BigInt parse_nonnegative(const std::string& s, const std::string& where);

enum class CheckStatus { Ok, Failed, Skipped };
std::string to_string(CheckStatus s);

struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  std::map<std::string, std::string> markers;
  std::vector<std::string> artifacts;  // relative to the output directory
  std::string reason;
  long long elapsed_ms = 0;  // console only, never written to report files
  std::string digest;        // SHA-256 of the canonical report body
};

/// Report body without timing; fills the digest.
Json report_to_json(CheckReport& rep);
CheckReport report_from_json(const Json& j);

}  // namespace emc4
