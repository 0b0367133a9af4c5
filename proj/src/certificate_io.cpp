#include "emc4/certificate_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "emc4/manifest.hpp"

namespace emc4 {

namespace {

void require_keys(const Json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw SchemaError(where + "." + k + ": unknown field");
  }
  for (const std::string& k : keys) {
    if (!j.contains(k)) throw SchemaError(where + "." + k + ": missing field");
  }
}

bool require_bool(const Json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_boolean()) throw SchemaError(where + "." + key + ": expected a boolean");
  return j.at(key).get<bool>();
}

const Json& require_array(const Json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_array()) throw SchemaError(where + "." + key + ": expected an array");
  return j.at(key);
}

Json entries(std::vector<std::pair<std::string, BigInt>> items, const char* name) {
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Json arr = Json::array();
  for (const auto& [id, n] : items) arr.push_back({{name, id}, {"n", n.str()}});
  return arr;
}

std::vector<std::pair<std::string, BigInt>> parse_entries(const Json& arr, const char* name, const std::string& where) {
  std::vector<std::pair<std::string, BigInt>> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    require_keys(arr[i], {name, "n"}, at);
    out.emplace_back(require_string(arr[i], name, at), parse_nonnegative(require_string(arr[i], "n", at), at + ".n"));
  }
  return out;
}

Json hitting_json(const HittingResult& r) {
  return {{"feasible", r.feasible},
          {"optimum", std::to_string(r.optimum)},
          {"nodes", std::to_string(r.nodes)},
          {"limit", std::to_string(r.limit)},
          {"witness", mask_to_hex(r.witness)}};
}

}  // namespace

void check_no_floats(const Json& j, const std::string& where) {
  if (j.is_number_float()) throw SchemaError(where + ": floating-point literal");
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_no_floats(v, where + "." + k);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_no_floats(j[i], where + "[" + std::to_string(i) + "]");
  }
}

std::string require_string(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + "." + key + ": missing field");
  if (!j.at(key).is_string()) throw SchemaError(where + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

BigInt parse_nonnegative(const std::string& s, const std::string& where) {
  if (!s.empty() && s[0] == '-') throw SchemaError(where + ": negative value " + s);
  const bool digits = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (!digits || (s.size() > 1 && s[0] == '0')) throw SchemaError(where + ": expected a decimal integer, got '" + s + "'");
  return BigInt(s);
}

Json certificate_to_json(const FarkasCertificate& cert, const std::string& kind) {
  return {{"kind", kind},
          {"label", cert.label},
          {"infeasibility", cert.infeasibility},
          {"denominator", cert.denominator.str()},
          {"rows", entries(cert.rows, "id")},
          {"upper", entries(cert.upper, "var")}};
}

FarkasCertificate certificate_from_json(const Json& j, const std::string& kind, const std::string& where) {
  check_no_floats(j, where);
  require_keys(j, {"kind", "label", "infeasibility", "denominator", "rows", "upper"}, where);
  if (require_string(j, "kind", where) != kind) throw SchemaError(where + ".kind: expected '" + kind + "'");
  FarkasCertificate c;
  c.label = require_string(j, "label", where);
  c.infeasibility = require_bool(j, "infeasibility", where);
  c.denominator = parse_nonnegative(require_string(j, "denominator", where), where + ".denominator");
  if (c.denominator == 0) throw SchemaError(where + ".denominator: must be positive");
  c.rows = parse_entries(require_array(j, "rows", where), "id", where + ".rows");
  c.upper = parse_entries(require_array(j, "upper", where), "var", where + ".upper");
  return c;
}

Json certificate_bundle_to_json(const std::vector<FarkasCertificate>& certs) {
  Json arr = Json::array();
  for (const auto& c : certs) arr.push_back(certificate_to_json(c, "farkas"));
  return {{"kind", "farkas-bundle"}, {"certificates", arr}};
}

std::vector<FarkasCertificate> certificate_bundle_from_json(const Json& j) {
  check_no_floats(j);
  require_keys(j, {"kind", "certificates"}, "$");
  if (require_string(j, "kind", "$") != "farkas-bundle") throw SchemaError("$.kind: expected 'farkas-bundle'");
  const Json& arr = require_array(j, "certificates", "$");
  std::vector<FarkasCertificate> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(certificate_from_json(arr[i], "farkas", "$.certificates[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string mask_to_hex(const CellMask& m) {
  static const char* hex = "0123456789abcdef";
  std::string out(64, '0');
  for (int nib = 0; nib < 64; ++nib) {
    int v = 0;
    for (int b = 0; b < 4; ++b) v |= m[static_cast<std::size_t>(4 * nib + b)] << b;
    out[static_cast<std::size_t>(63 - nib)] = hex[v];
  }
  return out;
}

CellMask mask_from_hex(const std::string& hex, const std::string& where) {
  if (hex.size() != 64) throw SchemaError(where + ": expected 64 hex digits");
  CellMask m;
  for (int nib = 0; nib < 64; ++nib) {
    const char ch = hex[static_cast<std::size_t>(63 - nib)];
    int v = 0;
    if (ch >= '0' && ch <= '9') {
      v = ch - '0';
    } else if (ch >= 'a' && ch <= 'f') {
      v = ch - 'a' + 10;
    } else {
      throw SchemaError(where + ": bad hex digit");
    }
    for (int b = 0; b < 4; ++b) m[static_cast<std::size_t>(4 * nib + b)] = (v >> b) & 1;
  }
  return m;
}

Json no_topstar_transcript(const NoTopstarReport& rep) {
  Json minima = Json::object();
  for (const auto& [key, r] : rep.minima) minima[key] = hitting_json(r);
  Json patterns = Json::array();
  for (const auto& p : rep.patterns) {
    Json e = hitting_json(p.result);
    e["name"] = p.name;
    e["check"] = p.kind;
    e["expected"] = std::to_string(p.expected);
    e["ok"] = p.ok;
    patterns.push_back(e);
  }
  Json p = Json::array(), t = Json::array();
  for (int v : rep.table.p) p.push_back(std::to_string(v));
  for (int v : rep.table.t) t.push_back(std::to_string(v));
  Json rect = Json::array();
  for (const auto& c : rep.rectangles) {
    rect.push_back({{"i", std::to_string(c.i)},
                    {"j", std::to_string(c.j)},
                    {"missing", mask_to_hex(c.m)},
                    {"size", std::to_string(c.size)},
                    {"t3", std::to_string(c.t3)},
                    {"p2", std::to_string(c.p2)},
                    {"margin", std::to_string(c.margin)}});
  }
  return {{"kind", "search-transcript"},
          {"upper_blocker",
           {{"max_present", std::to_string(rep.blocker.max_present)},
            {"min_blocker", std::to_string(rep.blocker.min_blocker)},
            {"candidates", std::to_string(rep.blocker.candidates)},
            {"witness_present", mask_to_hex(rep.blocker.witness_present)}}},
          {"single_trace_minima", minima},
          {"table", {{"p", p}, {"t", t}}},
          {"patterns", patterns},
          {"rectangles", rect}};
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << canonical_dump(j);
  if (!out) throw ResourceError("cannot write " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  check_no_floats(j, path.filename().string());
  return j;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Ok:
      return "ok";
    case CheckStatus::Failed:
      return "failed";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "failed";
}

Json report_to_json(CheckReport& rep) {
  Json body = {{"kind", "report"},
               {"check", rep.name},
               {"status", to_string(rep.status)},
               {"markers", rep.markers},
               {"artifacts", rep.artifacts},
               {"reason", rep.reason}};
  rep.digest = sha256_hex(body.dump());
  body["digest"] = rep.digest;
  return body;
}

CheckReport report_from_json(const Json& j) {
  check_no_floats(j);
  require_keys(j, {"kind", "check", "status", "markers", "artifacts", "reason", "digest"}, "$");
  if (require_string(j, "kind", "$") != "report") throw SchemaError("$.kind: expected 'report'");
  CheckReport r;
  r.name = require_string(j, "check", "$");
  const std::string status = require_string(j, "status", "$");
  if (status == "ok") {
    r.status = CheckStatus::Ok;
  } else if (status == "failed") {
    r.status = CheckStatus::Failed;
  } else if (status == "skipped") {
    r.status = CheckStatus::Skipped;
  } else {
    throw SchemaError("$.status: unknown status '" + status + "'");
  }
  if (!j.at("markers").is_object()) throw SchemaError("$.markers: expected an object");
  for (const auto& [k, v] : j.at("markers").items()) {
    if (!v.is_string()) throw SchemaError("$.markers." + k + ": expected a string");
    r.markers[k] = v.get<std::string>();
  }
  const Json& arts = require_array(j, "artifacts", "$");
  for (std::size_t i = 0; i < arts.size(); ++i) {
    if (!arts[i].is_string()) throw SchemaError("$.artifacts[" + std::to_string(i) + "]: expected a string");
    r.artifacts.push_back(arts[i].get<std::string>());
  }
  r.reason = require_string(j, "reason", "$");
  r.digest = require_string(j, "digest", "$");
  CheckReport copy = r;
  report_to_json(copy);
  if (copy.digest != r.digest) throw SchemaError("$.digest: does not match the report body");
  return r;
}

}  // namespace emc4
