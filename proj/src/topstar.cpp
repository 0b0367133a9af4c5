#include "emc4/topstar.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "emc4/ferrers_audit.hpp"
#include "emc4/notopstar.hpp"

namespace emc4 {

namespace {

constexpr int kY = 0;
constexpr int kM = 64;
constexpr int kT = 256;
constexpr int kP = 512;
constexpr int kZSize = 37;

int coord(int x, int i) { return (x >> (2 * i)) & 3; }

bool in_z(int x) { return coord(x, 0) == 0 || coord(x, 1) == 0 || coord(x, 2) == 0; }

int down_size(int x) { return (coord(x, 0) + 1) * (coord(x, 1) + 1) * (coord(x, 2) + 1); }

int up_size(int x) { return (4 - coord(x, 0)) * (4 - coord(x, 1)) * (4 - coord(x, 2)); }

int up_size_in_z(int x) {
  int n = 0;
  for (int w : zero_cells())
    if (coord(w, 0) >= coord(x, 0) && coord(w, 1) >= coord(x, 1) && coord(w, 2) >= coord(x, 2)) ++n;
  return n;
}

// Absent/present tests shared by the row builder and the regenerator.
bool forces_y_absent(int c, int x) { return in_z(x) && down_size(x) > c; }
bool forces_y_present(int c, int x) { return in_z(x) && kZSize - up_size_in_z(x) < c; }
bool forces_m_absent(int ell, int x, int t) { return up_size(x) * (3 - t) > ell; }
bool forces_m_present(int ell, int x, int t) { return 192 - down_size(x) * (t + 1) < ell; }

bool is_trace_var(int z) { return z >= kT && z < kTopstarVariables; }

void need(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

std::string digits3(int x) {
  std::string s;
  for (int i = 0; i < 3; ++i) s += static_cast<char>('0' + coord(x, i));
  return s;
}

std::string var_name(int v) {
  if (v < kM) return "y" + digits3(v);
  if (v < kT) return "m" + digits3((v - kM) / 3) + "_" + std::to_string((v - kM) % 3);
  const SupportedTrace h = topstar_trace(v);
  std::string s = v < kP ? "t" : "p";
  for (int c : h.support) s += static_cast<char>('0' + c);
  s += '_';
  for (int k = 0; k < h.size(); ++k) s += static_cast<char>('0' + h.values[static_cast<std::size_t>(k)]);
  return s;
}

// Wide quad cell q as a variable: top slice -> y, lower -> m.
bool is_top(int q) { return (q >> 6) == 3; }
int quad_var(int q) { return is_top(q) ? topstar_y(q & 63) : topstar_m(q & 63, q >> 6); }

struct IntRow {
  std::vector<std::pair<int, int>> coeffs;
  int rhs = 0;
};

int trace_value_var(int z, const std::array<std::uint8_t, 3>& values) {
  const SupportedTrace h = topstar_trace(z);
  SupportedTrace w = h;
  w.values = values;
  return z - h.value_index() + w.value_index();
}

bool trace_allows_quad(const SupportedTrace& h, int q) {
  for (int c = 0; c < 4; ++c) {
    const int hv = h.value_in_column(c);
    if (hv >= 0 && ((q >> (2 * c)) & 3) == hv) return false;
  }
  return true;
}

bool quads_disjoint(int a, int b) {
  for (int c = 0; c < 4; ++c)
    if (((a >> (2 * c)) & 3) == ((b >> (2 * c)) & 3)) return false;
  return true;
}

// The single definition of every row family.
IntRow int_row(const std::string& f, const std::vector<int>& p) {
  IntRow r;
  auto np = [&](std::size_t n) { need(p.size() == n, "wrong parameter count"); };
  auto cell3 = [&](int x) { need(x >= 0 && x < 64, "cell out of range"); };
  if (f == "T1s") {
    np(1);
    cell3(p[0]);
    need(!in_z(p[0]), "top support row needs a cell without zero");
    r.coeffs = {{topstar_y(p[0]), 1}};
  } else if (f == "T1d") {
    np(2);
    cell3(p[0]);
    need(p[1] >= 0 && p[1] < 3 && coord(p[0], p[1]) > 0, "bad down-set step");
    r.coeffs = {{topstar_y(p[0]), 1}, {topstar_y(p[0] - (1 << (2 * p[1]))), -1}};
  } else if (f == "T2c") {
    np(2);
    cell3(p[0]);
    need(p[1] >= 0 && p[1] < 3, "bad level");
    r.coeffs = {{topstar_m(p[0], p[1]), 1}, {topstar_y(p[0]), 1}};
    r.rhs = 1;
  } else if (f == "T2u") {
    np(3);
    cell3(p[0]);
    need(p[1] >= 0 && p[1] < 3 && p[2] >= 0 && p[2] < 4, "bad up-set step");
    if (p[2] < 3) {
      need(coord(p[0], p[2]) < 3, "bad up-set step");
      r.coeffs = {{topstar_m(p[0], p[1]), 1}, {topstar_m(p[0] + (1 << (2 * p[2])), p[1]), -1}};
    } else {
      need(p[1] < 2, "bad up-set step");
      r.coeffs = {{topstar_m(p[0], p[1]), 1}, {topstar_m(p[0], p[1] + 1), -1}};
    }
  } else if (f == "T2s") {
    np(1);
    cell3(p[0]);
    r.coeffs = {{topstar_m(p[0], 2), 1}, {topstar_y(p[0]), 1}};
    r.rhs = 1;
  } else if (f == "T3") {
    np(0);
    for (int x = 0; x < 64; ++x) {
      r.coeffs.emplace_back(topstar_y(x), -1);
      for (int t = 0; t < 3; ++t) r.coeffs.emplace_back(topstar_m(x, t), 1);
    }
    r.rhs = 2;
  } else if (f == "T4") {
    np(2);
    need(is_trace_var(p[0]), "not a trace variable");
    const SupportedTrace h = topstar_trace(p[0]);
    need(p[1] >= 0 && p[1] < h.size() && h.values[static_cast<std::size_t>(p[1])] > 0, "bad trace step");
    auto v = h.values;
    --v[static_cast<std::size_t>(p[1])];
    r.coeffs = {{p[0], 1}, {trace_value_var(p[0], v), -1}};
  } else if (f == "T5") {
    np(2);
    need(is_trace_var(p[0]) && p[1] >= 0 && p[1] < 256, "bad closure row");
    need(topstar_trace(p[0]).extensions().test(static_cast<std::size_t>(p[1])), "quad does not extend the trace");
    if (is_top(p[1])) {
      r.coeffs = {{p[0], 1}, {quad_var(p[1]), -1}};
    } else {
      r.coeffs = {{p[0], 1}, {quad_var(p[1]), 1}};
      r.rhs = 1;
    }
  } else if (f == "T6") {
    np(3);
    need(p[0] >= 0 && p[0] < 6 && p[1] >= 0 && p[1] < p[2] && p[2] < 16, "bad pair row");
    need(is_pair_obstruction(p[1], p[2]), "not a pair obstruction");
    r.coeffs = {{topstar_p(p[0], p[1]), 1}, {topstar_p(p[0], p[2]), 1}};
    r.rhs = 1;
  } else if (f == "T7") {
    np(4);
    need(p[0] >= 0 && p[0] < 4 && p[1] >= 0 && p[1] < p[2] && p[2] < p[3] && p[3] < 64, "bad triple row");
    need(is_bad_triple(p[1], p[2], p[3]), "not a bad triple");
    r.coeffs = {{topstar_t(p[0], p[1]), 1}, {topstar_t(p[0], p[2]), 1}, {topstar_t(p[0], p[3]), 1}};
    r.rhs = 2;
  } else if (f == "T8") {
    np(6);
    need(is_trace_var(p[0]), "not a trace variable");
    const SupportedTrace h = topstar_trace(p[0]);
    const int j = p[1], u = p[2];
    need(j >= 0 && j < 4 && (u == 0 || u == 1) && h.value_in_column(j) != u, "bad seed");
    need(p[3] >= 0 && p[3] < p[4] && p[4] < p[5] && p[5] < 256, "bad residual quads");
    for (int k = 3; k < 6; ++k) {
      need(trace_allows_quad(h, p[static_cast<std::size_t>(k)]), "residual quad meets the trace");
      need(((p[static_cast<std::size_t>(k)] >> (2 * j)) & 3) != u, "residual quad meets the seed");
    }
    need(quads_disjoint(p[3], p[4]) && quads_disjoint(p[3], p[5]) && quads_disjoint(p[4], p[5]),
         "residual quads are not disjoint");
    r.coeffs = {{p[0], 1}};
    for (int k = 3; k < 6; ++k) {
      const int q = p[static_cast<std::size_t>(k)];
      if (is_top(q)) {
        r.coeffs.emplace_back(quad_var(q), 1);
        ++r.rhs;
      } else {
        r.coeffs.emplace_back(quad_var(q), -1);
      }
    }
  } else if (f == "T9p") {
    np(1);
    need(p[0] >= 0 && p[0] < 6, "bad pair support");
    for (int u = 0; u < 16; ++u) r.coeffs.emplace_back(topstar_p(p[0], u), 1);
    r.rhs = 4;
  } else if (f == "T9t") {
    np(1);
    need(p[0] >= 0 && p[0] < 4, "bad triple support");
    for (int v = 0; v < 64; ++v) r.coeffs.emplace_back(topstar_t(p[0], v), 1);
    r.rhs = 32;
  } else if (f == "T10y" || f == "T10m") {
    np(2);
    const bool y = f == "T10y";
    need(p[0] >= 0 && p[0] <= (y ? kZSize : 192) && (p[1] == 0 || p[1] == 1), "bad cardinality row");
    const int s = p[1] == 0 ? 1 : -1;
    for (int x = 0; x < 64; ++x) {
      if (y)
        r.coeffs.emplace_back(topstar_y(x), s);
      else
        for (int t = 0; t < 3; ++t) r.coeffs.emplace_back(topstar_m(x, t), s);
    }
    r.rhs = s * p[0];
  } else if (f == "T10ya" || f == "T10yp") {
    np(2);
    cell3(p[1]);
    if (f == "T10ya") {
      need(forces_y_absent(p[0], p[1]), "cell is not forced absent");
      r.coeffs = {{topstar_y(p[1]), 1}};
    } else {
      need(forces_y_present(p[0], p[1]), "cell is not forced present");
      r.coeffs = {{topstar_y(p[1]), -1}};
      r.rhs = -1;
    }
  } else if (f == "T10ma" || f == "T10mp") {
    np(3);
    cell3(p[1]);
    need(p[2] >= 0 && p[2] < 3, "bad level");
    if (f == "T10ma") {
      need(forces_m_absent(p[0], p[1], p[2]), "cell is not forced absent");
      r.coeffs = {{topstar_m(p[1], p[2]), 1}};
    } else {
      need(forces_m_present(p[0], p[1], p[2]), "cell is not forced present");
      r.coeffs = {{topstar_m(p[1], p[2]), -1}};
      r.rhs = -1;
    }
  } else {
    throw std::invalid_argument("unknown row family " + f);
  }
  return r;
}

std::string row_id(const std::string& family, const std::vector<int>& params) {
  std::string s = family + ":";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(params[i]);
  }
  return s;
}

RowMeta meta(const std::string& family, std::vector<int> params) { return {kTopstarGenerator, family, std::move(params)}; }

void eager_metas(const TopstarBranch& b, std::vector<RowMeta>& out) {
  for (int x = 0; x < 64; ++x)
    if (!in_z(x)) out.push_back(meta("T1s", {x}));
  for (int x = 0; x < 64; ++x)
    for (int i = 0; i < 3; ++i)
      if (coord(x, i) > 0) out.push_back(meta("T1d", {x, i}));
  for (int x = 0; x < 64; ++x)
    for (int t = 0; t < 3; ++t) out.push_back(meta("T2c", {x, t}));
  for (int x = 0; x < 64; ++x)
    for (int t = 0; t < 3; ++t)
      for (int k = 0; k < 4; ++k)
        if ((k < 3 && coord(x, k) < 3) || (k == 3 && t < 2)) out.push_back(meta("T2u", {x, t, k}));
  for (int x = 0; x < 64; ++x) out.push_back(meta("T2s", {x}));
  out.push_back(meta("T3", {}));
  for (int z = kT; z < kTopstarVariables; ++z) {
    const SupportedTrace h = topstar_trace(z);
    for (int i = 0; i < h.size(); ++i)
      if (h.values[static_cast<std::size_t>(i)] > 0) out.push_back(meta("T4", {z, i}));
  }
  for (int j = 0; j < 6; ++j)
    for (int a = 0; a < 16; ++a)
      for (int c = a + 1; c < 16; ++c)
        if (is_pair_obstruction(a, c)) out.push_back(meta("T6", {j, a, c}));
  for (int j = 0; j < 6; ++j) out.push_back(meta("T9p", {j}));
  for (int i = 0; i < 4; ++i) out.push_back(meta("T9t", {i}));
  out.push_back(meta("T10y", {b.c, 0}));
  out.push_back(meta("T10y", {b.c, 1}));
  if (b.has_ell()) {
    out.push_back(meta("T10m", {b.ell, 0}));
    out.push_back(meta("T10m", {b.ell, 1}));
  }
  for (const auto& row : ideal_forcing_rows(b.c, b.has_ell() ? std::optional<int>(b.ell) : std::nullopt))
    out.push_back(row.meta);
}

void lazy_metas(std::vector<RowMeta>& out) {
  for (int z = kT; z < kTopstarVariables; ++z) {
    const CellMask ext = topstar_trace(z).extensions();
    for (int q = 0; q < 256; ++q)
      if (ext.test(static_cast<std::size_t>(q))) out.push_back(meta("T5", {z, q}));
  }
  for (int i = 0; i < 4; ++i)
    for (const auto& bt : bad_triples()) out.push_back(meta("T7", {i, bt.cells[0], bt.cells[1], bt.cells[2]}));
  for (int z = kT; z < kTopstarVariables; ++z) {
    const SupportedTrace h = topstar_trace(z);
    for (int j = 0; j < 4; ++j)
      for (int u = 0; u < 2; ++u)
        for (const auto& cl : residual_seed_clauses(h, Seed{j, u})) out.push_back(meta("T8", {z, j, u, cl[0], cl[1], cl[2]}));
  }
}

LinearRow to_linear(const RowMeta& m, const IntRow& r) {
  LinearRow row;
  row.id = row_id(m.family, m.params);
  for (const auto& [j, a] : r.coeffs) row.coeffs.emplace_back(j, Rational(a));
  row.rhs = r.rhs;
  row.tag = m.family;
  row.meta = m;
  return row;
}

struct CompactRow {
  std::uint32_t meta_index;
  std::uint8_t n;
  std::array<std::int16_t, 4> cols;
  std::array<std::int8_t, 4> coef;
  std::int8_t rhs;
};

struct LazyTable {
  std::vector<RowMeta> metas;
  std::vector<CompactRow> rows;
};

const LazyTable& lazy_table() {
  static const LazyTable table = [] {
    LazyTable t;
    lazy_metas(t.metas);
    t.rows.reserve(t.metas.size());
    for (std::size_t i = 0; i < t.metas.size(); ++i) {
      const IntRow r = int_row(t.metas[i].family, t.metas[i].params);
      CompactRow c{};
      c.meta_index = static_cast<std::uint32_t>(i);
      c.n = static_cast<std::uint8_t>(r.coeffs.size());
      for (std::size_t k = 0; k < r.coeffs.size(); ++k) {
        c.cols[k] = static_cast<std::int16_t>(r.coeffs[k].first);
        c.coef[k] = static_cast<std::int8_t>(r.coeffs[k].second);
      }
      c.rhs = static_cast<std::int8_t>(r.rhs);
      t.rows.push_back(c);
    }
    return t;
  }();
  return table;
}

template <class T>
std::vector<LinearRow> most_violated(const std::vector<T>& x, const T& tol, int max_rows) {
  const LazyTable& table = lazy_table();
  std::vector<std::pair<T, std::uint32_t>> hits;
  for (const auto& r : table.rows) {
    T lhs = T(0);
    for (int k = 0; k < r.n; ++k) lhs += T(r.coef[static_cast<std::size_t>(k)]) * x[static_cast<std::size_t>(r.cols[static_cast<std::size_t>(k)])];
    const T excess = lhs - T(r.rhs);
    if (excess > tol) hits.emplace_back(excess, r.meta_index);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (static_cast<int>(hits.size()) > max_rows) hits.resize(static_cast<std::size_t>(max_rows));
  std::vector<LinearRow> out;
  for (const auto& [e, i] : hits) out.push_back(topstar_row(table.metas[i]));
  return out;
}

RationalSystem empty_system() {
  RationalSystem sys;
  for (int v = 0; v < kTopstarVariables; ++v) {
    sys.add_variable(var_name(v));
    int w = 0;
    if (v < kM)
      w = 625;
    else if (v < kT)
      w = -625;
    else if (v < kP)
      w = 300;
    else
      w = 144;
    sys.set_objective(v, w);
  }
  sys.set_bound(kTopstarBound);
  return sys;
}

// Branch cardinality rows carry the branch parameters; they must agree with the branch.
bool belongs_to_branch(const RowMeta& m, const TopstarBranch& b) {
  if (m.family == "T10y" || m.family == "T10ya" || m.family == "T10yp") return !m.params.empty() && m.params[0] == b.c;
  if (m.family == "T10m" || m.family == "T10ma" || m.family == "T10mp")
    return b.has_ell() && !m.params.empty() && m.params[0] == b.ell;
  return true;
}

}  // namespace

bool TopstarBranch::valid() const {
  if (c < 0 || c > 37) return false;
  if (c == 23) return ell >= 0 && ell <= 25;
  return ell == -1;
}

std::string TopstarBranch::id() const {
  std::string s = "c=" + std::to_string(c);
  if (has_ell()) s += ",l=" + std::to_string(ell);
  return s;
}

std::vector<TopstarBranch> topstar_branches() {
  std::vector<TopstarBranch> out;
  for (int c = 0; c <= 37; ++c)
    if (c != 23) out.push_back({c, -1});
  for (int l = 0; l <= 25; ++l) out.push_back({23, l});
  return out;
}

TopstarBranch parse_topstar_branch(const std::string& id) {
  TopstarBranch b;
  int c = -1, l = -1;
  char tail = 0;
  if (std::sscanf(id.c_str(), "c=%d,l=%d%c", &c, &l, &tail) == 2) {
    b = {c, l};
  } else if (std::sscanf(id.c_str(), "c=%d%c", &c, &tail) == 1) {
    b = {c, -1};
  } else {
    throw std::invalid_argument("bad branch id " + id);
  }
  if (!b.valid()) throw std::invalid_argument("invalid branch " + id);
  return b;
}

int topstar_y(int x) { return kY + x; }
int topstar_m(int x, int t) { return kM + 3 * x + t; }
int topstar_t(int support, int v) { return kT + 64 * support + v; }
int topstar_p(int support, int u) { return kP + 16 * support + u; }

SupportedTrace topstar_trace(int var) {
  if (var >= kT && var < kP) return make_trace(triple_supports()[static_cast<std::size_t>((var - kT) / 64)], (var - kT) % 64);
  if (var >= kP && var < kTopstarVariables)
    return make_trace(pair_supports()[static_cast<std::size_t>((var - kP) / 16)], (var - kP) % 16);
  throw std::invalid_argument("not a trace variable");
}

const std::vector<int>& zero_cells() {
  static const std::vector<int> z = [] {
    std::vector<int> out;
    for (int x = 0; x < 64; ++x)
      if (in_z(x)) out.push_back(x);
    return out;
  }();
  return z;
}

LinearRow topstar_row(const RowMeta& m) {
  if (m.generator != kTopstarGenerator) throw std::invalid_argument("not a top-star row");
  return to_linear(m, int_row(m.family, m.params));
}

RowMeta parse_topstar_row_id(const std::string& id) {
  const auto colon = id.find(':');
  if (colon == std::string::npos || colon == 0) throw std::invalid_argument("bad row id " + id);
  RowMeta m{kTopstarGenerator, id.substr(0, colon), {}};
  const std::string rest = id.substr(colon + 1);
  if (!rest.empty()) {
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty() || tok.size() > 6) throw std::invalid_argument("bad row id " + id);
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("bad row id " + id);
      m.params.push_back(v);
    }
  }
  if (row_id(m.family, m.params) != id) throw std::invalid_argument("non-canonical row id " + id);
  return m;
}

void register_topstar_generator() {
  static std::once_flag once;
  std::call_once(once, [] { register_row_generator(kTopstarGenerator, topstar_row); });
}

std::vector<LinearRow> ideal_forcing_rows(int c, std::optional<int> ell) {
  if (c < 0) throw std::invalid_argument("negative c");
  std::vector<LinearRow> out;
  for (int x : zero_cells())
    if (forces_y_absent(c, x)) out.push_back(topstar_row(meta("T10ya", {c, x})));
  for (int x : zero_cells())
    if (forces_y_present(c, x)) out.push_back(topstar_row(meta("T10yp", {c, x})));
  if (ell) {
    for (int x = 0; x < 64; ++x)
      for (int t = 0; t < 3; ++t)
        if (forces_m_absent(*ell, x, t)) out.push_back(topstar_row(meta("T10ma", {*ell, x, t})));
    for (int x = 0; x < 64; ++x)
      for (int t = 0; t < 3; ++t)
        if (forces_m_present(*ell, x, t)) out.push_back(topstar_row(meta("T10mp", {*ell, x, t})));
  }
  return out;
}

RationalSystem build_relaxation(const TopstarBranch& branch) {
  if (!branch.valid()) throw std::invalid_argument("invalid top-star branch");
  RationalSystem sys = empty_system();
  std::vector<RowMeta> metas;
  eager_metas(branch, metas);
  for (const auto& m : metas) sys.add_row(topstar_row(m));
  return sys;
}

std::vector<LinearRow> TopstarSeparator::violated(const std::vector<double>& x, double tol, int max_rows) const {
  return most_violated<double>(x, tol, max_rows);
}

std::vector<LinearRow> TopstarSeparator::violated_exact(const std::vector<Rational>& x, int max_rows) const {
  return most_violated<Rational>(x, Rational(0), max_rows);
}

TopstarRowCounts topstar_row_counts(const TopstarBranch& branch) {
  TopstarRowCounts n;
  std::vector<RowMeta> eager;
  eager_metas(branch, eager);
  n.eager = static_cast<long long>(eager.size());
  for (const auto& m : lazy_table().metas) {
    if (m.family == "T5")
      ++n.closure;
    else if (m.family == "T7")
      ++n.bad_triple;
    else
      ++n.residual_seed;
  }
  return n;
}

std::vector<RowMeta> all_topstar_rows(const TopstarBranch& branch) {
  std::vector<RowMeta> out;
  eager_metas(branch, out);
  const auto& lazy = lazy_table().metas;
  out.insert(out.end(), lazy.begin(), lazy.end());
  return out;
}

std::vector<std::string> violated_topstar_families(const TopstarBranch& branch, const std::vector<Rational>& x) {
  std::set<std::string> fams;
  std::vector<RowMeta> eager;
  eager_metas(branch, eager);
  for (const auto& m : eager) {
    const IntRow r = int_row(m.family, m.params);
    Rational lhs = 0;
    for (const auto& [j, a] : r.coeffs) lhs += Rational(a) * x[static_cast<std::size_t>(j)];
    if (lhs > r.rhs) fams.insert(m.family);
  }
  const LazyTable& table = lazy_table();
  for (const auto& r : table.rows) {
    Rational lhs = 0;
    for (int k = 0; k < r.n; ++k)
      lhs += Rational(r.coef[static_cast<std::size_t>(k)]) * x[static_cast<std::size_t>(r.cols[static_cast<std::size_t>(k)])];
    if (lhs > r.rhs) fams.insert(table.metas[r.meta_index].family);
  }
  return {fams.begin(), fams.end()};
}

TopstarBranchResult run_topstar_branch(const TopstarBranch& branch) {
  register_topstar_generator();
  TopstarBranchResult res;
  res.branch = branch;
  RationalSystem sys = build_relaxation(branch);
  const TopstarSeparator sep;
  LpOutcome out = solve_with_certificate(sys, &sep);
  res.status = out.status;
  res.iterations = out.iterations;
  res.generated_rows = out.generated_rows;
  res.materialized_rows = sys.row_count();
  if (out.status != LpStatus::Certified) return res;
  out.certificate.label = branch.id();
  res.certificate = std::move(out.certificate);
  const VerifyResult v = verify_certificate(sys, res.certificate);
  res.verified = v.ok;
  res.gap = v.gap;
  res.rows_regenerated = true;
  for (const auto& [id, num] : res.certificate.rows)
    if (!regenerate_and_match(sys, id)) res.rows_regenerated = false;
  return res;
}

TopstarBranchResult verify_topstar_certificate(const TopstarBranch& branch, const FarkasCertificate& cert) {
  TopstarBranchResult res;
  res.branch = branch;
  res.certificate = cert;
  if (!branch.valid() || cert.infeasibility || cert.label != branch.id()) return res;
  RationalSystem sys = empty_system();
  res.rows_regenerated = true;
  for (const auto& [id, num] : cert.rows) {
    try {
      const RowMeta m = parse_topstar_row_id(id);
      if (!belongs_to_branch(m, branch) || sys.has_row(id)) {
        res.rows_regenerated = false;
        continue;
      }
      sys.add_row(topstar_row(m));
    } catch (const std::invalid_argument&) {
      res.rows_regenerated = false;
    }
  }
  if (!res.rows_regenerated) return res;
  const VerifyResult v = verify_certificate(sys, cert);
  res.verified = v.ok;
  res.gap = v.gap;
  res.materialized_rows = sys.row_count();
  return res;
}

TopstarReport run_all_topstar(int workers) { return run_topstar_branches(topstar_branches(), workers); }

TopstarReport run_topstar_branches(const std::vector<TopstarBranch>& branches, int workers) {
  lazy_table();
  register_topstar_generator();
  TopstarReport rep;
  rep.branches.resize(branches.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= branches.size()) return;
      try {
        rep.branches[i] = run_topstar_branch(branches[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::max(1, workers); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  rep.all_ok = !rep.branches.empty();
  bool first = true;
  for (const auto& b : rep.branches) {
    rep.all_ok = rep.all_ok && b.ok();
    if (first || b.gap < rep.min_gap) rep.min_gap = b.gap;
    first = false;
  }
  return rep;
}

}  // namespace emc4
