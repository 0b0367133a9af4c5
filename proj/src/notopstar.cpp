#include "emc4/notopstar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "emc4/ferrers_audit.hpp"

namespace emc4 {

namespace {

constexpr int kCells = 256;

int cell_of(int a, int b, int c, int d) { return a + 4 * b + 16 * c + 64 * d; }
int coord(int cell, int i) { return (cell >> (2 * i)) & 3; }

const std::vector<std::array<int, 3>>& perms3() {
  static const std::vector<std::array<int, 3>> p = [] {
    std::vector<std::array<int, 3>> out;
    std::array<int, 3> a{0, 1, 2};
    do out.push_back(a);
    while (std::next_permutation(a.begin(), a.end()));
    return out;
  }();
  return p;
}

Clause make_clause(int x, int y, int z) {
  std::array<int, 3> v{x, y, z};
  std::sort(v.begin(), v.end());
  return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]), static_cast<std::uint8_t>(v[2])};
}

CellMask down_closure_mask(const CellMask& s) {
  CellMask out;
  const auto& dm = down_masks4();
  for (std::size_t i = s._Find_first(); i < kCells; i = s._Find_next(i)) out |= dm[i];
  return out;
}

CellMask up_closure_mask(const CellMask& s) {
  CellMask out;
  const auto& um = up_masks4();
  for (std::size_t i = s._Find_first(); i < kCells; i = s._Find_next(i)) out |= um[i];
  return out;
}

bool is_up_mask(const CellMask& m) { return up_closure_mask(m) == m; }

struct MaskLess {
  bool operator()(const CellMask& a, const CellMask& b) const {
    for (int w = kCells - 1; w >= 0; --w)
      if (a[static_cast<std::size_t>(w)] != b[static_cast<std::size_t>(w)]) return b[static_cast<std::size_t>(w)];
    return false;
  }
};

}  // namespace

CellMask clause_mask(const Clause& c) {
  CellMask m;
  for (auto x : c) m.set(x);
  return m;
}

const std::array<int, 4>& unit_top_cells() {
  static const std::array<int, 4> c = {cell_of(3, 1, 1, 1), cell_of(1, 3, 1, 1), cell_of(1, 1, 3, 1),
                                       cell_of(1, 1, 1, 3)};
  return c;
}

const CellMask& upper_cube_mask() {
  static const CellMask m = up_masks4()[static_cast<std::size_t>(cell_of(1, 1, 1, 1))];
  return m;
}

const std::vector<Clause>& upper_matching_clauses() {
  static const std::vector<Clause> list = [] {
    std::vector<Clause> out;
    for (const auto& p1 : perms3())
      for (const auto& p2 : perms3())
        for (const auto& p3 : perms3()) {
          std::array<int, 3> q{};
          for (int t = 0; t < 3; ++t) q[static_cast<std::size_t>(t)] = cell_of(t + 1, p1[t] + 1, p2[t] + 1, p3[t] + 1);
          out.push_back(make_clause(q[0], q[1], q[2]));
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }();
  return list;
}

namespace {

std::array<std::vector<int>, 4> available_values(const SupportedTrace& h, const Seed& seed) {
  std::array<std::vector<int>, 4> avail;
  for (int c = 0; c < 4; ++c) {
    const int used = h.value_in_column(c);
    for (int v = 0; v < 4; ++v) {
      if (v == used) continue;
      if (c == seed.column && v == seed.value) continue;
      avail[static_cast<std::size_t>(c)].push_back(v);
    }
  }
  return avail;
}

std::vector<std::array<int, 3>> three_subsets(const std::vector<int>& vals) {
  std::vector<std::array<int, 3>> out;
  const std::size_t n = vals.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) out.push_back({vals[a], vals[b], vals[c]});
  return out;
}

}  // namespace

std::vector<Seed> productive_seeds(const SupportedTrace& h) {
  std::vector<Seed> out;
  for (int j = 0; j < 4; ++j)
    for (int u = 0; u < 2; ++u) {
      if (h.value_in_column(j) == u) continue;
      const Seed s{j, u};
      const auto avail = available_values(h, s);
      bool ok = true;
      for (const auto& a : avail) ok = ok && a.size() >= 3;
      if (ok) out.push_back(s);
    }
  return out;
}

std::vector<Clause> residual_seed_clauses(const SupportedTrace& h, const Seed& seed) {
  std::vector<Clause> out;
  if (h.value_in_column(seed.column) == seed.value) return out;
  const auto avail = available_values(h, seed);
  for (const auto& a : avail)
    if (a.size() < 3) return out;
  const auto s0 = three_subsets(avail[0]), s1 = three_subsets(avail[1]);
  const auto s2 = three_subsets(avail[2]), s3 = three_subsets(avail[3]);
  for (const auto& t0 : s0)
    for (const auto& t1 : s1)
      for (const auto& t2 : s2)
        for (const auto& t3 : s3)
          for (const auto& p1 : perms3())
            for (const auto& p2 : perms3())
              for (const auto& p3 : perms3()) {
                std::array<int, 3> q{};
                for (int k = 0; k < 3; ++k)
                  q[static_cast<std::size_t>(k)] = cell_of(t0[static_cast<std::size_t>(k)], t1[static_cast<std::size_t>(p1[k])],
                                                           t2[static_cast<std::size_t>(p2[k])], t3[static_cast<std::size_t>(p3[k])]);
                out.push_back(make_clause(q[0], q[1], q[2]));
              }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Clause> residual_seed_clauses(const SupportedTrace& h) {
  std::vector<Clause> out;
  for (int j = 0; j < 4; ++j)
    for (int u = 0; u < 2; ++u) {
      auto part = residual_seed_clauses(h, Seed{j, u});
      out.insert(out.end(), part.begin(), part.end());
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

HittingInstance trace_instance(const std::vector<SupportedTrace>& present, const CellMask& extra_forbidden,
                               int upper_blocker_floor) {
  HittingInstance inst;
  inst.upper_blocker_floor = upper_blocker_floor;
  CellMask forbidden = extra_forbidden;
  for (int c : unit_top_cells()) forbidden.set(static_cast<std::size_t>(c));
  std::set<Clause> clauses(upper_matching_clauses().begin(), upper_matching_clauses().end());
  for (const auto& h : present) {
    forbidden |= h.extensions();
    for (const auto& c : residual_seed_clauses(h)) clauses.insert(c);
  }
  inst.forbidden = down_closure_mask(forbidden);
  for (const auto& c : clauses) inst.clauses.push_back(clause_mask(c));
  return inst;
}

bool satisfies_instance(const HittingInstance& inst, const CellMask& m) {
  if (!is_up_mask(m)) return false;
  if ((m & inst.forbidden).any()) return false;
  if (inst.upper_constraints) {
    for (int c : unit_top_cells())
      if (m.test(static_cast<std::size_t>(c))) return false;
    for (const auto& c : upper_matching_clauses())
      if ((clause_mask(c) & m).none()) return false;
  }
  for (const auto& c : inst.clauses)
    if ((c & m).none()) return false;
  return true;
}

namespace {

class HittingSearch {
 public:
  HittingSearch(const HittingInstance& inst, int limit) : floor_(inst.upper_blocker_floor) {
    best_ = limit + 1;
    CellMask f = inst.forbidden;
    std::vector<CellMask> raw = inst.clauses;
    if (inst.upper_constraints) {
      for (int c : unit_top_cells()) f.set(static_cast<std::size_t>(c));
      for (const auto& c : upper_matching_clauses()) raw.push_back(clause_mask(c));
    }
    forbidden_ = down_closure_mask(f);
    std::set<CellMask, MaskLess> uniq;
    for (const auto& c : raw) {
      const CellMask adm = c & ~forbidden_;
      if (adm.none()) {
        infeasible_ = true;
        return;
      }
      uniq.insert(adm);
    }
    std::vector<CellMask> list(uniq.begin(), uniq.end());
    // Drop clause A when some other clause B lies inside down(A): an up-set
    // hitting B then hits A.
    std::vector<CellMask> downs(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) downs[i] = down_closure_mask(list[i]);
    std::vector<char> keep(list.size(), 1);
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = 0; b < list.size(); ++b) {
        if (a == b || !keep[b]) continue;
        if ((list[b] & ~downs[a]).none()) {
          keep[a] = 0;
          break;
        }
      }
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!keep[i]) continue;
      clauses_.push_back(list[i]);
      std::vector<int> cells;
      for (std::size_t x = list[i]._Find_first(); x < kCells; x = list[i]._Find_next(x)) cells.push_back(static_cast<int>(x));
      cells_.push_back(cells);
    }
  }

  HittingResult run() {
    HittingResult r;
    r.limit = best_ - 1;
    if (!infeasible_) dfs(CellMask{}, forbidden_);
    r.nodes = nodes_;
    if (found_) {
      r.feasible = true;
      r.optimum = best_;
      r.witness = witness_;
    }
    return r;
  }

 private:
  void dfs(const CellMask& m, const CellMask& e) {
    ++nodes_;
    const auto& um = up_masks4();
    const CellMask& upper = upper_cube_mask();
    const int size = static_cast<int>(m.count());
    const int in_u = static_cast<int>((m & upper).count());
    const int base_u = size - in_u + std::max(in_u, floor_);

    int best_clause = -1;
    int best_count = 4;
    int extra_all = 0, extra_outside = 0;
    for (std::size_t k = 0; k < clauses_.size(); ++k) {
      if ((clauses_[k] & m).any()) continue;
      int count = 0, min_all = kCells, min_out = kCells;
      for (int x : cells_[k]) {
        if (e.test(static_cast<std::size_t>(x))) continue;
        ++count;
        const CellMask add = um[static_cast<std::size_t>(x)] & ~m;
        min_all = std::min(min_all, static_cast<int>(add.count()));
        min_out = std::min(min_out, static_cast<int>((add & ~upper).count()));
      }
      if (count == 0) return;
      extra_all = std::max(extra_all, min_all);
      extra_outside = std::max(extra_outside, min_out);
      if (count < best_count) {
        best_count = count;
        best_clause = static_cast<int>(k);
      }
    }
    if (best_clause < 0) {
      if (size < best_) {
        best_ = size;
        witness_ = m;
        found_ = true;
      }
      return;
    }
    const int lb = std::max(size + extra_all, base_u + extra_outside);
    if (lb >= best_) return;

    std::vector<std::pair<int, int>> order;
    for (int x : cells_[static_cast<std::size_t>(best_clause)])
      if (!e.test(static_cast<std::size_t>(x)))
        order.push_back({static_cast<int>((um[static_cast<std::size_t>(x)] & ~m).count()), x});
    std::sort(order.begin(), order.end());
    CellMask excl = e;
    const auto& dm = down_masks4();
    for (const auto& [cost, x] : order) {
      if (!excl.test(static_cast<std::size_t>(x))) dfs(m | um[static_cast<std::size_t>(x)], excl);
      excl |= dm[static_cast<std::size_t>(x)];
    }
  }

  int floor_ = 0;
  int best_ = kCells + 1;
  bool found_ = false;
  bool infeasible_ = false;
  long long nodes_ = 0;
  CellMask forbidden_;
  CellMask witness_;
  std::vector<CellMask> clauses_;
  std::vector<std::vector<int>> cells_;
};

}  // namespace

HittingResult minimize_missing(const HittingInstance& inst, int limit) {
  HittingSearch s(inst, limit);
  return s.run();
}

UpperBlockerResult upper_blocker_minimum(const CellMask& required_present) {
  // Position p = a + 3b + 9c over {1,2,3}^3 (coordinates 0..2); height h means
  // cells (a,b,c,1..h) are present.
  UpperBlockerResult res;
  CellMask need = required_present & upper_cube_mask();
  for (int c : unit_top_cells()) need.set(static_cast<std::size_t>(c));
  std::array<int, 27> min_h{};
  for (std::size_t x = need._Find_first(); x < kCells; x = need._Find_next(x)) {
    const int xi = static_cast<int>(x);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          if (a + 1 <= coord(xi, 0) && b + 1 <= coord(xi, 1) && c + 1 <= coord(xi, 2)) {
            auto& mh = min_h[static_cast<std::size_t>(a + 3 * b + 9 * c)];
            mh = std::max(mh, coord(xi, 3));
          }
  }
  std::vector<std::vector<CellMask>> by_cell(kCells);
  for (const auto& c : upper_matching_clauses()) {
    const CellMask cm = clause_mask(c);
    for (auto x : c) by_cell[x].push_back(cm);
  }
  std::array<int, 27> h{};
  CellMask present;
  int best = -1;
  CellMask best_mask;
  long long leaves = 0;

  auto cell_at = [](int p, int level) { return cell_of(p % 3 + 1, (p / 3) % 3 + 1, p / 9 + 1, level); };
  std::function<void(int, int)> rec = [&](int p, int size) {
    if (p == 27) {
      ++leaves;
      if (size > best) {
        best = size;
        best_mask = present;
      }
      return;
    }
    const int a = p % 3, b = (p / 3) % 3, c = p / 9;
    int cap = 3;
    if (a > 0) cap = std::min(cap, h[static_cast<std::size_t>(p - 1)]);
    if (b > 0) cap = std::min(cap, h[static_cast<std::size_t>(p - 3)]);
    if (c > 0) cap = std::min(cap, h[static_cast<std::size_t>(p - 9)]);
    if (size + cap * (27 - p) <= best) return;
    const int lo = min_h[static_cast<std::size_t>(p)];
    if (lo > cap) return;
    // Add cells level by level; stop as soon as an upper 3-matching appears.
    int ok_to = 0;
    for (int level = 1; level <= cap; ++level) {
      const int x = cell_at(p, level);
      present.set(static_cast<std::size_t>(x));
      bool bad = false;
      for (const auto& cm : by_cell[static_cast<std::size_t>(x)])
        if ((cm & ~present).none()) {
          bad = true;
          break;
        }
      if (bad) {
        present.reset(static_cast<std::size_t>(x));
        break;
      }
      ok_to = level;
    }
    for (int level = ok_to; level >= lo; --level) {
      h[static_cast<std::size_t>(p)] = level;
      rec(p + 1, size + level);
      if (level >= 1) present.reset(static_cast<std::size_t>(cell_at(p, level)));
    }
    for (int level = lo - 1; level >= 1; --level) present.reset(static_cast<std::size_t>(cell_at(p, level)));
    h[static_cast<std::size_t>(p)] = 0;
  };
  rec(0, 0);
  res.candidates = leaves;
  res.max_present = best;
  res.min_blocker = best < 0 ? -1 : 81 - best;
  res.witness_present = best_mask;
  return res;
}

SupportedTrace TraceOrbit::representative() const {
  std::vector<int> support = kind == 2 ? std::vector<int>{0, 1} : std::vector<int>{0, 1, 2};
  int idx = 0;
  for (int k = static_cast<int>(values.size()) - 1; k >= 0; --k) idx = idx * 4 + values[static_cast<std::size_t>(k)];
  return make_trace(support, idx);
}

std::string TraceOrbit::key() const {
  std::ostringstream os;
  os << (kind == 2 ? "pair:" : "triple:");
  for (int v : values) os << v;
  return os.str();
}

TraceOrbit orbit_of(const SupportedTrace& h) {
  TraceOrbit o;
  o.kind = h.size();
  for (int k = 0; k < h.size(); ++k) o.values.push_back(h.values[static_cast<std::size_t>(k)]);
  std::sort(o.values.begin(), o.values.end());
  return o;
}

std::vector<TraceOrbit> trace_orbits() {
  std::map<std::string, TraceOrbit> by_key;
  std::vector<std::string> order;
  for (const auto* supports : {&pair_supports(), &triple_supports()})
    for (const auto& sup : *supports) {
      const int n = static_cast<int>(sup.size()) == 2 ? 16 : 64;
      for (int v = 0; v < n; ++v) {
        TraceOrbit o = orbit_of(make_trace(sup, v));
        auto [it, inserted] = by_key.emplace(o.key(), o);
        if (inserted) order.push_back(o.key());
        ++it->second.size;
      }
    }
  std::vector<TraceOrbit> out;
  for (const auto& k : order) out.push_back(by_key.at(k));
  std::stable_sort(out.begin(), out.end(), [](const TraceOrbit& a, const TraceOrbit& b) {
    return a.kind != b.kind ? a.kind < b.kind : a.values < b.values;
  });
  return out;
}

std::map<std::string, HittingResult> single_trace_minima(int upper_blocker_floor, long long* total_nodes) {
  std::map<std::string, HittingResult> out;
  for (const auto& o : trace_orbits()) {
    auto r = minimize_missing(trace_instance({o.representative()}, {}, upper_blocker_floor));
    if (total_nodes) *total_nodes += r.nodes;
    out.emplace(o.key(), r);
  }
  return out;
}

const std::vector<int>& reference_p() {
  static const std::vector<int> p = [] {
    std::vector<int> v(31, 0);
    for (int m = 60; m <= 63; ++m) v[static_cast<std::size_t>(m - 33)] = 1;
    return v;
  }();
  return p;
}

const std::vector<int>& reference_t() {
  static const std::vector<int> t = [] {
    std::vector<int> v(31);
    for (int m = 33; m <= 63; ++m) {
      int val = 0;
      if (m >= 34) val = 1;
      if (m >= 36) val = 4;
      if (m >= 42) val = 7;
      if (m >= 48) val = 25;
      if (m >= 50) val = 26;
      if (m >= 56) val = 29;
      v[static_cast<std::size_t>(m - 33)] = val;
    }
    return v;
  }();
  return t;
}

ThresholdTable combine_thresholds(const std::map<std::string, int>& minima) {
  ThresholdTable tab;
  tab.minima = minima;
  auto mu = [&](const SupportedTrace& h) {
    auto it = minima.find(orbit_of(h).key());
    if (it == minima.end()) throw std::invalid_argument("missing orbit minimum " + orbit_of(h).key());
    return it->second;
  };
  tab.inequality_holds = true;
  for (int m = 33; m <= 63; ++m) {
    std::uint16_t pair_allowed = 0;
    for (int v = 0; v < 16; ++v)
      if (mu(make_trace({0, 1}, v)) <= m) pair_allowed = static_cast<std::uint16_t>(pair_allowed | (1u << v));
    std::uint64_t triple_allowed = 0;
    for (int v = 0; v < 64; ++v)
      if (mu(make_trace({0, 1, 2}, v)) <= m) triple_allowed |= std::uint64_t{1} << v;
    const int p = best_legal_pair(pair_allowed).max_size;
    const int t = best_legal_triple(triple_allowed).max_size;
    tab.p.push_back(p);
    tab.t.push_back(t);
    if (300LL * 4 * t + 144LL * 6 * p > 625LL * m) tab.inequality_holds = false;
  }
  tab.matches_expected = tab.p == reference_p() && tab.t == reference_t();
  tab.within_expected = true;
  for (int m = 33; m <= 63; ++m) {
    const auto k = static_cast<std::size_t>(m - 33);
    if (tab.p[k] != reference_p()[k] || tab.t[k] != reference_t()[k]) tab.mismatched_m.push_back(m);
    if (tab.p[k] > reference_p()[k] || tab.t[k] > reference_t()[k]) tab.within_expected = false;
  }
  return tab;
}

std::vector<SupportedTrace> pattern_traces(const std::string& name) {
  std::vector<SupportedTrace> out;
  if (name == "pair_square") {
    for (int v = 0; v < 16; ++v)
      if (v % 4 <= 1 && v / 4 <= 1) out.push_back(make_trace({0, 1}, v));
    return out;
  }
  std::array<int, 16> heights{};
  if (name == "slab_a") {
    for (int ab = 0; ab < 16; ++ab) heights[static_cast<std::size_t>(ab)] = ab % 4 <= 1 ? 4 : 0;
  } else if (name == "slab_b") {
    for (int ab = 0; ab < 16; ++ab) heights[static_cast<std::size_t>(ab)] = ab / 4 <= 1 ? 4 : 0;
  } else if (name == "slab_c") {
    heights.fill(2);
  } else if (name == "mixed") {
    const int h[4][4] = {{4, 4, 2, 2}, {4, 4, 2, 2}, {2, 2, 0, 0}, {2, 2, 0, 0}};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) heights[static_cast<std::size_t>(a + 4 * b)] = h[a][b];
  } else {
    throw std::invalid_argument("unknown pattern " + name);
  }
  for (int ab = 0; ab < 16; ++ab)
    for (int c = 0; c < heights[static_cast<std::size_t>(ab)]; ++c) out.push_back(make_trace({0, 1, 2}, ab + 16 * c));
  return out;
}

CellMask rectangle(int i, int j) {
  if (i == j || i < 0 || j < 0 || i > 3 || j > 3) throw std::invalid_argument("bad rectangle");
  CellMask m;
  for (int x = 0; x < kCells; ++x)
    if (coord(x, i) >= 2 && coord(x, j) >= 2) m.set(static_cast<std::size_t>(x));
  return m;
}

std::vector<PatternCheck> critical_pattern_checks(int upper_blocker_floor) {
  struct Spec {
    std::string pattern;
    int ri, rj;  // rectangle forced by the pattern, -1 if none
    int minimum;
  };
  // Triple patterns live on support {0,1,2}; the omitted coordinate is 3.
  const std::vector<Spec> specs = {
      {"pair_square", 0, 1, 64}, {"slab_a", 0, 3, 64}, {"slab_b", 1, 3, 64}, {"slab_c", 2, 3, 64}, {"mixed", -1, -1, 80}};
  std::vector<PatternCheck> out;
  for (const auto& s : specs) {
    const auto traces = pattern_traces(s.pattern);
    PatternCheck mn;
    mn.name = s.pattern + ":minimum";
    mn.kind = "minimum";
    mn.expected = s.minimum;
    mn.result = minimize_missing(trace_instance(traces, {}, upper_blocker_floor));
    mn.ok = mn.result.feasible && mn.result.optimum == s.minimum;
    out.push_back(mn);
    if (s.ri < 0) continue;
    int corner[4] = {0, 0, 0, 0};
    corner[s.ri] = 2;
    corner[s.rj] = 2;
    CellMask excluded;
    excluded.set(static_cast<std::size_t>(cell_of(corner[0], corner[1], corner[2], corner[3])));
    PatternCheck fc;
    fc.name = s.pattern + ":not_rectangle";
    fc.kind = "forcing";
    fc.expected = 66;
    fc.result = minimize_missing(trace_instance(traces, excluded, upper_blocker_floor), 66);
    fc.ok = !fc.result.feasible;
    out.push_back(fc);
  }
  return out;
}

CellMask allowed_trace_values(const std::vector<int>& support, const CellMask& m) {
  if (!is_up_mask(m)) throw std::invalid_argument("M must be an up-set");
  CellMask allowed;
  const int n = support.size() == 2 ? 16 : 64;
  for (int v = 0; v < n; ++v) {
    const SupportedTrace h = make_trace(support, v);
    if ((h.extensions() & m).any()) continue;
    bool hit = true;
    for (const auto& c : residual_seed_clauses(h))
      if ((clause_mask(c) & m).none()) {
        hit = false;
        break;
      }
    if (hit) allowed.set(static_cast<std::size_t>(v));
  }
  return allowed;
}

int legal_downsets_with_closure(const std::vector<int>& support, const CellMask& m) {
  const CellMask allowed = allowed_trace_values(support, m);
  if (support.size() == 2) return best_legal_pair(static_cast<std::uint16_t>(allowed.to_ulong())).max_size;
  return best_legal_triple(allowed.to_ullong()).max_size;
}

std::vector<RectangleCase> rectangle_extension_audit() {
  std::vector<RectangleCase> out;
  auto addable = [&](const CellMask& m) {
    // Cells outside m whose strict up-set lies in m.
    std::vector<int> cells;
    for (int x = 0; x < kCells; ++x) {
      if (m.test(static_cast<std::size_t>(x))) continue;
      CellMask up = up_masks4()[static_cast<std::size_t>(x)];
      up.reset(static_cast<std::size_t>(x));
      if ((up & ~m).none()) cells.push_back(x);
    }
    return cells;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const CellMask r = rectangle(i, j);
      std::set<CellMask, MaskLess> seen;
      std::vector<CellMask> ext{r};
      seen.insert(r);
      for (int x : addable(r)) {
        CellMask m1 = r;
        m1.set(static_cast<std::size_t>(x));
        if (seen.insert(m1).second) ext.push_back(m1);
        for (int y : addable(m1)) {
          CellMask m2 = m1;
          m2.set(static_cast<std::size_t>(y));
          if (seen.insert(m2).second) ext.push_back(m2);
        }
      }
      for (const auto& m : ext) {
        RectangleCase c;
        c.i = i;
        c.j = j;
        c.m = m;
        c.size = static_cast<int>(m.count());
        for (const auto& s : triple_supports()) c.t3 += legal_downsets_with_closure(s, m);
        for (const auto& s : pair_supports()) c.p2 += legal_downsets_with_closure(s, m);
        c.margin = 300LL * c.t3 + 144LL * c.p2 - 625LL * c.size;
        out.push_back(c);
      }
    }
  return out;
}

NoTopstarReport assemble_no_topstar() {
  NoTopstarReport rep;
  rep.blocker = upper_blocker_minimum();
  rep.blocker_ok = rep.blocker.max_present == 48 && rep.blocker.min_blocker == 33;
  const int floor = rep.blocker_ok ? rep.blocker.min_blocker : 0;

  rep.minima = single_trace_minima(floor);
  std::map<std::string, int> mu;
  for (const auto& [k, r] : rep.minima) mu[k] = r.feasible ? r.optimum : 1000;
  rep.trace_threshold_checks = static_cast<int>(rep.minima.size());
  rep.table = combine_thresholds(mu);

  rep.patterns = critical_pattern_checks(floor);
  rep.critical_pattern_checks = static_cast<int>(rep.patterns.size());

  rep.rectangles = rectangle_extension_audit();
  rep.rectangle_cases = static_cast<int>(rep.rectangles.size());
  rep.worst_margin = rep.rectangles.empty() ? 0 : rep.rectangles.front().margin;
  for (const auto& c : rep.rectangles) rep.worst_margin = std::max(rep.worst_margin, c.margin);

  rep.c3_nonextremal_ok = 300 * 124 + 144 * 18 <= 625 * 64;
  rep.universal_ok = 300 * 128 + 144 * 24 < 625 * 67;
  rep.tight_case_ok = rep.table.t.size() == 31 && rep.table.t[15] == 25 && 300 * 4 * 25 == 625 * 48;

  bool patterns_ok = rep.critical_pattern_checks == 9;
  for (const auto& p : rep.patterns) patterns_ok = patterns_ok && p.ok;
  bool floor_ok = true;
  for (const auto& [k, v] : mu) floor_ok = floor_ok && v >= 33;
  rep.ok = rep.blocker_ok && rep.trace_threshold_checks == 30 && floor_ok && rep.table.inequality_holds && patterns_ok && rep.rectangle_cases == 72 && rep.worst_margin < 0 &&
           rep.c3_nonextremal_ok && rep.universal_ok;
  return rep;
}

}  // namespace emc4
