#include "emc4/board15.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace emc4 {

namespace {

constexpr int kPoints = 15;

std::uint64_t perm_key(const Perm15& g) {
  std::uint64_t k = 0;
  for (int p = 0; p < kPoints; ++p) k |= static_cast<std::uint64_t>(g[p]) << (4 * p);
  return k;
}

Perm15 identity15() {
  Perm15 g{};
  for (int p = 0; p < kPoints; ++p) g[p] = static_cast<std::uint8_t>(p);
  return g;
}

// (a * b)(p) = a(b(p))
Perm15 compose(const Perm15& a, const Perm15& b) {
  Perm15 g{};
  for (int p = 0; p < kPoints; ++p) g[p] = a[b[p]];
  return g;
}

Perm15 inverse(const Perm15& a) {
  Perm15 g{};
  for (int p = 0; p < kPoints; ++p) g[a[p]] = static_cast<std::uint8_t>(p);
  return g;
}

Perm15 swap_points(int a, int b) {
  Perm15 g = identity15();
  std::swap(g[a], g[b]);
  return g;
}

int point_of(int column, int j) { return 3 + 4 * column + j; }

TraceKind kind_of(PointSet h) { return std::popcount(static_cast<unsigned>(h)) == 3 ? TraceKind::Triple : TraceKind::Pair; }

char kind_char(TraceKind k) { return k == TraceKind::Triple ? 't' : 'p'; }

void partitions_rec(const LocalBoard& board, PointSet rest, std::vector<PointSet>& cur,
                    std::vector<std::vector<PointSet>>& out) {
  if (rest == 0) {
    out.push_back(cur);
    return;
  }
  const unsigned low = rest & (~rest + 1u);
  const unsigned others = rest & ~low;
  // Three more points from `others`, enumerated as increasing masks.
  for (unsigned a = others; a; a &= a - 1) {
    const unsigned pa = a & (~a + 1u);
    for (unsigned b = a & (a - 1); b; b &= b - 1) {
      const unsigned pb = b & (~b + 1u);
      for (unsigned c = b & (b - 1); c; c &= c - 1) {
        const unsigned pc = c & (~c + 1u);
        const auto quad = static_cast<PointSet>(low | pa | pb | pc);
        if (!board.is_fixed(quad) && !board.is_missing_variable(quad)) continue;
        cur.push_back(quad);
        partitions_rec(board, static_cast<PointSet>(rest & ~quad), cur, out);
        cur.pop_back();
      }
    }
  }
}

struct Board15Data {
  SymmetryGroup15 group;
  LabelledRows15 rows;
  Quotient15 quotient;
};

const Board15Data& board15_data() {
  static const Board15Data data = [] {
    Board15Data d;
    d.group = symmetry_group15();
    d.rows = regenerate_labelled_rows15();
    d.quotient = quotient_rows15(d.group, d.rows);
    return d;
  }();
  return data;
}

LinearRow make_quotient_row(const QuotientRow& row) {
  // Variables are laid out t0..t8, p0..p4, m0..m12.
  LinearRow r;
  r.id = quotient_row_id(row);
  const int trace = row.kind == TraceKind::Triple ? row.orbit : 9 + row.orbit;
  std::vector<std::pair<int, Rational>> coeffs{{trace, Rational(1)}};
  for (int m : row.missing) coeffs.emplace_back(14 + m, Rational(-1));
  r.coeffs = normalize_coeffs(std::move(coeffs));
  r.rhs = 0;
  r.tag = "residual";
  r.meta.generator = kBoard15Generator;
  r.meta.family = "R";
  r.meta.params = {row.kind == TraceKind::Triple ? 0 : 1, row.orbit};
  r.meta.params.insert(r.meta.params.end(), row.missing.begin(), row.missing.end());
  return r;
}

QuotientRow row_from_meta(const RowMeta& meta) {
  if (meta.generator != kBoard15Generator || meta.family != "R" || meta.params.size() < 2) {
    throw std::invalid_argument("not a 15-board quotient row");
  }
  QuotientRow row;
  if (meta.params[0] != 0 && meta.params[0] != 1) throw std::invalid_argument("bad trace kind");
  row.kind = meta.params[0] == 0 ? TraceKind::Triple : TraceKind::Pair;
  row.orbit = meta.params[1];
  row.missing.assign(meta.params.begin() + 2, meta.params.end());
  return row;
}

}  // namespace

const LocalBoard& board15() {
  static const LocalBoard b(3);
  return b;
}

PointSet apply(const Perm15& g, PointSet s) {
  unsigned out = 0;
  for (unsigned t = s; t; t &= t - 1) out |= 1u << g[std::countr_zero(t)];
  return static_cast<PointSet>(out);
}

SymmetryGroup15 symmetry_group15() {
  SymmetryGroup15 grp;
  grp.generators.push_back(swap_points(0, 1));
  grp.generators.push_back(swap_points(1, 2));
  for (int c = 0; c < 2; ++c) {
    Perm15 g = identity15();
    for (int j = 0; j < 4; ++j) std::swap(g[point_of(c, j)], g[point_of(c + 1, j)]);
    grp.generators.push_back(g);
  }
  for (int c = 0; c < 3; ++c) {
    grp.generators.push_back(swap_points(point_of(c, 0), point_of(c, 1)));
    grp.generators.push_back(swap_points(point_of(c, 2), point_of(c, 3)));
  }
  std::unordered_set<std::uint64_t> seen;
  grp.elements.push_back(identity15());
  seen.insert(perm_key(grp.elements[0]));
  for (std::size_t i = 0; i < grp.elements.size(); ++i) {
    for (const Perm15& s : grp.generators) {
      const Perm15 g = compose(s, grp.elements[i]);
      if (seen.insert(perm_key(g)).second) grp.elements.push_back(g);
    }
  }
  return grp;
}

GroupCheck check_group15(const SymmetryGroup15& group) {
  GroupCheck c;
  std::unordered_set<std::uint64_t> keys;
  for (const Perm15& g : group.elements) keys.insert(perm_key(g));
  c.order = keys.size() == group.elements.size() ? keys.size() : 0;
  c.closed = true;
  c.inverses = true;
  for (const Perm15& g : group.elements) {
    for (const Perm15& s : group.generators) c.closed = c.closed && keys.count(perm_key(compose(s, g))) && keys.count(perm_key(compose(g, s)));
    c.inverses = c.inverses && keys.count(perm_key(inverse(g)));
  }
  c.associative = true;
  for (const Perm15& a : group.generators) {
    for (const Perm15& b : group.generators) {
      for (const Perm15& d : group.generators) {
        c.associative = c.associative && compose(compose(a, b), d) == compose(a, compose(b, d));
      }
    }
  }
  const LocalBoard& board = board15();
  c.preserves_fixed = true;
  for (const Perm15& g : group.elements) {
    for (PointSet f : board.fixed_quads()) c.preserves_fixed = c.preserves_fixed && board.is_fixed(apply(g, f));
  }
  return c;
}

bool LabelledRows15::contains(const LabelledRow& row) const {
  return std::binary_search(residual.begin(), residual.end(), row);
}

std::vector<std::vector<PointSet>> residual_partitions(const LocalBoard& board, PointSet points) {
  std::vector<std::vector<PointSet>> out;
  if (std::popcount(static_cast<unsigned>(points)) % 4 != 0) return out;
  std::vector<PointSet> cur;
  partitions_rec(board, points, cur, out);
  return out;
}

LabelledRow witness_row(const Witness15& w) {
  const LocalBoard& board = board15();
  LabelledRow row;
  row.h = w.h;
  for (PointSet q : w.quads) {
    if (board.is_missing_variable(q)) row.vars.push_back(q);
  }
  std::sort(row.vars.begin(), row.vars.end());
  return row;
}

LabelledRow apply(const Perm15& g, const LabelledRow& row) {
  LabelledRow out;
  out.h = apply(g, row.h);
  for (PointSet q : row.vars) out.vars.push_back(apply(g, q));
  std::sort(out.vars.begin(), out.vars.end());
  return out;
}

LabelledRows15 regenerate_labelled_rows15() {
  const LocalBoard& board = board15();
  LabelledRows15 out;
  auto add = [&](PointSet h, int set_aside, PointSet rest) {
    for (const auto& parts : residual_partitions(board, rest)) {
      Witness15 w;
      w.h = h;
      w.set_aside = set_aside;
      std::copy(parts.begin(), parts.end(), w.quads.begin());
      out.witnesses.push_back(w);
      out.residual.push_back(witness_row(w));
    }
  };
  for (PointSet h : board.triple_variables()) add(h, -1, static_cast<PointSet>(board.all_points() & ~h));
  for (PointSet h : board.pair_variables()) {
    for (int a = 0; a < board.points(); ++a) {
      if (h & (1u << a)) continue;
      add(h, a, static_cast<PointSet>(board.all_points() & ~h & ~(1u << a)));
    }
  }
  std::sort(out.residual.begin(), out.residual.end());
  out.residual.erase(std::unique(out.residual.begin(), out.residual.end()), out.residual.end());
  for (const auto* traces : {&board.triple_variables(), &board.pair_variables()}) {
    for (PointSet h : *traces) {
      for (PointSet q : board.missing_variables()) {
        if ((h & q) == h) out.closure.emplace_back(h, q);
      }
    }
  }
  return out;
}

int Quotient15::missing_orbit_of(PointSet q) const {
  if (std::popcount(static_cast<unsigned>(q)) != 4 || orbit_by_mask.at(q) < 0) {
    throw std::invalid_argument("not a missing-quad variable");
  }
  return orbit_by_mask[q];
}

int Quotient15::trace_orbit_of(PointSet h) const {
  const int k = std::popcount(static_cast<unsigned>(h));
  if ((k != 2 && k != 3) || orbit_by_mask.at(h) < 0) throw std::invalid_argument("not a trace variable");
  return orbit_by_mask[h];
}

int Quotient15::index_of(const QuotientRow& row) const {
  const auto it = std::lower_bound(residual.begin(), residual.end(), row);
  if (it == residual.end() || *it != row) return -1;
  return static_cast<int>(it - residual.begin());
}

Quotient15 quotient_rows15(const SymmetryGroup15& group, const LabelledRows15& rows) {
  if (!check_group15(group).ok()) throw ProofError("15-board symmetry group check failed");
  const LocalBoard& board = board15();
  Quotient15 q;
  q.orbit_by_mask.assign(1u << kPoints, -1);
  auto build = [&](const std::vector<PointSet>& vars, std::vector<Orbit>& orbits) {
    for (PointSet s : vars) {
      if (q.orbit_by_mask[s] >= 0) continue;
      Orbit o;
      for (const Perm15& g : group.elements) o.members.push_back(apply(g, s));
      std::sort(o.members.begin(), o.members.end());
      o.members.erase(std::unique(o.members.begin(), o.members.end()), o.members.end());
      for (PointSet t : o.members) {
        if (q.orbit_by_mask[t] >= 0) throw ProofError("orbits overlap");
        q.orbit_by_mask[t] = static_cast<std::int16_t>(orbits.size());
      }
      orbits.push_back(std::move(o));
    }
  };
  build(board.missing_variables(), q.missing_orbits);
  build(board.triple_variables(), q.triple_orbits);
  build(board.pair_variables(), q.pair_orbits);
  for (const auto* vars : {&board.missing_variables(), &board.triple_variables(), &board.pair_variables()}) {
    for (PointSet s : *vars) {
      if (q.orbit_by_mask[s] < 0) throw ProofError("variable outside every orbit");
    }
  }

  std::map<QuotientRow, LabelledRow> first;
  for (const LabelledRow& row : rows.residual) {
    QuotientRow qr;
    qr.kind = kind_of(row.h);
    qr.orbit = q.trace_orbit_of(row.h);
    for (PointSet m : row.vars) qr.missing.push_back(q.missing_orbit_of(m));
    std::sort(qr.missing.begin(), qr.missing.end());
    first.emplace(std::move(qr), row);
  }
  for (auto& [qr, row] : first) {
    q.residual.push_back(qr);
    q.representatives.push_back(row);
  }
  std::set<QuotientClosureRow> closure;
  for (const auto& [h, m] : rows.closure) closure.insert({kind_of(h), q.trace_orbit_of(h), q.missing_orbit_of(m)});
  q.closure.assign(closure.begin(), closure.end());
  return q;
}

std::string orbit_variable(char kind, int orbit) { return std::string(1, kind) + std::to_string(orbit); }

std::string quotient_row_id(const QuotientRow& row) {
  std::string id = orbit_variable(kind_char(row.kind), row.orbit) + "<=";
  if (row.missing.empty()) return id + "0";
  for (std::size_t i = 0; i < row.missing.size(); ++i) {
    if (i) id += '+';
    id += orbit_variable('m', row.missing[i]);
  }
  return id;
}

QuotientRow parse_quotient_row_id(const std::string& id) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.size() > 3 || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw std::invalid_argument("bad quotient row id: " + id);
    }
    return std::stoi(s);
  };
  const auto sep = id.find("<=");
  if (sep == std::string::npos || sep < 2 || (id[0] != 't' && id[0] != 'p')) {
    throw std::invalid_argument("bad quotient row id: " + id);
  }
  QuotientRow row;
  row.kind = id[0] == 't' ? TraceKind::Triple : TraceKind::Pair;
  row.orbit = number(id.substr(1, sep - 1));
  const std::string rhs = id.substr(sep + 2);
  if (rhs != "0") {
    std::size_t pos = 0;
    while (true) {
      const auto next = rhs.find('+', pos);
      const std::string term = rhs.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      if (term.size() < 2 || term[0] != 'm') throw std::invalid_argument("bad quotient row id: " + id);
      row.missing.push_back(number(term.substr(1)));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
  }
  if (!std::is_sorted(row.missing.begin(), row.missing.end()) || quotient_row_id(row) != id) {
    throw std::invalid_argument("non-canonical quotient row id: " + id);
  }
  return row;
}

RationalSystem quotient_system15(const Quotient15& q) {
  RationalSystem sys;
  for (std::size_t o = 0; o < q.triple_orbits.size(); ++o) {
    sys.set_objective(sys.add_variable(orbit_variable('t', static_cast<int>(o))), Rational(300 * q.triple_orbits[o].size()));
  }
  for (std::size_t o = 0; o < q.pair_orbits.size(); ++o) {
    sys.set_objective(sys.add_variable(orbit_variable('p', static_cast<int>(o))), Rational(144 * q.pair_orbits[o].size()));
  }
  for (std::size_t o = 0; o < q.missing_orbits.size(); ++o) {
    sys.set_objective(sys.add_variable(orbit_variable('m', static_cast<int>(o))), Rational(-625 * q.missing_orbits[o].size()));
  }
  if (sys.variable_count() != 27) throw ProofError("15-board quotient must have 27 orbit variables");
  sys.set_bound(0);
  for (const QuotientRow& row : q.residual) sys.add_row(make_quotient_row(row));
  return sys;
}

void register_board15_generator() {
  static std::once_flag once;
  std::call_once(once, [] {
    register_row_generator(kBoard15Generator, [](const RowMeta& meta) {
      const QuotientRow row = row_from_meta(meta);
      if (board15_data().quotient.index_of(row) < 0) throw std::invalid_argument("not a regenerated quotient row");
      return make_quotient_row(row);
    });
  });
}

Domination15 verify_domination15(const Quotient15& q, const FarkasCertificate& cert) {
  Domination15 d;
  if (cert.label != "board15") {
    d.reason = "certificate label is not board15";
    return d;
  }
  if (cert.infeasibility) {
    d.reason = "expected a bound certificate";
    return d;
  }
  if (cert.denominator <= 0) {
    d.reason = "denominator must be positive";
    return d;
  }
  if (!cert.upper.empty()) {
    d.reason = "box multipliers are not part of a residual-cut dual";
    return d;
  }
  const std::size_t nt = q.triple_orbits.size(), np = q.pair_orbits.size(), nm = q.missing_orbits.size();
  std::vector<BigInt> trace(nt + np, 0), load(nm, 0);
  std::set<std::string> ids;
  for (const auto& [id, n] : cert.rows) {
    if (n < 0) {
      d.reason = "negative multiplier on " + id;
      return d;
    }
    if (!ids.insert(id).second) {
      d.reason = "repeated row " + id;
      return d;
    }
    QuotientRow row;
    try {
      row = parse_quotient_row_id(id);
    } catch (const std::invalid_argument&) {
      d.reason = "malformed row " + id;
      return d;
    }
    const std::size_t limit = row.kind == TraceKind::Triple ? nt : np;
    if (row.orbit < 0 || static_cast<std::size_t>(row.orbit) >= limit || q.index_of(row) < 0) {
      d.reason = "row is not a regenerated quotient residual row: " + id;
      return d;
    }
    if (n > 0) ++d.support;
    trace[(row.kind == TraceKind::Triple ? 0 : nt) + static_cast<std::size_t>(row.orbit)] += n;
    for (int m : row.missing) load[static_cast<std::size_t>(m)] += n;
  }
  bool first = true;
  auto slack = [&](const BigInt& s, int size) {
    const Rational r(s, cert.denominator * size);
    if (first || r < d.min_slack) d.min_slack = r;
    first = false;
    return s >= 0;
  };
  bool ok = true;
  for (std::size_t o = 0; o < nt; ++o) {
    const int size = q.triple_orbits[o].size();
    if (!slack(trace[o] - BigInt(300) * size * cert.denominator, size)) {
      ok = false;
      if (d.reason.empty()) d.reason = "triple orbit t" + std::to_string(o) + " below 300";
    }
  }
  for (std::size_t o = 0; o < np; ++o) {
    const int size = q.pair_orbits[o].size();
    if (!slack(trace[nt + o] - BigInt(144) * size * cert.denominator, size)) {
      ok = false;
      if (d.reason.empty()) d.reason = "pair orbit p" + std::to_string(o) + " below 144";
    }
  }
  for (std::size_t o = 0; o < nm; ++o) {
    const int size = q.missing_orbits[o].size();
    if (!slack(BigInt(625) * size * cert.denominator - load[o], size)) {
      ok = false;
      if (d.reason.empty()) d.reason = "missing orbit m" + std::to_string(o) + " load above 625";
    }
  }
  d.ok = ok;
  return d;
}

Lift15 lift_certificate15(const SymmetryGroup15& group, const LabelledRows15& rows, const Quotient15& q,
                          const FarkasCertificate& cert) {
  Lift15 out;
  if (cert.denominator <= 0 || !cert.upper.empty()) return out;
  const LocalBoard& board = board15();
  std::vector<BigInt> acc(1u << kPoints, 0);
  out.images_regenerated = true;
  for (const auto& [id, n] : cert.rows) {
    if (n < 0) return out;
    QuotientRow row;
    try {
      row = parse_quotient_row_id(id);
    } catch (const std::invalid_argument&) {
      return out;
    }
    const int idx = q.index_of(row);
    if (idx < 0) return out;
    const LabelledRow& rep = q.representatives[static_cast<std::size_t>(idx)];
    for (const Perm15& g : group.elements) {
      const LabelledRow img = apply(g, rep);
      if (!rows.contains(img)) out.images_regenerated = false;
      acc[img.h] += n;
      for (PointSet m : img.vars) acc[m] -= n;
    }
  }
  // Labelled coefficients are acc / (|G| D).
  const BigInt scale = BigInt(static_cast<long>(group.elements.size())) * cert.denominator;
  bool ok = out.images_regenerated;
  bool first = true;
  auto check = [&](const BigInt& s) {
    const Rational r(s, scale);
    if (first || r < out.min_slack) out.min_slack = r;
    first = false;
    ok = ok && s >= 0;
  };
  for (PointSet h : board.triple_variables()) check(acc[h] - 300 * scale);
  for (PointSet h : board.pair_variables()) check(acc[h] - 144 * scale);
  for (PointSet m : board.missing_variables()) check(625 * scale + acc[m]);
  out.ok = ok;
  return out;
}

namespace {

Board15Report audit(const Board15Data& data, const FarkasCertificate& cert) {
  const LocalBoard& board = board15();
  Board15Report r;
  r.missing_variables = board.missing_variables().size();
  r.triple_variables = board.triple_variables().size();
  r.pair_variables = board.pair_variables().size();
  r.witnesses = data.rows.witnesses.size();
  r.distinct_residual_rows = data.rows.residual.size();
  r.closure_rows = data.rows.closure.size();
  r.quotient_residual_rows = data.quotient.residual.size();
  r.quotient_closure_rows = data.quotient.closure.size();
  r.missing_orbits = data.quotient.missing_orbits.size();
  r.triple_orbits = data.quotient.triple_orbits.size();
  r.pair_orbits = data.quotient.pair_orbits.size();
  r.group = check_group15(data.group);
  r.counts_ok = r.missing_variables == 480 && r.triple_variables == 288 && r.pair_variables == 54 &&
                r.witnesses == 264402 && r.closure_rows == 2016 && r.quotient_residual_rows == 206 &&
                r.quotient_closure_rows == 33 && r.missing_orbits == 13 && r.triple_orbits == 9 && r.pair_orbits == 5;
  r.certificate = cert;
  r.layer = layer_assembly(3);

  register_board15_generator();
  const RationalSystem sys = quotient_system15(data.quotient);
  try {
    r.farkas = verify_certificate(sys, cert);
    r.rows_regenerated = true;
    for (const auto& [id, n] : cert.rows) r.rows_regenerated = r.rows_regenerated && regenerate_and_match(sys, id);
  } catch (const ProofError& e) {
    r.farkas.ok = false;
    r.farkas.reason = e.what();
    r.rows_regenerated = false;
  }
  r.domination = verify_domination15(data.quotient, cert);
  r.lift = lift_certificate15(data.group, data.rows, data.quotient, cert);
  return r;
}

}  // namespace

Board15Report run_board15() {
  const Board15Data& data = board15_data();
  RationalSystem sys = quotient_system15(data.quotient);
  const LpOutcome lp = solve_with_certificate(sys);
  FarkasCertificate cert = lp.certificate;
  cert.label = "board15";
  std::erase_if(cert.upper, [](const auto& u) { return u.second == 0; });
  Board15Report r = audit(data, cert);
  if (lp.status != LpStatus::Certified && r.domination.reason.empty()) r.domination.reason = "quotient LP has no dual";
  return r;
}

Board15Report verify_board15_certificate(const FarkasCertificate& cert) { return audit(board15_data(), cert); }

}  // namespace emc4
