#include "emc4/board11.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <set>
#include <stdexcept>

namespace emc4 {

namespace {

bool is_trace11(PointSet h) {
  const LocalBoard& b = board11();
  const int k = std::popcount(static_cast<unsigned>(h));
  return (h & ~b.all_points()) == 0 && ((k == 3 && b.spread(h) == 1) || (k == 2 && b.spread(h) == 0));
}

ResidualCut11 make_cut(PointSet h, PointSet q1, PointSet q2) {
  ResidualCut11 cut;
  cut.h = h;
  cut.quads = {std::min(q1, q2), std::max(q1, q2)};
  for (PointSet q : cut.quads) {
    if (board11().is_missing_variable(q)) cut.vars.push_back(q);
  }
  return cut;
}

LinearRow cut_row(const RationalSystem& sys, const ResidualCut11& cut) {
  LinearRow r;
  r.id = cut_id11(cut);
  std::vector<std::pair<int, Rational>> coeffs{{sys.variable_index(variable_name11(cut.h)), Rational(1)}};
  for (PointSet q : cut.vars) coeffs.emplace_back(sys.variable_index(variable_name11(q)), Rational(-1));
  r.coeffs = normalize_coeffs(std::move(coeffs));
  r.rhs = 0;
  r.tag = cut.infeasibility() ? "infeasibility" : "residual";
  r.meta.generator = kBoard11Generator;
  r.meta.family = "R";
  r.meta.params = {cut.h, cut.quads[0], cut.quads[1]};
  return r;
}

const RationalSystem& variables11() {
  static const RationalSystem sys = [] {
    const LocalBoard& b = board11();
    RationalSystem s;
    for (PointSet h : b.triple_variables()) s.set_objective(s.add_variable(variable_name11(h)), Rational(300));
    for (PointSet h : b.pair_variables()) s.set_objective(s.add_variable(variable_name11(h)), Rational(144));
    for (PointSet q : b.missing_variables()) s.set_objective(s.add_variable(variable_name11(q)), Rational(-625));
    s.set_bound(0);
    return s;
  }();
  return sys;
}

}  // namespace

const LocalBoard& board11() {
  static const LocalBoard b(2);
  return b;
}

bool check_cut11(const ResidualCut11& cut) {
  const LocalBoard& b = board11();
  if (!is_trace11(cut.h) || cut.quads[0] >= cut.quads[1]) return false;
  if ((cut.h & cut.quads[0]) || (cut.h & cut.quads[1]) || (cut.quads[0] & cut.quads[1])) return false;
  std::vector<PointSet> vars;
  for (PointSet q : cut.quads) {
    if (std::popcount(static_cast<unsigned>(q)) != 4 || (q & ~b.all_points())) return false;
    const bool fixed = b.is_fixed(q);
    const bool var = b.is_missing_variable(q);
    if (fixed == var) return false;  // neither marking, or both
    if (var) vars.push_back(q);
  }
  return vars == cut.vars;
}

std::vector<ResidualCut11> regenerate_residual_cuts11() {
  const LocalBoard& b = board11();
  std::vector<PointSet> allowed;
  for (PointSet q : point_subsets(b.points(), 4)) {
    if (b.is_fixed(q) || b.is_missing_variable(q)) allowed.push_back(q);
  }
  std::vector<ResidualCut11> cuts;
  for (const auto* traces : {&b.triple_variables(), &b.pair_variables()}) {
    for (PointSet h : *traces) {
      std::vector<PointSet> free;
      for (PointSet q : allowed) {
        if (!(q & h)) free.push_back(q);
      }
      for (std::size_t i = 0; i < free.size(); ++i) {
        for (std::size_t j = i + 1; j < free.size(); ++j) {
          if (!(free[i] & free[j])) cuts.push_back(make_cut(h, free[i], free[j]));
        }
      }
    }
  }
  return cuts;
}

std::string cut_id11(const ResidualCut11& cut) {
  const LocalBoard& b = board11();
  return b.label(cut.h) + "|" + b.label(cut.quads[0]) + "|" + b.label(cut.quads[1]);
}

ResidualCut11 parse_cut_id11(const std::string& id) {
  const auto a = id.find('|');
  const auto c = a == std::string::npos ? a : id.find('|', a + 1);
  if (c == std::string::npos || id.find('|', c + 1) != std::string::npos) {
    throw std::invalid_argument("bad cut id: " + id);
  }
  const LocalBoard& b = board11();
  const ResidualCut11 cut =
      make_cut(b.parse(id.substr(0, a)), b.parse(id.substr(a + 1, c - a - 1)), b.parse(id.substr(c + 1)));
  if (!check_cut11(cut) || cut_id11(cut) != id) throw std::invalid_argument("not a residual cut: " + id);
  return cut;
}

std::string variable_name11(PointSet s) {
  const int k = std::popcount(static_cast<unsigned>(s));
  const char kind = k == 4 ? 'm' : k == 3 ? 't' : 'p';
  return std::string(1, kind) + ":" + board11().label(s);
}

RationalSystem residual_system11() {
  RationalSystem sys = variables11();
  for (const ResidualCut11& cut : regenerate_residual_cuts11()) sys.add_row(cut_row(sys, cut));
  return sys;
}

void register_board11_generator() {
  static std::once_flag once;
  std::call_once(once, [] {
    register_row_generator(kBoard11Generator, [](const RowMeta& meta) {
      if (meta.generator != kBoard11Generator || meta.family != "R" || meta.params.size() != 3) {
        throw std::invalid_argument("not an 11-board cut");
      }
      for (int p : meta.params) {
        if (p < 0 || p > 0xFFFF) throw std::invalid_argument("bad point set");
      }
      const ResidualCut11 cut = make_cut(static_cast<PointSet>(meta.params[0]), static_cast<PointSet>(meta.params[1]),
                                         static_cast<PointSet>(meta.params[2]));
      if (!check_cut11(cut)) throw std::invalid_argument("not a residual cut");
      return cut_row(variables11(), cut);
    });
  });
}

Domination11 verify_domination11(const FarkasCertificate& cert) {
  Domination11 d;
  if (cert.label != "board11") {
    d.reason = "certificate label is not board11";
    return d;
  }
  if (cert.infeasibility || cert.denominator <= 0 || !cert.upper.empty()) {
    d.reason = "expected a residual-cut dual with positive denominator";
    return d;
  }
  const LocalBoard& b = board11();
  std::vector<BigInt> coef(1u << b.points(), 0);
  std::set<std::string> ids;
  for (const auto& [id, n] : cert.rows) {
    if (n < 0 || !ids.insert(id).second) {
      d.reason = "negative or repeated multiplier on " + id;
      return d;
    }
    ResidualCut11 cut;
    try {
      cut = parse_cut_id11(id);
    } catch (const std::invalid_argument& e) {
      d.reason = e.what();
      return d;
    }
    if (n > 0) ++d.support;
    coef[cut.h] += n;
    for (PointSet q : cut.vars) coef[q] += n;
  }
  const BigInt& D = cert.denominator;
  bool ok = true;
  auto least = [&](const std::vector<PointSet>& vars, int target, Rational& out) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const Rational c(coef[vars[i]], D);
      if (i == 0 || c < out) out = c;
      if (coef[vars[i]] < target * D) {
        ok = false;
        if (d.reason.empty()) d.reason = variable_name11(vars[i]) + " below " + std::to_string(target);
      }
    }
  };
  least(b.triple_variables(), 300, d.min_triple);
  least(b.pair_variables(), 144, d.min_pair);
  for (PointSet q : b.missing_variables()) {
    const Rational load(coef[q], D);
    if (load > d.max_load) d.max_load = load;
    if (coef[q] > 625 * D) {
      ok = false;
      if (d.reason.empty()) d.reason = variable_name11(q) + " load above 625";
    }
  }
  d.ok = ok;
  return d;
}

namespace {

Board11Report audit(const RationalSystem& sys, const std::vector<ResidualCut11>& cuts, const FarkasCertificate& cert) {
  const LocalBoard& b = board11();
  Board11Report r;
  r.missing_variables = b.missing_variables().size();
  r.triple_variables = b.triple_variables().size();
  r.pair_variables = b.pair_variables().size();
  r.cuts = cuts.size();
  r.infeasibility_cuts = static_cast<std::size_t>(
      std::count_if(cuts.begin(), cuts.end(), [](const ResidualCut11& c) { return c.infeasibility(); }));
  r.counts_ok = r.missing_variables == 260 && r.triple_variables == 68 && r.pair_variables == 3;
  r.witnesses_ok = std::all_of(cuts.begin(), cuts.end(), check_cut11);
  r.certificate = cert;
  r.layer = layer_assembly(2);
  register_board11_generator();
  try {
    r.farkas = verify_certificate(sys, cert);
    r.rows_regenerated = true;
    for (const auto& [id, n] : cert.rows) r.rows_regenerated = r.rows_regenerated && regenerate_and_match(sys, id);
  } catch (const ProofError& e) {
    r.farkas.ok = false;
    r.farkas.reason = e.what();
    r.rows_regenerated = false;
  }
  r.domination = verify_domination11(cert);
  return r;
}

}  // namespace

Board11Report run_board11() {
  RationalSystem sys = residual_system11();
  const auto cuts = regenerate_residual_cuts11();
  const LpOutcome lp = solve_with_certificate(sys);
  FarkasCertificate cert = lp.certificate;
  cert.label = "board11";
  std::erase_if(cert.upper, [](const auto& u) { return u.second == 0; });
  Board11Report r = audit(sys, cuts, cert);
  if (lp.status != LpStatus::Certified && r.domination.reason.empty()) r.domination.reason = "11-board LP has no dual";
  return r;
}

Board11Report verify_board11_certificate(const FarkasCertificate& cert) {
  return audit(residual_system11(), regenerate_residual_cuts11(), cert);
}

}  // namespace emc4
