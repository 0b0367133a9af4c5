#pragma once

// The 11-board residual-cut universe and a dual certificate for
//   300 T + 144 P <= 625 M
// over spread-1 triples, spread-0 pairs and spread-2 missing quads.

#include <array>
#include <string>
#include <vector>

#include "emc4/board.hpp"
#include "emc4/exact_lp.hpp"

namespace emc4 {

const LocalBoard& board11();

/// x_H <= sum of m_Q over the Q-marked quads of a residual pair. A cut
/// without Q-marked quads is the infeasibility witness x_H <= 0.
struct ResidualCut11 {
  PointSet h = 0;
  std::array<PointSet, 2> quads{};  // increasing
  std::vector<PointSet> vars;       // Q-marked quads
  bool infeasibility() const { return vars.empty(); }
};

/// Disjointness, spreads and the F/Q marking of a single cut.
bool check_cut11(const ResidualCut11& cut);

std::vector<ResidualCut11> regenerate_residual_cuts11();

/// "D0D1|A0A1A2A3|B0B1B2B3"
std::string cut_id11(const ResidualCut11& cut);
/// Throws std::invalid_argument unless the id names a valid cut.
ResidualCut11 parse_cut_id11(const std::string& id);

/// Variables "t:<H>", "p:<H>", "m:<Q>".
std::string variable_name11(PointSet s);

inline constexpr const char* kBoard11Generator = "board11";

/// Every regenerated cut as a row, objective 300/144/-625, bound 0.
RationalSystem residual_system11();
void register_board11_generator();

struct Domination11 {
  bool ok = false;
  std::string reason;
  Rational min_triple = 0;  // least triple coefficient
  Rational min_pair = 0;
  Rational max_load = 0;
  int support = 0;
};

/// Exact check from the certificate alone: every cut is rebuilt from its id.
Domination11 verify_domination11(const FarkasCertificate& cert);

struct Board11Report {
  std::size_t missing_variables = 0, triple_variables = 0, pair_variables = 0;
  std::size_t cuts = 0, infeasibility_cuts = 0;
  bool counts_ok = false;
  bool witnesses_ok = false;
  FarkasCertificate certificate;
  VerifyResult farkas;
  bool rows_regenerated = false;
  Domination11 domination;
  LayerAssembly layer;
  bool ok() const { return counts_ok && witnesses_ok && farkas.ok && rows_regenerated && domination.ok; }
};

Board11Report run_board11();
Board11Report verify_board11_certificate(const FarkasCertificate& cert);

}  // namespace emc4
