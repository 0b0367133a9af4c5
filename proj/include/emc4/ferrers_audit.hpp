#pragma once

// Exhaustive audits of the supportwise trace bounds: a legal pair shape has at
// most 4 cells, a legal triple shape at most 32.

#include <array>
#include <cstdint>
#include <vector>

#include "emc4/lattice.hpp"
#include "emc4/rational.hpp"

namespace emc4 {

/// Two pair values differing in both coordinates, with some coordinate whose
/// two values are not exactly {0,1}. Indices are cells of [4]^2.
bool is_pair_obstruction(int a, int b);

/// Unordered triple of cells of [4]^3 (sorted indices).
struct BadTripleMatching {
  std::array<std::uint8_t, 3> cells{};
};

/// Pairwise distinct values in every coordinate and, in some coordinate, the
/// unused value of {0,1,2,3} is 0 or 1.
bool is_bad_triple(int a, int b, int c);

/// All 2016 bad 3-matchings, sorted lexicographically by cell indices.
const std::vector<BadTripleMatching>& bad_triples();

/// Inclusion-minimal down-closures of the bad 3-matchings in [4]^3.
const std::vector<std::uint64_t>& minimal_forbidden_triple_sets();

bool pair_set_is_legal(std::uint16_t cells);
bool triple_set_is_legal(std::uint64_t cells);

struct PairAuditReport {
  int downsets_checked = 0;
  int legal_count = 0;
  int max_legal_size = 0;
  std::vector<FerrersShape> legal_shapes;
};

struct TripleAuditReport {
  int downsets_checked = 0;
  int bad_matchings = 0;
  int minimal_forbidden_sets = 0;
  int legal_count = 0;
  int max_legal_size = 0;
  std::vector<FerrersShape> equality_diagrams;
};

/// Plane partitions in an a x b x c box by MacMahon's product
/// prod (i+j+k-1)/(i+j+k-2); an oracle for the down-set enumeration.
BigInt macmahon_box_count(int a, int b, int c);

PairAuditReport audit_pairs();
TripleAuditReport audit_triples();

/// Legal Ferrers shapes as cell masks (16-bit for pairs, 64-bit for triples),
/// cached after the first call.
const std::vector<std::uint16_t>& legal_pair_masks();
const std::vector<std::uint64_t>& legal_triple_masks();

/// Largest legal shape contained in `allowed`, with every maximizer.
struct LegalMaximum {
  int max_size = 0;
  std::vector<std::uint64_t> maximizers;
};

LegalMaximum best_legal_pair(std::uint16_t allowed);
LegalMaximum best_legal_triple(std::uint64_t allowed);

}  // namespace emc4
