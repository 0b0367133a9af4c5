#include "emc4/ferrers_audit.hpp"

#include <algorithm>
#include <bit>

namespace emc4 {

namespace {

int coord(int cell, int i) { return (cell >> (2 * i)) & 3; }

std::uint16_t pair_mask(const FerrersShape& s) {
  return static_cast<std::uint16_t>(expand_ferrers(s).mask().to_ulong());
}

std::uint64_t triple_mask(const FerrersShape& s) { return expand_ferrers(s).mask().to_ullong(); }

std::uint64_t down_closure3(int cell) {
  std::uint64_t m = 0;
  for (int c = 0; c < 64; ++c)
    if (coord(c, 0) <= coord(cell, 0) && coord(c, 1) <= coord(cell, 1) && coord(c, 2) <= coord(cell, 2))
      m |= std::uint64_t{1} << c;
  return m;
}

}  // namespace

bool is_pair_obstruction(int a, int b) {
  if (coord(a, 0) == coord(b, 0) || coord(a, 1) == coord(b, 1)) return false;
  for (int j = 0; j < 2; ++j) {
    const int lo = std::min(coord(a, j), coord(b, j));
    const int hi = std::max(coord(a, j), coord(b, j));
    if (lo != 0 || hi != 1) return true;
  }
  return false;
}

bool is_bad_triple(int a, int b, int c) {
  bool low_unused = false;
  for (int j = 0; j < 3; ++j) {
    const int x = coord(a, j), y = coord(b, j), z = coord(c, j);
    if (x == y || y == z || x == z) return false;
    const int unused = 6 - x - y - z;
    if (unused <= 1) low_unused = true;
  }
  return low_unused;
}

const std::vector<BadTripleMatching>& bad_triples() {
  static const std::vector<BadTripleMatching> list = [] {
    std::vector<BadTripleMatching> out;
    for (int a = 0; a < 64; ++a)
      for (int b = a + 1; b < 64; ++b)
        for (int c = b + 1; c < 64; ++c)
          if (is_bad_triple(a, b, c))
            out.push_back({{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c)}});
    return out;
  }();
  return list;
}

const std::vector<std::uint64_t>& minimal_forbidden_triple_sets() {
  static const std::vector<std::uint64_t> list = [] {
    std::vector<std::uint64_t> closures;
    for (const auto& t : bad_triples())
      closures.push_back(down_closure3(t.cells[0]) | down_closure3(t.cells[1]) | down_closure3(t.cells[2]));
    std::sort(closures.begin(), closures.end(),
              [](std::uint64_t x, std::uint64_t y) { return std::popcount(x) != std::popcount(y) ? std::popcount(x) < std::popcount(y) : x < y; });
    closures.erase(std::unique(closures.begin(), closures.end()), closures.end());
    std::vector<std::uint64_t> minimal;
    for (std::uint64_t f : closures) {
      bool dominated = false;
      for (std::uint64_t g : minimal) {
        if ((g & ~f) == 0) {
          dominated = true;
          break;
        }
      }
      if (!dominated) minimal.push_back(f);
    }
    std::sort(minimal.begin(), minimal.end());
    return minimal;
  }();
  return list;
}

bool pair_set_is_legal(std::uint16_t cells) {
  for (int a = 0; a < 16; ++a) {
    if (!(cells >> a & 1)) continue;
    for (int b = a + 1; b < 16; ++b)
      if ((cells >> b & 1) && is_pair_obstruction(a, b)) return false;
  }
  return true;
}

bool triple_set_is_legal(std::uint64_t cells) {
  // Valid for down-sets: a down-set contains a bad matching iff it contains
  // that matching's down-closure.
  for (std::uint64_t f : minimal_forbidden_triple_sets())
    if ((f & ~cells) == 0) return false;
  return true;
}

PairAuditReport audit_pairs() {
  PairAuditReport r;
  for (const auto& s : enumerate_ferrers(2)) {
    ++r.downsets_checked;
    if (!pair_set_is_legal(pair_mask(s))) continue;
    ++r.legal_count;
    r.max_legal_size = std::max(r.max_legal_size, s.size());
    r.legal_shapes.push_back(s);
  }
  return r;
}

TripleAuditReport audit_triples() {
  TripleAuditReport r;
  r.bad_matchings = static_cast<int>(bad_triples().size());
  r.minimal_forbidden_sets = static_cast<int>(minimal_forbidden_triple_sets().size());
  std::vector<FerrersShape> legal;
  for (const auto& s : enumerate_ferrers(3)) {
    ++r.downsets_checked;
    if (!triple_set_is_legal(triple_mask(s))) continue;
    ++r.legal_count;
    legal.push_back(s);
    r.max_legal_size = std::max(r.max_legal_size, s.size());
  }
  for (const auto& s : legal)
    if (s.size() == r.max_legal_size) r.equality_diagrams.push_back(s);
  return r;
}

const std::vector<std::uint16_t>& legal_pair_masks() {
  static const std::vector<std::uint16_t> masks = [] {
    std::vector<std::uint16_t> out;
    for (const auto& s : audit_pairs().legal_shapes) out.push_back(pair_mask(s));
    return out;
  }();
  return masks;
}

const std::vector<std::uint64_t>& legal_triple_masks() {
  static const std::vector<std::uint64_t> masks = [] {
    std::vector<std::uint64_t> out;
    for (const auto& s : enumerate_ferrers(3)) {
      const std::uint64_t m = triple_mask(s);
      if (triple_set_is_legal(m)) out.push_back(m);
    }
    return out;
  }();
  return masks;
}

LegalMaximum best_legal_pair(std::uint16_t allowed) {
  LegalMaximum best;
  for (std::uint16_t m : legal_pair_masks()) {
    if (m & ~allowed) continue;
    const int sz = std::popcount(m);
    if (sz > best.max_size) {
      best.max_size = sz;
      best.maximizers.clear();
    }
    if (sz == best.max_size) best.maximizers.push_back(m);
  }
  return best;
}

LegalMaximum best_legal_triple(std::uint64_t allowed) {
  LegalMaximum best;
  for (std::uint64_t m : legal_triple_masks()) {
    if (m & ~allowed) continue;
    const int sz = std::popcount(m);
    if (sz > best.max_size) {
      best.max_size = sz;
      best.maximizers.clear();
    }
    if (sz == best.max_size) best.maximizers.push_back(m);
  }
  return best;
}

BigInt macmahon_box_count(int a, int b, int c) {
  Rational p = 1;
  for (int i = 1; i <= a; ++i)
    for (int j = 1; j <= b; ++j)
      for (int k = 1; k <= c; ++k) p *= Rational(i + j + k - 1, i + j + k - 2);
  if (denominator_of(p) != 1) throw ProofError("MacMahon product is not an integer");
  return numerator_of(p);
}

}  // namespace emc4
