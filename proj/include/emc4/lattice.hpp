#pragma once

// Grid combinatorics on [4]^d for d in {2,3,4}: points, cell sets with
// up-set/down-set structure, Ferrers shapes, and supported traces.
//
// Cells are addressed by the base-4 little-endian index sum(coords[i] * 4^i).
// Every file format and clause list in the project uses this index.

#include <array>
#include <bitset>
#include <cstdint>
#include <string>
#include <vector>

namespace emc4 {

inline constexpr int kSide = 4;

constexpr int cell_count(int dim) {
  int n = 1;
  for (int i = 0; i < dim; ++i) n *= kSide;
  return n;
}

class LatticePoint {
 public:
  LatticePoint() = default;
  LatticePoint(int dim, std::array<std::uint8_t, 4> coords);

  static LatticePoint decode(int dim, int index);

  int dim() const { return dim_; }
  int operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  const std::array<std::uint8_t, 4>& coords() const { return coords_; }
  int index() const;

  /// Coordinatewise order.
  bool leq(const LatticePoint& other) const;
  /// Distinct values in every coordinate.
  bool disjoint_from(const LatticePoint& other) const;

  std::string str() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;

 private:
  int dim_ = 0;
  std::array<std::uint8_t, 4> coords_{};
};

using CellMask = std::bitset<256>;

/// Subset of [4]^d. High bits beyond 4^d are always zero.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(int dim) : dim_(dim) {}
  CellSet(int dim, const CellMask& mask);

  static CellSet full(int dim);
  static CellSet from_indices(int dim, const std::vector<int>& cells);

  int dim() const { return dim_; }
  const CellMask& mask() const { return mask_; }
  bool contains(int index) const { return mask_.test(static_cast<std::size_t>(index)); }
  bool contains(const LatticePoint& p) const { return contains(p.index()); }
  void insert(int index) { mask_.set(static_cast<std::size_t>(index)); }
  void erase(int index) { mask_.reset(static_cast<std::size_t>(index)); }
  std::size_t size() const { return mask_.count(); }
  bool empty() const { return mask_.none(); }
  std::vector<int> indices() const;

  CellSet complement() const;
  CellSet operator|(const CellSet& o) const;
  CellSet operator&(const CellSet& o) const;
  bool subset_of(const CellSet& o) const { return (mask_ & ~o.mask_).none(); }

  friend bool operator==(const CellSet&, const CellSet&) = default;

 private:
  int dim_ = 4;
  CellMask mask_{};
};

bool is_up_set(const CellSet& s);
bool is_down_set(const CellSet& s);

/// {y : y >= x coordinatewise}; size prod(4 - x_i).
CellSet principal_up_closure(const LatticePoint& x);
/// {y : y <= x coordinatewise}; size prod(x_i + 1).
CellSet principal_down_closure(const LatticePoint& x);

CellSet up_closure(const CellSet& s);
CellSet down_closure(const CellSet& s);

/// Precomputed principal closures in [4]^4, indexed by cell.
const std::array<CellMask, 256>& up_masks4();
const std::array<CellMask, 256>& down_masks4();

/// Monotone height data of a coordinatewise down-set.
///   d = 2: heights[0..3], nonincreasing; cell (i, c) present iff c < heights[i].
///   d = 3: heights[a + 4b] nonincreasing along a and b; cell (a, b, c)
///          present iff c < heights[a + 4b].
struct FerrersShape {
  int dim = 2;
  std::array<std::uint8_t, 16> heights{};

  bool valid() const;
  int size() const;
  std::string str() const;

  friend bool operator==(const FerrersShape&, const FerrersShape&) = default;
};

CellSet expand_ferrers(const FerrersShape& shape);

/// All Ferrers shapes in lexicographic order of the row-major height list.
/// 70 shapes for d = 2, 232848 for d = 3.
std::vector<FerrersShape> enumerate_ferrers(int dim);

/// A wide pair or wide triple: values on a sorted subset of the four columns.
struct SupportedTrace {
  std::vector<int> support;        // sorted column indices, size 2 or 3
  std::array<std::uint8_t, 3> values{};  // values[k] sits in column support[k]

  int size() const { return static_cast<int>(support.size()); }
  bool valid() const;
  /// Value in column c, or -1 when c is outside the support.
  int value_in_column(int c) const;
  /// Index of the value tuple inside [4]^|support|.
  int value_index() const;
  /// All wide quads extending this trace.
  CellMask extensions() const;
  std::string str() const;

  friend bool operator==(const SupportedTrace&, const SupportedTrace&) = default;
};

/// The six pair supports and four triple supports in lexicographic order.
const std::vector<std::vector<int>>& pair_supports();
const std::vector<std::vector<int>>& triple_supports();

SupportedTrace make_trace(const std::vector<int>& support, int value_index);

}  // namespace emc4
