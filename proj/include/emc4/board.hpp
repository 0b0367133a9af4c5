#pragma once

// Labelled local boards D0 D1 D2 plus k columns of four points (k = 2 or 3).
// Point sets are bitmasks: D_i is bit i, column c point j is bit 3 + 4c + j.
// Fixed present quads are the full columns and the seeds D + {col_0},
// D + {col_1}; the variables are missing quads of spread k, present triples of
// spread k - 1 and present pairs of spread k - 2.

#include <cstdint>
#include <string>
#include <vector>

#include "emc4/rational.hpp"

namespace emc4 {

using PointSet = std::uint16_t;

class LocalBoard {
 public:
  explicit LocalBoard(int columns);

  int columns() const { return columns_; }
  int points() const { return 3 + 4 * columns_; }
  PointSet all_points() const { return static_cast<PointSet>((1u << points()) - 1); }
  static PointSet d_points() { return 0b111; }
  PointSet column(int c) const { return static_cast<PointSet>(0xFu << (3 + 4 * c)); }

  /// Number of columns met.
  int spread(PointSet s) const;
  bool is_fixed(PointSet quad) const;
  bool is_missing_variable(PointSet quad) const;

  const std::vector<PointSet>& fixed_quads() const { return fixed_; }
  const std::vector<PointSet>& missing_variables() const { return missing_; }
  const std::vector<PointSet>& triple_variables() const { return triples_; }
  const std::vector<PointSet>& pair_variables() const { return pairs_; }

  /// "D0A1B3"; throws std::invalid_argument on malformed input.
  std::string label(PointSet s) const;
  PointSet parse(const std::string& label) const;

 private:
  int columns_;
  std::vector<PointSet> fixed_;
  std::vector<PointSet> missing_;
  std::vector<PointSet> triples_;
  std::vector<PointSet> pairs_;
};

/// k-subsets of the board points, increasing as masks.
std::vector<PointSet> point_subsets(int points, int k);

/// Constants of a layer inequality summed over the subboards of the 19-board.
struct LayerAssembly {
  int subboard_columns = 0;
  int triple_multiplicity = 0;
  int pair_multiplicity = 0;
  int missing_multiplicity = 0;
  Rational triple_coefficient;  // multiplicity * 12/25
  Rational pair_coefficient;    // multiplicity * 144/625
};

/// Multiplicities counted over the column subsets of a four-column board.
LayerAssembly layer_assembly(int subboard_columns);

}  // namespace emc4
