#include "emc4/board.hpp"

#include <bit>
#include <stdexcept>

namespace emc4 {

std::vector<PointSet> point_subsets(int points, int k) {
  std::vector<PointSet> out;
  for (unsigned s = 0; s < (1u << points); ++s) {
    if (std::popcount(s) == k) out.push_back(static_cast<PointSet>(s));
  }
  return out;
}

LocalBoard::LocalBoard(int columns) : columns_(columns) {
  if (columns < 1 || columns > 3) throw std::invalid_argument("local board needs 1 to 3 columns");
  for (int c = 0; c < columns_; ++c) fixed_.push_back(column(c));
  for (int c = 0; c < columns_; ++c) {
    for (int j = 0; j < 2; ++j) fixed_.push_back(static_cast<PointSet>(d_points() | (1u << (3 + 4 * c + j))));
  }
  for (PointSet q : point_subsets(points(), 4)) {
    if (spread(q) == columns_) missing_.push_back(q);
  }
  for (PointSet h : point_subsets(points(), 3)) {
    if (spread(h) == columns_ - 1) triples_.push_back(h);
  }
  for (PointSet h : point_subsets(points(), 2)) {
    if (spread(h) == columns_ - 2) pairs_.push_back(h);
  }
}

int LocalBoard::spread(PointSet s) const {
  int z = 0;
  for (int c = 0; c < columns_; ++c) z += (s & column(c)) != 0;
  return z;
}

bool LocalBoard::is_fixed(PointSet quad) const {
  for (PointSet f : fixed_) {
    if (f == quad) return true;
  }
  return false;
}

bool LocalBoard::is_missing_variable(PointSet quad) const {
  return std::popcount(static_cast<unsigned>(quad)) == 4 && (quad & ~all_points()) == 0 && spread(quad) == columns_;
}

std::string LocalBoard::label(PointSet s) const {
  std::string out;
  for (int p = 0; p < points(); ++p) {
    if (!(s & (1u << p))) continue;
    if (p < 3) {
      out += 'D';
      out += static_cast<char>('0' + p);
    } else {
      out += static_cast<char>('A' + (p - 3) / 4);
      out += static_cast<char>('0' + (p - 3) % 4);
    }
  }
  return out;
}

PointSet LocalBoard::parse(const std::string& label) const {
  if (label.size() % 2 != 0) throw std::invalid_argument("bad point label: " + label);
  unsigned s = 0;
  int last = -1;
  for (std::size_t i = 0; i < label.size(); i += 2) {
    const char g = label[i];
    const int j = label[i + 1] - '0';
    int p = -1;
    if (g == 'D' && j >= 0 && j < 3) p = j;
    const int c = g - 'A';
    if (c >= 0 && c < columns_ && j >= 0 && j < 4) p = 3 + 4 * c + j;
    // Points must be listed once, in increasing order, so labels are canonical.
    if (p <= last) throw std::invalid_argument("bad point label: " + label);
    s |= 1u << p;
    last = p;
  }
  return static_cast<PointSet>(s);
}

LayerAssembly layer_assembly(int subboard_columns) {
  if (subboard_columns < 2 || subboard_columns > 3) throw std::invalid_argument("layer needs 2 or 3 columns");
  const int k = subboard_columns;
  // Traces meeting the first z columns; count k-subsets of 4 columns containing them.
  auto seen = [k](int z) {
    int count = 0;
    for (unsigned sigma = 0; sigma < 16; ++sigma) {
      if (std::popcount(sigma) == k && (sigma & ((1u << z) - 1)) == (1u << z) - 1) ++count;
    }
    return count;
  };
  LayerAssembly a;
  a.subboard_columns = k;
  a.triple_multiplicity = seen(k - 1);
  a.pair_multiplicity = seen(k - 2);
  a.missing_multiplicity = seen(k);
  a.triple_coefficient = Rational(a.triple_multiplicity) * Rational(12, 25);
  a.pair_coefficient = Rational(a.pair_multiplicity) * Rational(144, 625);
  return a;
}

}  // namespace emc4
