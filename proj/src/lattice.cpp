#include "emc4/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace emc4 {

LatticePoint::LatticePoint(int dim, std::array<std::uint8_t, 4> coords) : dim_(dim), coords_(coords) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("lattice dimension must be in 1..4");
  for (int i = 0; i < 4; ++i) {
    if (i >= dim) {
      coords_[static_cast<std::size_t>(i)] = 0;
    } else if (coords_[static_cast<std::size_t>(i)] >= kSide) {
      throw std::invalid_argument("lattice coordinate out of range");
    }
  }
}

LatticePoint LatticePoint::decode(int dim, int index) {
  if (index < 0 || index >= cell_count(dim)) throw std::invalid_argument("cell index out of range");
  std::array<std::uint8_t, 4> c{};
  for (int i = 0; i < dim; ++i) {
    c[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(index % kSide);
    index /= kSide;
  }
  return LatticePoint(dim, c);
}

int LatticePoint::index() const {
  int idx = 0;
  for (int i = dim_ - 1; i >= 0; --i) idx = idx * kSide + coords_[static_cast<std::size_t>(i)];
  return idx;
}

bool LatticePoint::leq(const LatticePoint& other) const {
  for (int i = 0; i < dim_; ++i)
    if ((*this)[i] > other[i]) return false;
  return true;
}

bool LatticePoint::disjoint_from(const LatticePoint& other) const {
  for (int i = 0; i < dim_; ++i)
    if ((*this)[i] == other[i]) return false;
  return true;
}

std::string LatticePoint::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << (*this)[i];
  os << ')';
  return os.str();
}

namespace {

CellMask universe_mask(int dim) {
  CellMask m;
  for (int i = 0; i < cell_count(dim); ++i) m.set(static_cast<std::size_t>(i));
  return m;
}

}  // namespace

CellSet::CellSet(int dim, const CellMask& mask) : dim_(dim), mask_(mask & universe_mask(dim)) {}

CellSet CellSet::full(int dim) { return CellSet(dim, universe_mask(dim)); }

CellSet CellSet::from_indices(int dim, const std::vector<int>& cells) {
  CellSet s(dim);
  for (int c : cells) {
    if (c < 0 || c >= cell_count(dim)) throw std::invalid_argument("cell index out of range");
    s.insert(c);
  }
  return s;
}

std::vector<int> CellSet::indices() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::size_t i = mask_._Find_first(); i < mask_.size(); i = mask_._Find_next(i))
    out.push_back(static_cast<int>(i));
  return out;
}

CellSet CellSet::complement() const { return CellSet(dim_, ~mask_); }
CellSet CellSet::operator|(const CellSet& o) const { return CellSet(dim_, mask_ | o.mask_); }
CellSet CellSet::operator&(const CellSet& o) const { return CellSet(dim_, mask_ & o.mask_); }

bool is_up_set(const CellSet& s) {
  const int d = s.dim();
  for (int idx : s.indices()) {
    int step = 1;
    for (int i = 0; i < d; ++i, step *= kSide) {
      const int coord = (idx / step) % kSide;
      if (coord < kSide - 1 && !s.contains(idx + step)) return false;
    }
  }
  return true;
}

bool is_down_set(const CellSet& s) {
  const int d = s.dim();
  for (int idx : s.indices()) {
    int step = 1;
    for (int i = 0; i < d; ++i, step *= kSide) {
      const int coord = (idx / step) % kSide;
      if (coord > 0 && !s.contains(idx - step)) return false;
    }
  }
  return true;
}

CellSet principal_up_closure(const LatticePoint& x) {
  CellSet s(x.dim());
  for (int i = 0; i < cell_count(x.dim()); ++i)
    if (x.leq(LatticePoint::decode(x.dim(), i))) s.insert(i);
  return s;
}

CellSet principal_down_closure(const LatticePoint& x) {
  CellSet s(x.dim());
  for (int i = 0; i < cell_count(x.dim()); ++i)
    if (LatticePoint::decode(x.dim(), i).leq(x)) s.insert(i);
  return s;
}

CellSet up_closure(const CellSet& s) {
  CellSet out(s.dim());
  for (int idx : s.indices()) out = out | principal_up_closure(LatticePoint::decode(s.dim(), idx));
  return out;
}

CellSet down_closure(const CellSet& s) {
  CellSet out(s.dim());
  for (int idx : s.indices()) out = out | principal_down_closure(LatticePoint::decode(s.dim(), idx));
  return out;
}

const std::array<CellMask, 256>& up_masks4() {
  static const std::array<CellMask, 256> table = [] {
    std::array<CellMask, 256> t{};
    for (int i = 0; i < 256; ++i) t[static_cast<std::size_t>(i)] = principal_up_closure(LatticePoint::decode(4, i)).mask();
    return t;
  }();
  return table;
}

const std::array<CellMask, 256>& down_masks4() {
  static const std::array<CellMask, 256> table = [] {
    std::array<CellMask, 256> t{};
    for (int i = 0; i < 256; ++i) t[static_cast<std::size_t>(i)] = principal_down_closure(LatticePoint::decode(4, i)).mask();
    return t;
  }();
  return table;
}

bool FerrersShape::valid() const {
  if (dim == 2) {
    for (int i = 0; i < 4; ++i) {
      if (heights[static_cast<std::size_t>(i)] > kSide) return false;
      if (i > 0 && heights[static_cast<std::size_t>(i)] > heights[static_cast<std::size_t>(i - 1)]) return false;
    }
    for (int i = 4; i < 16; ++i)
      if (heights[static_cast<std::size_t>(i)] != 0) return false;
    return true;
  }
  if (dim == 3) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const int h = heights[static_cast<std::size_t>(a + 4 * b)];
        if (h > kSide) return false;
        if (a > 0 && h > heights[static_cast<std::size_t>(a - 1 + 4 * b)]) return false;
        if (b > 0 && h > heights[static_cast<std::size_t>(a + 4 * (b - 1))]) return false;
      }
    }
    return true;
  }
  return false;
}

int FerrersShape::size() const {
  int n = 0;
  for (auto h : heights) n += h;
  return n;
}

std::string FerrersShape::str() const {
  std::ostringstream os;
  const int n = dim == 2 ? 4 : 16;
  for (int i = 0; i < n; ++i) os << (i ? " " : "") << int(heights[static_cast<std::size_t>(i)]);
  return os.str();
}

CellSet expand_ferrers(const FerrersShape& shape) {
  if (!shape.valid()) throw std::invalid_argument("invalid Ferrers shape");
  CellSet s(shape.dim);
  if (shape.dim == 2) {
    for (int i = 0; i < 4; ++i)
      for (int c = 0; c < shape.heights[static_cast<std::size_t>(i)]; ++c) s.insert(i + 4 * c);
  } else {
    for (int ab = 0; ab < 16; ++ab)
      for (int c = 0; c < shape.heights[static_cast<std::size_t>(ab)]; ++c) s.insert(ab + 16 * c);
  }
  return s;
}

namespace {

// Row-major traversal; for d = 3 the position p = a + 4b is visited in the
// order p = 0, 1, 2, ... which is "row b, column a". Heights are chosen in
// increasing order at each position so the output is lexicographic.
void enumerate_rec(int dim, int pos, FerrersShape& cur, std::vector<FerrersShape>& out) {
  const int n = dim == 2 ? 4 : 16;
  if (pos == n) {
    out.push_back(cur);
    return;
  }
  int cap = kSide;
  if (dim == 2) {
    if (pos > 0) cap = cur.heights[static_cast<std::size_t>(pos - 1)];
  } else {
    const int a = pos % 4;
    const int b = pos / 4;
    if (a > 0) cap = std::min<int>(cap, cur.heights[static_cast<std::size_t>(pos - 1)]);
    if (b > 0) cap = std::min<int>(cap, cur.heights[static_cast<std::size_t>(pos - 4)]);
  }
  for (int h = 0; h <= cap; ++h) {
    cur.heights[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(h);
    enumerate_rec(dim, pos + 1, cur, out);
  }
  cur.heights[static_cast<std::size_t>(pos)] = 0;
}

}  // namespace

std::vector<FerrersShape> enumerate_ferrers(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("Ferrers enumeration supports d = 2 or 3");
  std::vector<FerrersShape> out;
  FerrersShape cur;
  cur.dim = dim;
  enumerate_rec(dim, 0, cur, out);
  return out;
}

bool SupportedTrace::valid() const {
  if (support.size() != 2 && support.size() != 3) return false;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] < 0 || support[k] > 3) return false;
    if (k > 0 && support[k] <= support[k - 1]) return false;
    if (values[k] > 3) return false;
  }
  return true;
}

int SupportedTrace::value_in_column(int c) const {
  for (std::size_t k = 0; k < support.size(); ++k)
    if (support[k] == c) return values[k];
  return -1;
}

int SupportedTrace::value_index() const {
  int idx = 0;
  for (int k = size() - 1; k >= 0; --k) idx = idx * 4 + values[static_cast<std::size_t>(k)];
  return idx;
}

CellMask SupportedTrace::extensions() const {
  CellMask m;
  for (int q = 0; q < 256; ++q) {
    const auto p = LatticePoint::decode(4, q);
    bool ok = true;
    for (std::size_t k = 0; k < support.size() && ok; ++k) ok = p[support[k]] == values[k];
    if (ok) m.set(static_cast<std::size_t>(q));
  }
  return m;
}

std::string SupportedTrace::str() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < support.size(); ++k) os << (k ? "," : "") << support[k] << ':' << int(values[k]);
  os << '}';
  return os.str();
}

const std::vector<std::vector<int>>& pair_supports() {
  static const std::vector<std::vector<int>> s = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  return s;
}

const std::vector<std::vector<int>>& triple_supports() {
  static const std::vector<std::vector<int>> s = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  return s;
}

SupportedTrace make_trace(const std::vector<int>& support, int value_index) {
  SupportedTrace t;
  t.support = support;
  for (std::size_t k = 0; k < support.size(); ++k) {
    t.values[k] = static_cast<std::uint8_t>(value_index % 4);
    value_index /= 4;
  }
  if (!t.valid()) throw std::invalid_argument("invalid supported trace");
  return t;
}

}  // namespace emc4
