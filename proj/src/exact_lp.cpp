#include "emc4/exact_lp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <unordered_set>

namespace emc4 {

std::vector<std::pair<int, Rational>> normalize_coeffs(std::vector<std::pair<int, Rational>> coeffs) {
  std::stable_sort(coeffs.begin(), coeffs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, Rational>> out;
  for (auto& [j, v] : coeffs) {
    if (!out.empty() && out.back().first == j)
      out.back().second += v;
    else
      out.emplace_back(j, v);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& p) { return p.second == 0; }), out.end());
  return out;
}

int RationalSystem::add_variable(const std::string& name) {
  if (name_index_.count(name)) throw std::invalid_argument("duplicate variable " + name);
  const int j = variable_count();
  names_.push_back(name);
  name_index_.emplace(name, j);
  objective_.emplace_back(0);
  return j;
}

int RationalSystem::variable_index(const std::string& name) const {
  auto it = name_index_.find(name);
  if (it == name_index_.end()) throw ProofError("unknown variable " + name);
  return it->second;
}

void RationalSystem::set_objective(int j, const Rational& v) {
  if (j < 0 || j >= variable_count()) throw std::invalid_argument("objective column out of range");
  objective_[static_cast<std::size_t>(j)] = v;
}

int RationalSystem::add_row(LinearRow row) {
  if (row_index_.count(row.id)) throw std::invalid_argument("duplicate row id " + row.id);
  row.coeffs = normalize_coeffs(std::move(row.coeffs));
  for (const auto& [j, v] : row.coeffs)
    if (j < 0 || j >= variable_count()) throw std::invalid_argument("row " + row.id + " uses an unknown column");
  const int i = row_count();
  row_index_.emplace(row.id, i);
  rows_.push_back(std::move(row));
  return i;
}

const LinearRow& RationalSystem::row(const std::string& id) const { return rows_[static_cast<std::size_t>(row_index(id))]; }

int RationalSystem::row_index(const std::string& id) const {
  auto it = row_index_.find(id);
  if (it == row_index_.end()) throw ProofError("unknown row id " + id);
  return it->second;
}

VerifyResult verify_certificate(const RationalSystem& sys, const FarkasCertificate& cert) {
  VerifyResult res;
  const BigInt& D = cert.denominator;
  if (D <= 0) {
    res.reason = "denominator must be positive";
    return res;
  }
  const auto n = static_cast<std::size_t>(sys.variable_count());
  std::vector<Rational> lhs(n, Rational(0));
  Rational rhs = 0;
  std::unordered_set<std::string> seen;
  for (const auto& [id, num] : cert.rows) {
    const LinearRow& row = sys.row(id);
    if (!seen.insert(id).second) {
      res.reason = "repeated row " + id;
      return res;
    }
    if (num < 0) {
      res.reason = "negative multiplier on row " + id;
      return res;
    }
    if (num == 0) continue;
    const Rational q(num);
    for (const auto& [j, a] : row.coeffs) lhs[static_cast<std::size_t>(j)] += q * a;
    rhs += q * row.rhs;
  }
  std::vector<bool> seen_var(n, false);
  for (const auto& [name, num] : cert.upper) {
    const auto j = static_cast<std::size_t>(sys.variable_index(name));
    if (seen_var[j]) {
      res.reason = "repeated upper bound " + name;
      return res;
    }
    seen_var[j] = true;
    if (num < 0) {
      res.reason = "negative multiplier on bound " + name;
      return res;
    }
    lhs[j] += Rational(num);
    rhs += Rational(num);
  }
  const Rational Dq(D);
  if (cert.infeasibility) {
    for (std::size_t j = 0; j < n; ++j)
      if (lhs[j] < 0) {
        res.reason = "column " + sys.variable_name(static_cast<int>(j)) + " has a negative combination";
        return res;
      }
    res.gap = -rhs / Dq;
    res.ok = rhs < 0;
    if (!res.ok) res.reason = "combined right-hand side is not negative";
    return res;
  }
  for (std::size_t j = 0; j < n; ++j)
    if (lhs[j] < Dq * sys.objective()[j]) {
      res.reason = "column " + sys.variable_name(static_cast<int>(j)) + " is not dominated";
      return res;
    }
  res.gap = (Dq * sys.bound() - rhs) / Dq;
  res.ok = res.gap >= 0;
  if (!res.ok) res.reason = "right-hand side exceeds D*B";
  return res;
}

Rational objective_value(const RationalSystem& sys, const std::vector<Rational>& x) {
  Rational v = 0;
  for (std::size_t j = 0; j < x.size(); ++j) v += sys.objective()[j] * x[j];
  return v;
}

bool satisfies_rows(const RationalSystem& sys, const std::vector<Rational>& x) {
  if (x.size() != static_cast<std::size_t>(sys.variable_count())) return false;
  for (const auto& v : x)
    if (v < 0 || v > 1) return false;
  for (const auto& row : sys.rows()) {
    Rational s = 0;
    for (const auto& [j, a] : row.coeffs) s += a * x[static_cast<std::size_t>(j)];
    if (s > row.rhs) return false;
  }
  return true;
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static double from(const Rational& q) { return q.convert_to<double>(); }
  static bool positive(double v) { return v > 1e-9; }
  static bool negative(double v) { return v < -1e-9; }
  static bool nonzero(double v) { return std::fabs(v) > 1e-13; }
  static double clamp(double v) { return v < 0 ? 0 : v; }
  static bool improves(double delta, double scale) { return -delta > 1e-9 * std::max(1.0, std::fabs(scale)); }
};

template <>
struct Arith<Rational> {
  static Rational from(const Rational& q) { return q; }
  static bool positive(const Rational& v) { return v > 0; }
  static bool negative(const Rational& v) { return v < 0; }
  static bool nonzero(const Rational& v) { return v != 0; }
  static const Rational& clamp(const Rational& v) { return v; }
  static bool improves(const Rational& delta, const Rational&) { return delta < 0; }
};

enum class SimplexStatus { Optimal, Unbounded };

// Primal simplex on the dual program
//   min b^T lambda + 1^T mu  s.t.  A^T lambda + mu - s = d,  lambda, mu, s >= 0.
// Columns: [0, m) are mu_j, [m, 2m) are s_j, 2m + r is lambda_r. The simplex
// multipliers are a primal point x of the original system.
template <class T>
class ColumnSimplex {
 public:
  using A = Arith<T>;

  explicit ColumnSimplex(const RationalSystem& sys) : sys_(sys), m_(static_cast<std::size_t>(sys.variable_count())) {
    d_.resize(m_);
    for (std::size_t j = 0; j < m_; ++j) d_[j] = A::from(sys.objective()[j]);
    if constexpr (std::is_same_v<T, double>) {
      // Fixed-seed perturbation against degenerate stalling; the exact
      // repair absorbs the difference.
      std::mt19937_64 rng(0x5eed);
      std::uniform_real_distribution<double> dist(1e-7, 1e-6);
      for (auto& v : d_) v += v > 0 ? dist(rng) : -dist(rng);
    }
    binv_.assign(m_ * m_, T(0));
    basis_.resize(m_);
    xb_.resize(m_);
    pi_.assign(m_, T(0));
    pos_.assign(2 * m_, -1);
    for (std::size_t j = 0; j < m_; ++j) {
      if (A::positive(d_[j])) {
        basis_[j] = static_cast<int>(j);
        at(j, j) = T(1);
        xb_[j] = d_[j];
        pi_[j] = T(1);
      } else {
        basis_[j] = static_cast<int>(m_ + j);
        at(j, j) = T(-1);
        xb_[j] = -d_[j];
      }
      pos_[static_cast<std::size_t>(basis_[j])] = static_cast<int>(j);
    }
    sync_rows();
  }

  void sync_rows() {
    for (int r = static_cast<int>(cols_.size()); r < sys_.row_count(); ++r) {
      const auto& row = sys_.row_at(r);
      std::vector<std::pair<int, T>> col;
      col.reserve(row.coeffs.size());
      for (const auto& [j, a] : row.coeffs) col.emplace_back(j, A::from(a));
      cols_.push_back(std::move(col));
      costs_.push_back(A::from(row.rhs));
      pos_.push_back(-1);
    }
  }

  int column_count() const { return static_cast<int>(2 * m_ + cols_.size()); }

  SimplexStatus run(long long cap, long long& iterations) {
    long long degenerate = 0;
    bool bland = false;
    const T objective_scale = value();
    std::vector<T> alpha(m_);
    while (true) {
      if (++iterations > cap) throw ResourceError("simplex iteration cap exceeded");
      int q = -1;
      T best = T(0);
      const int ncol = column_count();
      for (int c = 0; c < ncol; ++c) {
        if (pos_[static_cast<std::size_t>(c)] >= 0) continue;
        T rc = reduced_cost(c);
        if (!A::negative(rc)) continue;
        if (bland) {
          q = c;
          best = rc;
          break;
        }
        if (q < 0 || rc < best) {
          q = c;
          best = rc;
        }
      }
      if (q < 0) return SimplexStatus::Optimal;
      column_image(q, alpha);
      int r = -1;
      T theta = T(0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (!A::positive(alpha[i])) continue;
        T t = A::clamp(xb_[i]) / alpha[i];
        bool take = r < 0 || t < theta;
        if (!take && !(theta < t)) {
          if (bland)
            take = basis_[i] < basis_[static_cast<std::size_t>(r)];
          else
            take = alpha[static_cast<std::size_t>(r)] < alpha[i];
        }
        if (take) {
          r = static_cast<int>(i);
          theta = t;
        }
      }
      if (r < 0) {
        ray_column_ = q;
        ray_alpha_ = alpha;
        return SimplexStatus::Unbounded;
      }
      // Bland's rule after a stall, kept until the objective really drops.
      if (A::improves(theta * best, objective_scale)) {
        degenerate = 0;
        bland = false;
      } else if (++degenerate > 50) {
        bland = true;
      }
      pivot(static_cast<std::size_t>(r), q, alpha, best, true);
    }
  }

  /// Pivots the listed columns into the basis without regard to feasibility,
  /// then recomputes the primal and dual values. False when the result is not
  /// a feasible basis.
  bool install_basis(const std::vector<int>& wanted) {
    std::unordered_set<int> want(wanted.begin(), wanted.end());
    std::vector<T> alpha(m_);
    for (int q : wanted) {
      if (q >= column_count()) return false;
      if (pos_[static_cast<std::size_t>(q)] >= 0) continue;
      column_image(q, alpha);
      int r = -1;
      for (std::size_t i = 0; i < m_; ++i)
        if (A::nonzero(alpha[i]) && !want.count(basis_[i])) {
          r = static_cast<int>(i);
          break;
        }
      if (r < 0) return false;
      pivot(static_cast<std::size_t>(r), q, alpha, T(0), false);
    }
    recompute_state();
    for (const auto& v : xb_)
      if (A::negative(v)) return false;
    return true;
  }

  T value() const {
    T v = T(0);
    for (std::size_t i = 0; i < m_; ++i) v += cost(basis_[i]) * xb_[i];
    return v;
  }
  const std::vector<int>& basis() const { return basis_; }
  const std::vector<T>& basic_values() const { return xb_; }
  /// Basic values of the current basis for the unperturbed objective.
  std::vector<T> unperturbed_values() const {
    std::vector<T> d(m_), out(m_, T(0));
    for (std::size_t j = 0; j < m_; ++j) d[j] = A::from(sys_.objective()[j]);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < m_; ++k) out[i] += binv_[i * m_ + k] * d[k];
    return out;
  }
  const std::vector<T>& multipliers() const { return pi_; }
  std::size_t m() const { return m_; }
  int ray_column() const { return ray_column_; }
  const std::vector<T>& ray_alpha() const { return ray_alpha_; }

 private:
  T& at(std::size_t i, std::size_t k) { return binv_[i * m_ + k]; }

  T reduced_cost(int c) const {
    const auto uc = static_cast<std::size_t>(c);
    if (uc < m_) return T(1) - pi_[uc];
    if (uc < 2 * m_) return pi_[uc - m_];
    const auto r = uc - 2 * m_;
    T v = costs_[r];
    for (const auto& [j, a] : cols_[r]) v -= a * pi_[static_cast<std::size_t>(j)];
    return v;
  }

  T cost(int c) const {
    const auto uc = static_cast<std::size_t>(c);
    if (uc < m_) return T(1);
    if (uc < 2 * m_) return T(0);
    return costs_[uc - 2 * m_];
  }

  void column_image(int c, std::vector<T>& alpha) {
    const auto uc = static_cast<std::size_t>(c);
    if (uc < 2 * m_) {
      const std::size_t j = uc < m_ ? uc : uc - m_;
      for (std::size_t i = 0; i < m_; ++i) alpha[i] = uc < m_ ? binv_[i * m_ + j] : -binv_[i * m_ + j];
      return;
    }
    const auto& col = cols_[uc - 2 * m_];
    for (std::size_t i = 0; i < m_; ++i) {
      T v = T(0);
      for (const auto& [j, a] : col) {
        const T& b = binv_[i * m_ + static_cast<std::size_t>(j)];
        if (A::nonzero(b)) v += b * a;
      }
      alpha[i] = v;
    }
  }

  void pivot(std::size_t r, int q, const std::vector<T>& alpha, const T& rc, bool update_values) {
    const T piv = alpha[r];
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < m_; ++k) {
      T& v = at(r, k);
      if (A::nonzero(v)) {
        v /= piv;
        nz.push_back(k);
      } else {
        v = T(0);
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || !A::nonzero(alpha[i])) continue;
      const T f = alpha[i];
      for (std::size_t k : nz) at(i, k) -= f * at(r, k);
    }
    if (update_values) {
      const T theta = A::clamp(xb_[r]) / piv;
      for (std::size_t i = 0; i < m_; ++i)
        if (i != r && A::nonzero(alpha[i])) xb_[i] -= alpha[i] * theta;
      xb_[r] = theta;
      for (std::size_t k : nz) pi_[k] += rc * at(r, k);
    }
    pos_[static_cast<std::size_t>(basis_[r])] = -1;
    basis_[r] = q;
    pos_[static_cast<std::size_t>(q)] = static_cast<int>(r);
    if constexpr (std::is_same_v<T, double>) {
      if (update_values && ++since_refactor_ >= 300) refactor();
    }
  }

  void recompute_state() {
    for (std::size_t i = 0; i < m_; ++i) {
      T v = T(0);
      for (std::size_t k = 0; k < m_; ++k)
        if (A::nonzero(d_[k]) && A::nonzero(binv_[i * m_ + k])) v += binv_[i * m_ + k] * d_[k];
      xb_[i] = v;
    }
    for (std::size_t k = 0; k < m_; ++k) pi_[k] = T(0);
    for (std::size_t i = 0; i < m_; ++i) {
      const T cb = cost(basis_[i]);
      if (!A::nonzero(cb)) continue;
      for (std::size_t k = 0; k < m_; ++k)
        if (A::nonzero(binv_[i * m_ + k])) pi_[k] += cb * binv_[i * m_ + k];
    }
  }

  // Dense Gauss-Jordan reinversion of the floating-point basis.
  void refactor() {
    since_refactor_ = 0;
    std::vector<double> b(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto c = static_cast<std::size_t>(basis_[i]);
      if (c < m_)
        b[c * m_ + i] = 1.0;
      else if (c < 2 * m_)
        b[(c - m_) * m_ + i] = -1.0;
      else
        for (const auto& [j, a] : cols_[c - 2 * m_]) b[static_cast<std::size_t>(j) * m_ + i] = a;
    }
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t p = col;
      for (std::size_t i = col + 1; i < m_; ++i)
        if (std::fabs(b[i * m_ + col]) > std::fabs(b[p * m_ + col])) p = i;
      if (std::fabs(b[p * m_ + col]) < 1e-12) throw ResourceError("singular basis during reinversion");
      if (p != col)
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(b[p * m_ + k], b[col * m_ + k]);
          std::swap(inv[p * m_ + k], inv[col * m_ + k]);
        }
      const double piv = b[col * m_ + col];
      for (std::size_t k = 0; k < m_; ++k) {
        b[col * m_ + k] /= piv;
        inv[col * m_ + k] /= piv;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == col) continue;
        const double f = b[i * m_ + col];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          b[i * m_ + k] -= f * b[col * m_ + k];
          inv[i * m_ + k] -= f * inv[col * m_ + k];
        }
      }
    }
    for (auto& v : inv)
      if (std::fabs(v) < 1e-14) v = 0.0;
    binv_ = std::move(inv);
    recompute_state();
  }

  const RationalSystem& sys_;
  std::size_t m_;
  std::vector<T> d_;
  std::vector<T> binv_;  // row-major inverse of the basis matrix
  std::vector<int> basis_;
  std::vector<T> xb_;
  std::vector<T> pi_;
  std::vector<int> pos_;  // basis position per column, -1 when nonbasic
  std::vector<std::vector<std::pair<int, T>>> cols_;
  std::vector<T> costs_;
  int ray_column_ = -1;
  std::vector<T> ray_alpha_;
  int since_refactor_ = 0;
};

// Continued-fraction approximation with denominator at most max_den, when
// one lies within tol.
std::optional<Rational> small_fraction(double v, long long max_den, double tol) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = v;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(x);
    if (a > 1e12) break;
    const auto ai = static_cast<long long>(a);
    const long long p2 = ai * p1 + p0;
    const long long q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    if (std::fabs(static_cast<double>(p2) / static_cast<double>(q2) - v) < tol) return Rational(BigInt(p2), BigInt(q2));
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

Rational dyadic(double v) {
  const double scale = 1073741824.0;
  return Rational(BigInt(static_cast<long long>(std::llround(v * scale))), BigInt(1073741824LL));
}

FarkasCertificate to_certificate(const RationalSystem& sys, const std::map<int, Rational>& lambda,
                                 const std::vector<Rational>& mu, bool infeasibility) {
  FarkasCertificate cert;
  cert.infeasibility = infeasibility;
  BigInt D = 1;
  for (const auto& [r, v] : lambda) D = lcm(D, denominator_of(v));
  for (const auto& v : mu)
    if (v != 0) D = lcm(D, denominator_of(v));
  const Rational Dq(D);
  cert.denominator = D;
  for (const auto& [r, v] : lambda)
    if (v != 0) cert.rows.emplace_back(sys.row_at(r).id, numerator_of(v * Dq));
  for (std::size_t j = 0; j < mu.size(); ++j)
    if (mu[j] != 0) cert.upper.emplace_back(sys.variable_name(static_cast<int>(j)), numerator_of(mu[j] * Dq));
  return cert;
}

// Rounds floating multipliers to rationals and absorbs every column deficit
// into the upper-bound multipliers, which keeps the result exactly feasible.
// Small common denominators are tried first, then a dyadic grid.
FarkasCertificate repair_certificate(const RationalSystem& sys, const ColumnSimplex<double>& spx,
                                     const std::vector<double>& values, bool use_grid) {
  const std::size_t m = spx.m();
  std::map<int, Rational> lambda;
  for (std::size_t i = 0; i < m; ++i) {
    const auto c = static_cast<std::size_t>(spx.basis()[i]);
    const double v = values[i];
    if (c < 2 * m || v <= 1e-12) continue;
    Rational q = dyadic(v);
    if (!use_grid) {
      auto f = small_fraction(v, 1000, 1e-9);
      if (f) q = *f;
    }
    if (q > 0) lambda.emplace(static_cast<int>(c - 2 * m), q);
  }
  std::vector<Rational> lhs(m, Rational(0));
  for (const auto& [r, v] : lambda)
    for (const auto& [j, a] : sys.row_at(r).coeffs) lhs[static_cast<std::size_t>(j)] += v * a;
  std::vector<Rational> mu(m, Rational(0));
  for (std::size_t j = 0; j < m; ++j) {
    const Rational deficit = sys.objective()[j] - lhs[j];
    if (deficit > 0) mu[j] = deficit;
  }
  return to_certificate(sys, lambda, mu, false);
}

std::vector<LinearRow> fresh_rows(const RationalSystem& sys, std::vector<LinearRow> rows) {
  std::vector<LinearRow> out;
  std::unordered_set<std::string> ids;
  for (auto& row : rows)
    if (!sys.has_row(row.id) && ids.insert(row.id).second) out.push_back(std::move(row));
  return out;
}

std::mutex& registry_mutex() {
  static std::mutex mu;
  return mu;
}

std::map<std::string, RowRegenerator>& registry() {
  static std::map<std::string, RowRegenerator> r;
  return r;
}

}  // namespace

LpOutcome solve_with_certificate(RationalSystem& sys, const RowSeparator* separator, const SolveOptions& opts) {
  LpOutcome out;
  const int initial_rows = sys.row_count();
  std::vector<int> float_basis;
  if (!opts.exact_only) {
    ColumnSimplex<double> spx(sys);
    bool optimal = false;
    while (true) {
      if (spx.run(opts.max_iterations, out.iterations) == SimplexStatus::Unbounded) break;
      auto rows = separator ? fresh_rows(sys, separator->violated(spx.multipliers(), 1e-7, opts.rows_per_round))
                            : std::vector<LinearRow>{};
      if (rows.empty()) {
        optimal = true;
        break;
      }
      for (auto& row : rows) sys.add_row(std::move(row));
      spx.sync_rows();
      ++out.separation_rounds;
    }
    if (optimal) {
      // The float objective is perturbed; values for the true objective on
      // the same basis usually round to the exact optimum.
      for (const auto& values : {spx.unperturbed_values(), spx.basic_values()}) {
        for (bool grid : {false, true}) {
          FarkasCertificate cert = repair_certificate(sys, spx, values, grid);
          if (verify_certificate(sys, cert).ok) {
            out.status = LpStatus::Certified;
            out.certificate = std::move(cert);
            out.generated_rows = sys.row_count() - initial_rows;
            return out;
          }
        }
      }
    }
    float_basis = spx.basis();
  }

  out.used_exact_phase = true;
  auto ex = std::make_unique<ColumnSimplex<Rational>>(sys);
  if (!float_basis.empty() && !ex->install_basis(float_basis)) ex = std::make_unique<ColumnSimplex<Rational>>(sys);
  const std::size_t m = ex->m();
  while (true) {
    if (ex->run(opts.max_iterations, out.iterations) == SimplexStatus::Unbounded) {
      // Ray: one unit of the entering column, minus its image on the basis.
      std::map<int, Rational> lambda;
      std::vector<Rational> mu(m, Rational(0));
      auto credit = [&](int c, const Rational& v) {
        const auto uc = static_cast<std::size_t>(c);
        if (uc < m)
          mu[uc] += v;
        else if (uc >= 2 * m)
          lambda[static_cast<int>(uc - 2 * m)] += v;
      };
      credit(ex->ray_column(), Rational(1));
      for (std::size_t i = 0; i < m; ++i)
        if (ex->ray_alpha()[i] != 0) credit(ex->basis()[i], -ex->ray_alpha()[i]);
      out.status = LpStatus::Infeasible;
      out.certificate = to_certificate(sys, lambda, mu, true);
      out.generated_rows = sys.row_count() - initial_rows;
      if (!verify_certificate(sys, out.certificate).ok)
        throw std::logic_error("exact infeasibility certificate failed verification");
      return out;
    }
    auto rows = separator ? fresh_rows(sys, separator->violated_exact(ex->multipliers(), opts.rows_per_round))
                          : std::vector<LinearRow>{};
    if (rows.empty()) break;
    for (auto& row : rows) sys.add_row(std::move(row));
    ex->sync_rows();
    ++out.separation_rounds;
  }
  out.generated_rows = sys.row_count() - initial_rows;
  const std::vector<Rational> x = ex->multipliers();
  const Rational value = objective_value(sys, x);
  if (value > sys.bound()) {
    out.status = LpStatus::BoundViolated;
    out.witness = x;
    out.witness_value = value;
    return out;
  }
  std::map<int, Rational> lambda;
  std::vector<Rational> mu(m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    const auto c = static_cast<std::size_t>(ex->basis()[i]);
    const Rational& v = ex->basic_values()[i];
    if (v == 0) continue;
    if (c < m)
      mu[c] = v;
    else if (c >= 2 * m)
      lambda[static_cast<int>(c - 2 * m)] = v;
  }
  out.status = LpStatus::Certified;
  out.certificate = to_certificate(sys, lambda, mu, false);
  if (!verify_certificate(sys, out.certificate).ok) throw std::logic_error("exact optimal certificate failed verification");
  return out;
}

void register_row_generator(const std::string& name, RowRegenerator fn) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(fn);
}

bool has_row_generator(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  return registry().count(name) != 0;
}

bool regenerate_and_match(const RationalSystem& sys, const std::string& row_id) {
  const LinearRow& row = sys.row(row_id);
  RowRegenerator fn;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(row.meta.generator);
    if (it == registry().end()) throw ProofError("unknown row generator " + row.meta.generator);
    fn = it->second;
  }
  LinearRow rebuilt;
  try {
    rebuilt = fn(row.meta);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return rebuilt.id == row.id && normalize_coeffs(rebuilt.coeffs) == row.coeffs && rebuilt.rhs == row.rhs &&
         rebuilt.meta == row.meta;
}

}  // namespace emc4
