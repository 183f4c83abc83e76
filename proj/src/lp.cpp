/*
 * Copyright 2026 The dqvfi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dqvfi/lp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace dqvfi::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "unknown";
}

void CanonicalLP::validate() const {
  if (c.size() != A.cols()) throw std::invalid_argument("CanonicalLP: cost length does not match column count");
  if (b.size() != A.rows()) throw std::invalid_argument("CanonicalLP: rhs length does not match row count");
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != A.cols())
    throw std::invalid_argument("CanonicalLP: one name per column is required");
  if (!c.allFinite() || !A.allFinite() || !b.allFinite())
    throw std::invalid_argument("CanonicalLP: non-finite entries");
}

namespace {

double condition_of(const Eigen::MatrixXd& B) {
  if (B.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

// Dense tableau over the structural columns plus one artificial per row.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const SolverOptions& options)
      : m_(A.rows()), n_(A.cols()), options_(options) {
    T_ = Eigen::MatrixXd::Zero(m_, n_ + m_ + 1);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      T_.row(i).head(n_) = sign * A.row(i);
      T_(i, n_ + i) = 1.0;
      T_(i, n_ + m_) = sign * b[i];
    }
    original_ = T_.leftCols(n_ + m_);
    original_rhs_ = T_.col(n_ + m_);
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
    row_active_.assign(static_cast<std::size_t>(m_), true);
    bland_threshold_ = options.bland_pivots_per_column * static_cast<std::size_t>(std::max<Eigen::Index>(n_, 1));
    pivot_cap_ = options.max_pivots_per_column * static_cast<std::size_t>(std::max<Eigen::Index>(n_ + m_, 1));
  }

  /// Loads reduced costs for `cost` (length n + m) against the current basis.
  void set_cost(const Eigen::VectorXd& cost) {
    cost_ = cost;
    obj_ = Eigen::RowVectorXd::Zero(n_ + m_ + 1);
    obj_.head(n_ + m_) = cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!row_active_[static_cast<std::size_t>(i)]) continue;
      const double cb = cost[basis_[static_cast<std::size_t>(i)]];
      if (cb != 0.0) obj_ -= cb * T_.row(i);
    }
  }

  /// Runs pivots until optimal or unbounded. Columns >= allowed_cols never enter.
  Status iterate(Eigen::Index allowed_cols) {
    bool fresh = false;
    for (;;) {
      if (pivots_ - last_refactor_ >= kRefactorInterval) fresh = refactor();
      const bool bland = pivots_ >= bland_threshold_;
      if (bland) used_bland_ = true;
      Eigen::Index enter = -1;
      double best = -options_.optimality_tolerance;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (obj_[j] < best) {
          enter = j;
          if (bland) break;
          best = obj_[j];
        }
      }
      if (enter < 0) {
        // Confirm optimality on a freshly rebuilt tableau.
        if (fresh || !refactor()) return Status::optimal;
        fresh = true;
        continue;
      }
      fresh = false;

      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!row_active_[static_cast<std::size_t>(i)]) continue;
        const double a = T_(i, enter);
        if (a <= options_.pivot_tolerance) continue;
        const double ratio = T_(i, n_ + m_) / a;
        if (ratio < best_ratio ||
            (ratio == best_ratio && leave >= 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return Status::unbounded;
      if (!bland) {
        // Among near-ties prefer the largest pivot element.
        const double slack = 1e-12 * (1.0 + std::abs(best_ratio));
        for (Eigen::Index i = 0; i < m_; ++i) {
          if (!row_active_[static_cast<std::size_t>(i)]) continue;
          const double a = T_(i, enter);
          if (a <= options_.pivot_tolerance) continue;
          if (T_(i, n_ + m_) / a <= best_ratio + slack && a > T_(leave, enter)) leave = i;
        }
      }
      pivot(leave, enter);
      if (pivots_ > pivot_cap_) throw NumericalError("simplex: pivot limit reached", condition_estimate());
    }
  }

  void pivot(Eigen::Index r, Eigen::Index col) {
    T_.row(r) /= T_(r, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == r || !row_active_[static_cast<std::size_t>(i)]) continue;
      const double f = T_(i, col);
      if (f != 0.0) T_.row(i) -= f * T_.row(r);
    }
    const double f = obj_[col];
    if (f != 0.0) obj_ -= f * T_.row(r);
    basis_[static_cast<std::size_t>(r)] = col;
    ++pivots_;
  }

  /// After phase 1: pivot zero-level artificials out, or drop their rows as redundant.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index col = -1;
      double best = options_.pivot_tolerance;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(T_(i, j)) > best) {
          best = std::abs(T_(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        row_active_[static_cast<std::size_t>(i)] = false;
      }
    }
  }

  /// Rebuilds the active rows as B^-1 [A | b] from the original data. False if B is singular.
  bool refactor() {
    last_refactor_ = pivots_;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (row_active_[static_cast<std::size_t>(i)]) rows.push_back(i);
    const auto k = static_cast<Eigen::Index>(rows.size());
    if (k == 0) return false;
    Eigen::MatrixXd B(k, k), rhs(k, n_ + m_ + 1);
    for (Eigen::Index r = 0; r < k; ++r) {
      const Eigen::Index i = rows[static_cast<std::size_t>(r)];
      rhs.row(r).head(n_ + m_) = original_.row(i);
      rhs(r, n_ + m_) = original_rhs_[i];
      for (Eigen::Index c = 0; c < k; ++c) B(r, c) = original_(i, basis_[static_cast<std::size_t>(rows[static_cast<std::size_t>(c)])]);
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) return false;
    const Eigen::MatrixXd fresh = lu.solve(rhs);
    if (!fresh.allFinite()) return false;
    for (Eigen::Index r = 0; r < k; ++r) {
      Eigen::RowVectorXd row = fresh.row(r);
      // basic variables sitting at a round-off negative value are snapped to zero
      if (row[n_ + m_] < 0.0 && row[n_ + m_] > -options_.feasibility_tolerance) row[n_ + m_] = 0.0;
      T_.row(rows[static_cast<std::size_t>(r)]) = row;
    }
    set_cost(cost_);
    return true;
  }

  double objective_value() const { return -obj_[n_ + m_]; }
  double rhs(Eigen::Index i) const { return T_(i, n_ + m_); }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  bool active(Eigen::Index i) const { return row_active_[static_cast<std::size_t>(i)]; }
  std::size_t pivots() const { return pivots_; }
  bool used_bland() const { return used_bland_; }

  double condition_estimate() const;

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  SolverOptions options_;
  Eigen::MatrixXd T_;
  Eigen::MatrixXd original_;
  Eigen::VectorXd original_rhs_;
  Eigen::VectorXd cost_;
  std::size_t last_refactor_{0};
  static constexpr std::size_t kRefactorInterval = 25;
  Eigen::RowVectorXd obj_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> row_active_;
  std::size_t pivots_{0};
  std::size_t bland_threshold_{0};
  std::size_t pivot_cap_{0};
  bool used_bland_{false};
};

double Tableau::condition_estimate() const {
  Eigen::MatrixXd B(m_, m_);
  for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = original_.col(basis_[static_cast<std::size_t>(i)]);
  return condition_of(B);
}

}  // namespace

namespace {

LPSolution solve_once(const CanonicalLP& lp, const SolverOptions& options) {
  const Eigen::Index m = lp.rows();
  const Eigen::Index n = lp.cols();

  LPSolution sol;
  sol.g = Eigen::VectorXd::Zero(n);
  sol.dual = Eigen::VectorXd::Zero(m);

  if (m == 0) {
    // Only g >= 0 constrains; optimal at 0 unless some cost is negative.
    sol.status = (lp.c.array() < 0.0).any() ? Status::unbounded : Status::optimal;
    return sol;
  }

  Tableau tab(lp.A, lp.b, options);

  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  tab.set_cost(phase1_cost);
  tab.iterate(n + m);
  if (tab.objective_value() > options.feasibility_tolerance) {
    sol.status = Status::infeasible;
    sol.pivots = tab.pivots();
    return sol;
  }
  tab.expel_artificials();

  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(n + m);
  phase2_cost.head(n) = lp.c;
  tab.set_cost(phase2_cost);
  const Status status = tab.iterate(n);
  sol.pivots = tab.pivots();
  sol.used_bland = tab.used_bland();
  if (status == Status::unbounded) {
    sol.status = Status::unbounded;
    return sol;
  }

  // Recover the basic solution from the original data for accuracy.
  std::vector<Eigen::Index> kept_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!tab.active(i)) continue;
    kept_rows.push_back(i);
    sol.basis.push_back(tab.basis()[static_cast<std::size_t>(i)]);
  }
  const auto k = static_cast<Eigen::Index>(kept_rows.size());
  Eigen::MatrixXd B(k, k);
  Eigen::VectorXd bk(k);
  Eigen::VectorXd cB(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    bk[r] = lp.b[kept_rows[static_cast<std::size_t>(r)]];
    for (Eigen::Index c = 0; c < k; ++c) B(r, c) = lp.A(kept_rows[static_cast<std::size_t>(r)], sol.basis[static_cast<std::size_t>(c)]);
    cB[r] = lp.c[sol.basis[static_cast<std::size_t>(r)]];
  }

  Eigen::VectorXd xB(k);
  Eigen::VectorXd y_kept = Eigen::VectorXd::Zero(k);
  bool refined = false;
  if (k > 0) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    xB = lu.solve(bk);
    y_kept = lu.transpose().solve(cB);
    refined = xB.allFinite() && xB.minCoeff() >= -options.feasibility_tolerance;
  }
  if (!refined) {
    for (Eigen::Index r = 0; r < k; ++r) xB[r] = tab.rhs(kept_rows[static_cast<std::size_t>(r)]);
  }
  for (Eigen::Index r = 0; r < k; ++r) sol.g[sol.basis[static_cast<std::size_t>(r)]] = std::max(0.0, xB[r]);
  for (Eigen::Index r = 0; r < k; ++r) sol.dual[kept_rows[static_cast<std::size_t>(r)]] = y_kept[r];

  const double residual = (lp.A * sol.g - lp.b).lpNorm<Eigen::Infinity>();
  const double bnorm = lp.b.size() ? lp.b.lpNorm<Eigen::Infinity>() : 0.0;
  if (!(residual <= 1e-8 * (1.0 + bnorm))) {
    std::ostringstream msg;
    msg << "simplex: residual " << residual << " exceeds tolerance";
    throw NumericalError(msg.str(), condition_of(B));
  }

  sol.objective = lp.c.dot(sol.g);
  sol.status = Status::optimal;
  return sol;
}

}  // namespace

LPSolution solve(const CanonicalLP& lp, const SolverOptions& options) {
  lp.validate();
  // Degenerate steps through badly conditioned bases occasionally leave the final basis slightly
  // infeasible. Retry from scratch with a fixed sequence of pivot rules; the sequence is deterministic.
  std::vector<SolverOptions> attempts;
  for (double tol : {options.pivot_tolerance, 1e-9, 1e-7}) {
    SolverOptions o = options;
    o.pivot_tolerance = tol;
    attempts.push_back(o);
    o.bland_pivots_per_column = 0;
    attempts.push_back(o);
  }
  for (std::size_t i = 0;; ++i) {
    try {
      LPSolution sol = solve_once(lp, attempts[i]);
      sol.attempts = i + 1;
      return sol;
    } catch (const NumericalError&) {
      if (i + 1 == attempts.size()) throw;
    }
  }
}

Eigen::VectorXd pseudoinverse_step(const Eigen::MatrixXd& J, const Eigen::VectorXd& rhs) {
  if (J.rows() != rhs.size()) throw std::invalid_argument("pseudoinverse_step: dimension mismatch");
  if (J.size() == 0 || J.isZero(0.0)) return Eigen::VectorXd::Zero(J.cols());
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
  return cod.solve(rhs);
}

void write_text(std::ostream& os, const CanonicalLP& lp) {
  lp.validate();
  os << "# canonical LP: min c'g s.t. A g = b, g >= 0\n";
  os << lp.rows() << ' ' << lp.cols() << '\n';
  os << std::setprecision(17);
  const auto write_row = [&os](const auto& v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) os << (j ? " " : "") << v[j];
    os << '\n';
  };
  os << "c\n";
  write_row(lp.c);
  os << "A\n";
  for (Eigen::Index i = 0; i < lp.rows(); ++i) write_row(Eigen::RowVectorXd(lp.A.row(i)));
  os << "b\n";
  write_row(lp.b);
}

void write_text(const std::string& path, const CanonicalLP& lp) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_text: cannot open " + path);
  write_text(out, lp);
  if (!out) throw std::runtime_error("write_text: write failed for " + path);
}

CanonicalLP read_text(std::istream& is) {
  std::string line;
  do {
    if (!std::getline(is, line)) throw std::runtime_error("read_text: missing header");
  } while (line.empty() || line[0] == '#');
  std::istringstream header(line);
  Eigen::Index rows = 0, cols = 0;
  if (!(header >> rows >> cols) || rows < 0 || cols < 0) throw std::runtime_error("read_text: bad dimensions");

  const auto expect = [&is](const char* tag) {
    std::string t;
    if (!(is >> t) || t != tag) throw std::runtime_error(std::string("read_text: expected section ") + tag);
  };
  const auto read_value = [&is]() {
    double v = 0.0;
    if (!(is >> v)) throw std::runtime_error("read_text: truncated data");
    return v;
  };
  CanonicalLP lp;
  lp.c.resize(cols);
  lp.A.resize(rows, cols);
  lp.b.resize(rows);
  expect("c");
  for (Eigen::Index j = 0; j < cols; ++j) lp.c[j] = read_value();
  expect("A");
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) lp.A(i, j) = read_value();
  expect("b");
  for (Eigen::Index i = 0; i < rows; ++i) lp.b[i] = read_value();
  return lp;
}

}  // namespace dqvfi::lp
