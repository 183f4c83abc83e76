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

/**
 * \file lp.hpp
 * \brief Dense two-phase simplex for min c^T g s.t. A g = b, g >= 0.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dqvfi::lp {

struct CanonicalLP {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  /// Optional, one per column; used only in diagnostics.
  std::vector<std::string> names;

  Eigen::Index rows() const { return A.rows(); }
  Eigen::Index cols() const { return A.cols(); }

  /// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
  void validate() const;
};

enum class Status { optimal, infeasible, unbounded };

const char* to_string(Status s);

struct LPSolution {
  Eigen::VectorXd g;
  double objective{0.0};
  Status status{Status::infeasible};
  /// Basic column per kept constraint row. Rows found redundant in phase 1 are dropped.
  std::vector<Eigen::Index> basis;
  /// Multipliers y with B^T y = c_B (zero on dropped rows); b^T y equals the objective at optimality.
  Eigen::VectorXd dual;
  std::size_t pivots{0};
  bool used_bland{false};
  /// Solves from scratch that were needed; more than one means an accuracy retry happened.
  std::size_t attempts{1};
};

struct SolverOptions {
  double feasibility_tolerance{1e-9};
  double optimality_tolerance{1e-10};
  double pivot_tolerance{1e-9};
  /// Switch from largest-coefficient to Bland's rule after this many pivots per column.
  std::size_t bland_pivots_per_column{50};
  /// Hard cap on the total number of pivots, per column.
  std::size_t max_pivots_per_column{2000};
};

/// Raised when the solver loses accuracy: residual too large, or the pivot cap was hit.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// Deterministic: identical input yields identical output.
LPSolution solve(const CanonicalLP& lp, const SolverOptions& options = {});

/// Minimum-norm least-squares step J^+ rhs through a complete orthogonal decomposition.
Eigen::VectorXd pseudoinverse_step(const Eigen::MatrixXd& J, const Eigen::VectorXd& rhs);

/// Plain-text dump of (c, A, b) for cross-checking with external solvers.
void write_text(std::ostream& os, const CanonicalLP& lp);
void write_text(const std::string& path, const CanonicalLP& lp);
CanonicalLP read_text(std::istream& is);

}  // namespace dqvfi::lp
