// Copyright 2026 The slti Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SLTI_SYSTEM_HPP_
#define SLTI_SYSTEM_HPP_

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "slti/graph.hpp"
#include "slti/tolerances.hpp"

namespace slti {

/// Per-node block dimensions partitioning an input, output, or state vector.
/// Entries may be zero; the support is the set of nodes with nonzero dims.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<Eigen::Index> dims);

  /// Single block of the given total dimension.
  static IndexSet single(Eigen::Index total);
  /// N blocks, all zero-dimensional.
  static IndexSet zeros(Eigen::Index n_nodes);

  Eigen::Index blocks() const { return static_cast<Eigen::Index>(dims_.size()); }
  Eigen::Index dim(Eigen::Index i) const { return dims_[static_cast<std::size_t>(i)]; }
  Eigen::Index offset(Eigen::Index i) const { return offsets_[static_cast<std::size_t>(i)]; }
  Eigen::Index total() const { return total_; }
  const std::vector<Eigen::Index>& dims() const { return dims_; }
  std::vector<Eigen::Index> support() const;

  bool operator==(const IndexSet& other) const { return dims_ == other.dims_; }
  bool operator!=(const IndexSet& other) const { return !(*this == other); }

 private:
  std::vector<Eigen::Index> dims_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index total_ = 0;
};

/// The sparsity constraint applied to block matrices: block (i,j) of a
/// row_index x col_index partitioned matrix may be nonzero only when the
/// pattern admits an edge j -> i.
struct StructuredPattern {
  SparsityPattern sparsity{1};
  IndexSet row_index;
  IndexSet col_index;

  bool block_allowed(Eigen::Index i, Eigen::Index j) const { return sparsity.at(i, j); }
};

/// Throws InputError unless the pattern's index sets both span the pattern's
/// node count.
void validate_pattern(const StructuredPattern& p);

/// State-space system dx = Ax + Bu, y = Cx + Du with per-node partitions of
/// inputs and outputs.  state_index is populated only when the states carry a
/// per-node assignment (structured realizations).
struct StateSpaceSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::MatrixXd D;
  IndexSet output_index;  // k
  IndexSet input_index;   // m
  std::optional<IndexSet> state_index;

  Eigen::Index order() const { return A.rows(); }
  Eigen::Index n_inputs() const { return B.cols(); }
  Eigen::Index n_outputs() const { return C.rows(); }
};

/// Throws InputError on dimension mismatch, non-finite entries, or index-set
/// totals that disagree with the matrices.
void validate_system(const StateSpaceSystem& sys);

/// One scalar rational block entry, coefficients highest degree first.
struct TransferEntry {
  Eigen::Index row = 0;  // block row, 0-based
  Eigen::Index col = 0;  // block column, 0-based
  std::vector<double> num;
  std::vector<double> den;
};

/// Transfer matrix given entrywise; blocks carrying an entry must be scalar
/// (row dim and col dim 1).  Blocks without an entry are zero.
struct TransferSpec {
  std::vector<TransferEntry> entries;
  IndexSet output_index;  // k
  IndexSet input_index;   // m
};

/// Verdict of a block-sparsity check with the offending block coordinates.
struct StructureCheck {
  bool ok = true;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> violations;
};

/// Copy of block (i,j) of M under the given row/column partitions.
Eigen::MatrixXd block_of(const Eigen::MatrixXd& M, const IndexSet& rows, const IndexSet& cols,
                         Eigen::Index i, Eigen::Index j);

/// True iff every forbidden block of M is entrywise below the rank_tol floor.
StructureCheck is_structured_matrix(const Eigen::MatrixXd& M, const StructuredPattern& p,
                                    const Tolerances& tol = {});

/// Realizes a TransferSpec by stacking controllable-canonical realizations of
/// the scalar entries, column block by column block.  States are assigned to
/// the column's node, so state_index is populated.  No minimality or
/// stabilizability guarantee.  Throws InputError for improper entries, zero
/// denominators, out-of-range blocks, or entries on non-scalar blocks.
StateSpaceSystem tf_to_ss(const TransferSpec& spec);

/// D + C (sI - A)^{-1} B.  Throws PreconditionError when s is within 1e-10 of
/// an eigenvalue of A, reporting the nearest eigenvalue.
Eigen::MatrixXcd evaluate(const StateSpaceSystem& sys, std::complex<double> s);

/// Transfer-matrix equality by evaluation on a deterministic probe line
/// Re s = 1 + max(0, spectral abscissae), at fixed frequencies plus seeded
/// extras; the probe count always exceeds twice the combined state dimension.
bool systems_equal(const StateSpaceSystem& sys1, const StateSpaceSystem& sys2,
                   const Tolerances& tol = {});

/// True iff every forbidden block's transfer function is identically zero:
/// feedthrough below the rank_tol floor and probe evaluations below match_tol.
StructureCheck is_structured_tf(const StateSpaceSystem& sys, const StructuredPattern& p,
                                const Tolerances& tol = {});

/// Cascade realization of sys1 * sys2 (sys2 feeds sys1).
StateSpaceSystem series(const StateSpaceSystem& sys1, const StateSpaceSystem& sys2);

/// Sum realization of sys1 + sys2.
StateSpaceSystem parallel(const StateSpaceSystem& sys1, const StateSpaceSystem& sys2);

/// alpha * sys.
StateSpaceSystem scale(const StateSpaceSystem& sys, double alpha);

/// Static system y = Du with the given partitions.
StateSpaceSystem static_gain(const Eigen::MatrixXd& D, const IndexSet& output_index,
                             const IndexSet& input_index);

/// Zero system of the given shape.
StateSpaceSystem zero_system(const IndexSet& output_index, const IndexSet& input_index);

}  // namespace slti

#endif  // SLTI_SYSTEM_HPP_
