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

#include "slti/realize.hpp"

#include <cmath>
#include <sstream>

#include "slti/errors.hpp"
#include "slti/numerics.hpp"

namespace slti {

StateSpaceSystem minimal_realization(const StateSpaceSystem& sys, const Tolerances& tol) {
  validate_system(sys);

  const StaircaseResult sc = controllability_staircase(sys.A, sys.B, tol);
  const Eigen::Index rc = sc.dim;
  const Eigen::MatrixXd ac = sc.A.bottomRightCorner(rc, rc);
  const Eigen::MatrixXd bc = sc.B.bottomRows(rc);
  const Eigen::MatrixXd cc = (sys.C * sc.T).rightCols(rc);

  const StaircaseResult so = observability_staircase(ac, cc, tol);
  const Eigen::Index ro = so.dim;

  StateSpaceSystem out;
  out.A = so.A.topLeftCorner(ro, ro);
  out.B = (so.T.transpose() * bc).topRows(ro);
  out.C = so.C.leftCols(ro);
  out.D = sys.D;
  out.output_index = sys.output_index;
  out.input_index = sys.input_index;
  return out;
}

namespace {

void check_matrix(const Eigen::MatrixXd& M, char tag, const StructuredPattern& p,
                  const Tolerances& tol, VerificationReport* report, Eigen::MatrixXd* certified) {
  const StructureCheck check = is_structured_matrix(M, p, tol);
  for (const auto& [i, j] : check.violations) {
    report->structured = false;
    report->violations.push_back({tag, i, j});
  }
  // Zero out the forbidden blocks that passed, so the certified copy carries
  // the pattern exactly.
  *certified = M;
  for (Eigen::Index i = 0; i < p.sparsity.size(); ++i) {
    for (Eigen::Index j = 0; j < p.sparsity.size(); ++j) {
      if (p.block_allowed(i, j)) continue;
      bool violated = false;
      for (const auto& [vi, vj] : check.violations) {
        if (vi == i && vj == j) violated = true;
      }
      if (violated) continue;
      certified->block(p.row_index.offset(i), p.col_index.offset(j), p.row_index.dim(i),
                       p.col_index.dim(j)).setZero();
    }
  }
}

}  // namespace

StructuredRealization verify_structured_realization(const StateSpaceSystem& sys,
                                                    const StructuredPattern& p,
                                                    const Tolerances& tol) {
  validate_system(sys);
  validate_pattern(p);
  if (!sys.state_index) {
    throw InputError("the candidate realization must carry a state index set");
  }
  if (sys.output_index != p.row_index || sys.input_index != p.col_index) {
    throw InputError("system index sets must match the pattern");
  }
  const IndexSet& n = *sys.state_index;
  if (n.blocks() != p.sparsity.size()) {
    throw InputError("state index set must have one block per node");
  }

  StructuredRealization out;
  out.pattern = p;
  out.sys = sys;
  out.report.structured = true;

  const StructuredPattern p_nn{p.sparsity, n, n};
  const StructuredPattern p_nm{p.sparsity, n, p.col_index};
  const StructuredPattern p_kn{p.sparsity, p.row_index, n};
  check_matrix(sys.A, 'A', p_nn, tol, &out.report, &out.sys.A);
  check_matrix(sys.B, 'B', p_nm, tol, &out.report, &out.sys.B);
  check_matrix(sys.C, 'C', p_kn, tol, &out.report, &out.sys.C);
  check_matrix(sys.D, 'D', p, tol, &out.report, &out.sys.D);

  out.report.stabilizable = true;
  out.report.detectable = true;
  for (Eigen::Index i = 0; i < n.blocks(); ++i) {
    if (n.dim(i) == 0) continue;
    const Eigen::MatrixXd a_ii = sys.A.block(n.offset(i), n.offset(i), n.dim(i), n.dim(i));
    const Eigen::MatrixXd b_ii =
        sys.B.block(n.offset(i), p.col_index.offset(i), n.dim(i), p.col_index.dim(i));
    const Eigen::MatrixXd c_ii =
        sys.C.block(p.row_index.offset(i), n.offset(i), p.row_index.dim(i), n.dim(i));
    NodePbh cert;
    cert.node = static_cast<int>(i);
    cert.stabilizable = pbh(a_ii, b_ii, PbhProperty::kStabilizable, tol);
    cert.detectable = pbh(a_ii, c_ii, PbhProperty::kDetectable, tol);
    out.report.stabilizable = out.report.stabilizable && cert.stabilizable.verdict;
    out.report.detectable = out.report.detectable && cert.detectable.verdict;
    out.report.pbh.push_back(std::move(cert));
  }
  out.report.accepted =
      out.report.structured && out.report.stabilizable && out.report.detectable;
  return out;
}

StructuredRealization realize_stable(const StateSpaceSystem& sys, const StructuredPattern& p,
                                     const Tolerances& tol) {
  validate_system(sys);
  validate_pattern(p);

  const StateSpaceSystem reduced = minimal_realization(sys, tol);
  if (reduced.order() > 0) {
    const auto eigs = eigenvalues(reduced.A);
    const auto& worst = eigs.back();
    if (worst.real() >= -tol.hurwitz_margin) {
      std::ostringstream os;
      os << "input is not stable: pole at " << worst.real();
      if (worst.imag() != 0.0) os << (worst.imag() < 0 ? "" : "+") << worst.imag() << "i";
      throw PreconditionError(os.str());
    }
  }
  const StructureCheck structure = is_structured_tf(sys, p, tol);
  if (!structure.ok) {
    std::ostringstream os;
    os << "input is not structured for the pattern; first violating block ("
       << structure.violations.front().first + 1 << "," << structure.violations.front().second + 1
       << ")";
    throw PreconditionError(os.str());
  }

  const Eigen::Index nodes = p.sparsity.size();
  const IndexSet& k = p.row_index;
  const IndexSet& m = p.col_index;

  // Minimal realization of each block column, then a block-diagonal stack.
  std::vector<StateSpaceSystem> columns;
  columns.reserve(static_cast<std::size_t>(nodes));
  std::vector<Eigen::Index> n_dims(static_cast<std::size_t>(nodes), 0);
  Eigen::Index n_total = 0;
  for (Eigen::Index j = 0; j < nodes; ++j) {
    StateSpaceSystem col;
    col.A = reduced.A;
    col.B = reduced.B.middleCols(m.offset(j), m.dim(j));
    col.C = reduced.C;
    col.D = reduced.D.middleCols(m.offset(j), m.dim(j));
    col.output_index = IndexSet::single(col.C.rows());
    col.input_index = IndexSet::single(col.B.cols());
    columns.push_back(minimal_realization(col, tol));
    n_dims[static_cast<std::size_t>(j)] = columns.back().order();
    n_total += columns.back().order();
  }

  StateSpaceSystem joint;
  joint.A = Eigen::MatrixXd::Zero(n_total, n_total);
  joint.B = Eigen::MatrixXd::Zero(n_total, m.total());
  joint.C = Eigen::MatrixXd::Zero(k.total(), n_total);
  joint.D = reduced.D;
  joint.output_index = k;
  joint.input_index = m;
  joint.state_index = IndexSet(n_dims);
  Eigen::Index off = 0;
  for (Eigen::Index j = 0; j < nodes; ++j) {
    const StateSpaceSystem& col = columns[static_cast<std::size_t>(j)];
    const Eigen::Index nj = col.order();
    joint.A.block(off, off, nj, nj) = col.A;
    joint.B.block(off, m.offset(j), nj, m.dim(j)) = col.B;
    joint.C.middleCols(off, nj) = col.C;
    off += nj;
  }

  return verify_structured_realization(joint, p, tol);
}

namespace {

// Applies the orthogonal transform T to the state range [off, off+len) of the
// full system matrices.
void apply_local_transform(const Eigen::MatrixXd& T, Eigen::Index off, Eigen::Index len,
                           Eigen::MatrixXd* A, Eigen::MatrixXd* B, Eigen::MatrixXd* C) {
  A->middleRows(off, len) = (T.transpose() * A->middleRows(off, len)).eval();
  A->middleCols(off, len) = (A->middleCols(off, len) * T).eval();
  B->middleRows(off, len) = (T.transpose() * B->middleRows(off, len)).eval();
  C->middleCols(off, len) = (C->middleCols(off, len) * T).eval();
}

}  // namespace

StructuredRealization realize_chain(const StateSpaceSystem& sys, const IndexSet& k,
                                    const IndexSet& m, const Tolerances& tol) {
  validate_system(sys);
  const Eigen::Index nodes = k.blocks();
  if (m.blocks() != nodes || nodes < 1) {
    throw InputError("output and input index sets must have one block per node");
  }
  if (k.total() != sys.n_outputs() || m.total() != sys.n_inputs()) {
    throw InputError("index set totals must match the system dimensions");
  }

  StructuredPattern chain{SparsityPattern::full_lower_triangular(nodes), k, m};
  StateSpaceSystem partitioned = sys;
  partitioned.output_index = k;
  partitioned.input_index = m;
  partitioned.state_index.reset();
  const StructureCheck structure = is_structured_tf(partitioned, chain, tol);
  if (!structure.ok) {
    std::ostringstream os;
    os << "input is not chain-structured; first violating block ("
       << structure.violations.front().first + 1 << "," << structure.violations.front().second + 1
       << ")";
    throw PreconditionError(os.str());
  }

  const StateSpaceSystem reduced = minimal_realization(partitioned, tol);
  Eigen::MatrixXd A = reduced.A;
  Eigen::MatrixXd B = reduced.B;
  Eigen::MatrixXd C = reduced.C;
  const Eigen::Index n_total = A.rows();
  const double b_scale = 1.0 + B.norm();

  std::vector<Eigen::Index> n_dims(static_cast<std::size_t>(nodes), 0);
  Eigen::Index assigned = 0;
  for (Eigen::Index i = 0; i + 1 < nodes; ++i) {
    const Eigen::Index n_rem = n_total - assigned;
    if (n_rem == 0) break;
    const Eigen::Index later_off = m.offset(i) + m.dim(i);
    const Eigen::Index later_width = m.total() - later_off;

    // Split off the states observable from node i's outputs; the transfer
    // from later inputs to those outputs is zero, so none of them can be
    // reachable from the later inputs.
    const Eigen::MatrixXd c_node =
        C.block(k.offset(i), assigned, k.dim(i), n_rem);
    const StaircaseResult so =
        observability_staircase(A.block(assigned, assigned, n_rem, n_rem), c_node, tol);
    apply_local_transform(so.T, assigned, n_rem, &A, &B, &C);
    A.block(assigned, assigned, n_rem, n_rem) = so.A;
    C.block(k.offset(i), assigned, k.dim(i), n_rem) = so.C;
    const Eigen::Index ro = so.dim;
    auto reach_obs = B.block(assigned, later_off, ro, later_width);
    if (reach_obs.size() > 0) {
      if (reach_obs.cwiseAbs().maxCoeff() > 1e-7 * b_scale) {
        throw SolverError(
            "chain decomposition failed: states observable from an earlier node are reachable "
            "from later inputs");
      }
      reach_obs.setZero();
    }

    // Controllability split of the unobservable part: its unreachable block
    // also belongs to node i, the reachable remainder recurses.
    const Eigen::Index n_ob = n_rem - ro;
    const StaircaseResult sc = controllability_staircase(
        A.block(assigned + ro, assigned + ro, n_ob, n_ob),
        B.block(assigned + ro, later_off, n_ob, later_width), tol);
    apply_local_transform(sc.T, assigned + ro, n_ob, &A, &B, &C);
    A.block(assigned + ro, assigned + ro, n_ob, n_ob) = sc.A;
    B.block(assigned + ro, later_off, n_ob, later_width) = sc.B;

    n_dims[static_cast<std::size_t>(i)] = ro + (n_ob - sc.dim);
    assigned += n_dims[static_cast<std::size_t>(i)];
  }
  n_dims[static_cast<std::size_t>(nodes - 1)] = n_total - assigned;

  StateSpaceSystem out;
  out.A = A;
  out.B = B;
  out.C = C;
  out.D = reduced.D;
  out.output_index = k;
  out.input_index = m;
  out.state_index = IndexSet(n_dims);
  return verify_structured_realization(out, chain, tol);
}

}  // namespace slti
