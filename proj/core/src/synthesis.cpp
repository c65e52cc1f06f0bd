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

#include "slti/synthesis.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "slti/errors.hpp"
#include "slti/numerics.hpp"

namespace slti {
namespace {

struct DiagonalBlocks {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
};

DiagonalBlocks node_blocks(const StateSpaceSystem& sys, const StructuredPattern& p,
                           Eigen::Index i) {
  const IndexSet& n = *sys.state_index;
  DiagonalBlocks out;
  out.A = block_of(sys.A, n, n, i, i);
  out.B = block_of(sys.B, n, p.col_index, i, i);
  out.C = block_of(sys.C, p.row_index, n, i, i);
  return out;
}

}  // namespace

SynthesisReport structured_stabilizability_test(const StructuredRealization& R,
                                                const Tolerances& tol) {
  if (!R.sys.state_index) {
    throw InputError("the candidate realization must carry a state index set");
  }
  // Only the sparsity part is a precondition here; the per-node PBH verdict
  // is this function's output, so a rejected-but-structured candidate is a
  // legitimate query.
  if (!R.report.structured) {
    throw PreconditionError("the candidate realization does not carry the pattern");
  }
  const IndexSet& n = *R.sys.state_index;

  SynthesisReport out;
  out.verdict = Verdict::kStabilizable;
  for (Eigen::Index i = 0; i < n.blocks(); ++i) {
    if (n.dim(i) == 0) continue;
    const DiagonalBlocks blk = node_blocks(R.sys, R.pattern, i);
    NodeCertificates cert;
    cert.node = i;
    cert.stabilizable = pbh(blk.A, blk.B, PbhProperty::kStabilizable, tol);
    cert.detectable = pbh(blk.A, blk.C, PbhProperty::kDetectable, tol);
    if (!cert.stabilizable.verdict || !cert.detectable.verdict) {
      out.verdict = Verdict::kNotStabilizable;
      out.node_failures.push_back(std::move(cert));
    }
  }
  return out;
}

namespace {

GainSchedule assemble_schedule(const StructuredRealization& R,
                               std::vector<Eigen::MatrixXd> F_blocks,
                               std::vector<Eigen::MatrixXd> L_blocks) {
  const IndexSet& n = *R.sys.state_index;
  const IndexSet& k = R.pattern.row_index;
  const IndexSet& m = R.pattern.col_index;

  GainSchedule out;
  out.F_blocks = std::move(F_blocks);
  out.L_blocks = std::move(L_blocks);
  out.F_d = Eigen::MatrixXd::Zero(m.total(), n.total());
  out.L_d = Eigen::MatrixXd::Zero(n.total(), k.total());
  for (Eigen::Index i = 0; i < n.blocks(); ++i) {
    out.F_d.block(m.offset(i), n.offset(i), m.dim(i), n.dim(i)) =
        out.F_blocks[static_cast<std::size_t>(i)];
    out.L_d.block(n.offset(i), k.offset(i), n.dim(i), k.dim(i)) =
        out.L_blocks[static_cast<std::size_t>(i)];
  }
  return out;
}

StateSpaceSystem nominal_controller(const StructuredRealization& R, const GainSchedule& gains) {
  const StateSpaceSystem& g = R.sys;
  StateSpaceSystem K;
  K.A = g.A + g.B * gains.F_d + gains.L_d * g.C + gains.L_d * g.D * gains.F_d;
  K.B = -gains.L_d;
  K.C = gains.F_d;
  K.D = Eigen::MatrixXd::Zero(R.pattern.col_index.total(), R.pattern.row_index.total());
  K.output_index = R.pattern.col_index;
  K.input_index = R.pattern.row_index;
  K.state_index = g.state_index;
  return K;
}

StructuredPattern controller_pattern(const StructuredPattern& plant) {
  return StructuredPattern{plant.sparsity, plant.col_index, plant.row_index};
}

}  // namespace

K0Result synthesize_k0(const StructuredRealization& R, const Tolerances& tol) {
  const SynthesisReport test = structured_stabilizability_test(R, tol);
  if (test.verdict != Verdict::kStabilizable) {
    std::ostringstream os;
    os << "plant is not structured-stabilizable; failing node(s):";
    for (const auto& f : test.node_failures) os << " " << f.node + 1;
    throw SynthesisError(os.str());
  }

  const IndexSet& n = *R.sys.state_index;
  std::vector<Eigen::MatrixXd> F_blocks(static_cast<std::size_t>(n.blocks()));
  std::vector<Eigen::MatrixXd> L_blocks(static_cast<std::size_t>(n.blocks()));
  for (Eigen::Index i = 0; i < n.blocks(); ++i) {
    const DiagonalBlocks blk = node_blocks(R.sys, R.pattern, i);
    F_blocks[static_cast<std::size_t>(i)] = stabilizing_gain(blk.A, blk.B, tol);
    L_blocks[static_cast<std::size_t>(i)] =
        stabilizing_gain(blk.A.transpose(), blk.C.transpose(), tol).transpose();
  }

  K0Result out;
  out.gains = assemble_schedule(R, std::move(F_blocks), std::move(L_blocks));
  const StateSpaceSystem K = nominal_controller(R, out.gains);
  out.controller = verify_structured_realization(K, controller_pattern(R.pattern), tol);
  out.loop = internal_stability_ss(R.sys, out.controller.sys, tol);
  return out;
}

YoulaGenerator build_youla_generator(const StructuredRealization& R, const GainSchedule& gains,
                                     const Tolerances& tol) {
  if (!R.accepted()) {
    throw PreconditionError("the plant is not an accepted structured realization");
  }
  const IndexSet& n = *R.sys.state_index;
  const IndexSet& k = R.pattern.row_index;
  const IndexSet& m = R.pattern.col_index;
  if (gains.F_blocks.size() != static_cast<std::size_t>(n.blocks()) ||
      gains.L_blocks.size() != static_cast<std::size_t>(n.blocks())) {
    throw InputError("gain schedule must have one block per node");
  }
  for (Eigen::Index i = 0; i < n.blocks(); ++i) {
    const Eigen::MatrixXd& F = gains.F_blocks[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd& L = gains.L_blocks[static_cast<std::size_t>(i)];
    if (F.rows() != m.dim(i) || F.cols() != n.dim(i) || L.rows() != n.dim(i) ||
        L.cols() != k.dim(i)) {
      std::ostringstream os;
      os << "gain blocks for node " << i + 1 << " have the wrong shape";
      throw InputError(os.str());
    }
    if (n.dim(i) == 0) continue;
    const DiagonalBlocks blk = node_blocks(R.sys, R.pattern, i);
    if (spectral_abscissa(blk.A + blk.B * F) >= -tol.hurwitz_margin ||
        spectral_abscissa(blk.A + L * blk.C) >= -tol.hurwitz_margin) {
      std::ostringstream os;
      os << "gain blocks for node " << i + 1 << " do not stabilize the diagonal subsystem";
      throw InputError(os.str());
    }
  }

  YoulaGenerator out;
  out.plant = R.sys;
  out.pattern = R.pattern;
  out.gains = assemble_schedule(R, gains.F_blocks, gains.L_blocks);

  const StateSpaceSystem& g = R.sys;
  const Eigen::MatrixXd& F_d = out.gains.F_d;
  const Eigen::MatrixXd& L_d = out.gains.L_d;
  const Eigen::Index nt = n.total();
  const Eigen::Index kt = k.total();
  const Eigen::Index mt = m.total();

  StateSpaceSystem J;
  J.A = g.A + g.B * F_d + L_d * g.C + L_d * g.D * F_d;
  J.B = Eigen::MatrixXd(nt, kt + mt);
  J.B.leftCols(kt) = -L_d;
  J.B.rightCols(mt) = g.B + L_d * g.D;
  J.C = Eigen::MatrixXd(mt + kt, nt);
  J.C.topRows(mt) = F_d;
  J.C.bottomRows(kt) = -(g.C + g.D * F_d);
  J.D = Eigen::MatrixXd::Zero(mt + kt, kt + mt);
  J.D.topRightCorner(mt, mt) = Eigen::MatrixXd::Identity(mt, mt);
  J.D.bottomLeftCorner(kt, kt) = Eigen::MatrixXd::Identity(kt, kt);
  J.D.bottomRightCorner(kt, mt) = -g.D;
  J.output_index = IndexSet({mt, kt});
  J.input_index = IndexSet({kt, mt});
  out.J = J;

  const StructuredPattern p_nn{R.pattern.sparsity, n, n};
  const StructuredPattern p_nk{R.pattern.sparsity, n, k};
  const StructuredPattern p_nm{R.pattern.sparsity, n, m};
  const StructuredPattern p_mn{R.pattern.sparsity, m, n};
  const StructuredPattern p_kn{R.pattern.sparsity, k, n};
  const StructuredPattern p_km{R.pattern.sparsity, k, m};
  if (!is_structured_matrix(J.A, p_nn, tol).ok ||
      !is_structured_matrix(Eigen::MatrixXd(-L_d), p_nk, tol).ok ||
      !is_structured_matrix(Eigen::MatrixXd(g.B + L_d * g.D), p_nm, tol).ok ||
      !is_structured_matrix(F_d, p_mn, tol).ok ||
      !is_structured_matrix(Eigen::MatrixXd(g.C + g.D * F_d), p_kn, tol).ok ||
      !is_structured_matrix(g.D, p_km, tol).ok) {
    throw SolverError("generator sub-blocks are not structured");
  }
  return out;
}

StructuredRealization close_lft(const YoulaGenerator& gen, const StateSpaceSystem& Q,
                                const Tolerances& tol, double* identity_residual) {
  validate_system(Q);
  const StateSpaceSystem& g = gen.plant;
  const IndexSet& n = *g.state_index;
  const IndexSet& k = gen.pattern.row_index;
  const IndexSet& m = gen.pattern.col_index;
  if (Q.n_outputs() != m.total() || Q.n_inputs() != k.total()) {
    throw InputError("parameter dimensions must match the controller shape");
  }

  StateSpaceSystem qp = Q;
  qp.output_index = m;
  qp.input_index = k;
  qp.state_index.reset();
  const StateSpaceSystem qmin = minimal_realization(qp, tol);
  if (qmin.order() > 0) {
    const auto worst = eigenvalues(qmin.A).back();
    if (worst.real() >= -tol.hurwitz_margin) {
      std::ostringstream os;
      os << "parameter is not stable: pole at " << worst.real();
      if (worst.imag() != 0.0) os << (worst.imag() < 0 ? "" : "+") << worst.imag() << "i";
      throw PreconditionError(os.str());
    }
  }
  const StructuredPattern p_q = controller_pattern(gen.pattern);
  const StructureCheck q_structure = is_structured_tf(qp, p_q, tol);
  if (!q_structure.ok) {
    throw PreconditionError("parameter is not structured like the controller");
  }
  {
    const Eigen::Index kt = k.total();
    const Eigen::MatrixXd W = Eigen::MatrixXd::Identity(kt, kt) + g.D * Q.D;
    if (kt > 0) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(W);
      const auto& sigma = svd.singularValues();
      if (sigma(sigma.size() - 1) <= tol.rank_cutoff(sigma(0))) {
        throw PreconditionError("loop is ill posed: I + D Q(inf) is numerically singular");
      }
    }
  }

  const StructuredRealization sq = realize_stable(qp, p_q, tol);
  if (!sq.accepted()) {
    throw SolverError("failed to produce a structured realization of the parameter");
  }
  const StateSpaceSystem& q = sq.sys;
  const IndexSet& nq = *q.state_index;

  const Eigen::MatrixXd& F_d = gen.gains.F_d;
  const Eigen::MatrixXd& L_d = gen.gains.L_d;
  const Eigen::Index nt = n.total();
  const Eigen::Index nqt = nq.total();
  const Eigen::Index mt = m.total();
  const Eigen::Index kt = k.total();

  const Eigen::MatrixXd U =
      (Eigen::MatrixXd::Identity(mt, mt) + q.D * g.D).inverse();
  const Eigen::MatrixXd V =
      (Eigen::MatrixXd::Identity(kt, kt) + g.D * q.D).inverse();
  const Eigen::MatrixXd Bt = g.B + L_d * g.D;
  const Eigen::MatrixXd Ct = g.C + g.D * F_d;
  const Eigen::MatrixXd& A_J = gen.J.A;

  Eigen::MatrixXd A_hat(nt + nqt, nt + nqt);
  A_hat.topLeftCorner(nt, nt) = A_J - Bt * U * q.D * Ct;
  A_hat.topRightCorner(nt, nqt) = Bt * U * q.C;
  A_hat.bottomLeftCorner(nqt, nt) = -q.B * V * Ct;
  A_hat.bottomRightCorner(nqt, nqt) = q.A - q.B * V * g.D * q.C;

  Eigen::MatrixXd B_hat(nt + nqt, kt);
  B_hat.topRows(nt) = -L_d + Bt * U * q.D;
  B_hat.bottomRows(nqt) = q.B * V;

  Eigen::MatrixXd C_hat(mt, nt + nqt);
  C_hat.leftCols(nt) = F_d - U * q.D * Ct;
  C_hat.rightCols(nqt) = U * q.C;

  const Eigen::MatrixXd D_hat = U * q.D;

  // The closure identity behind closed-loop stability: feeding the plant
  // output map back through the controller must reduce the joint dynamics to
  // a block-triangular matrix with the nominal loop and the parameter on the
  // diagonal.
  Eigen::MatrixXd outputs(kt, nt + nqt);
  outputs.leftCols(nt) = Ct;
  outputs.rightCols(nqt) = g.D * q.C;
  Eigen::MatrixXd target = Eigen::MatrixXd::Zero(nt + nqt, nt + nqt);
  target.topLeftCorner(nt, nt) = g.A + g.B * F_d;
  target.topRightCorner(nt, nqt) = g.B * q.C;
  target.bottomRightCorner(nqt, nqt) = q.A;
  const double residual = (A_hat + B_hat * outputs - target).norm();
  if (identity_residual != nullptr) *identity_residual = residual;
  if (residual > 1e-8) {
    std::ostringstream os;
    os << "closure identity residual " << residual << " exceeds 1e-8";
    throw SolverError(os.str());
  }

  // Interleave the generator and parameter states node by node so the state
  // partition of the controller lines up with the graph.
  std::vector<Eigen::Index> order;
  std::vector<Eigen::Index> n_dims(static_cast<std::size_t>(n.blocks()), 0);
  order.reserve(static_cast<std::size_t>(nt + nqt));
  for (Eigen::Index i = 0; i < n.blocks(); ++i) {
    for (Eigen::Index t = 0; t < n.dim(i); ++t) order.push_back(n.offset(i) + t);
    for (Eigen::Index t = 0; t < nq.dim(i); ++t) order.push_back(nt + nq.offset(i) + t);
    n_dims[static_cast<std::size_t>(i)] = n.dim(i) + nq.dim(i);
  }

  StateSpaceSystem K;
  K.A.resize(nt + nqt, nt + nqt);
  K.B.resize(nt + nqt, kt);
  K.C.resize(mt, nt + nqt);
  for (Eigen::Index r = 0; r < nt + nqt; ++r) {
    for (Eigen::Index c = 0; c < nt + nqt; ++c) {
      K.A(r, c) = A_hat(order[static_cast<std::size_t>(r)], order[static_cast<std::size_t>(c)]);
    }
    K.B.row(r) = B_hat.row(order[static_cast<std::size_t>(r)]);
  }
  for (Eigen::Index c = 0; c < nt + nqt; ++c) {
    K.C.col(c) = C_hat.col(order[static_cast<std::size_t>(c)]);
  }
  K.D = D_hat;
  K.output_index = m;
  K.input_index = k;
  K.state_index = IndexSet(n_dims);
  return verify_structured_realization(K, p_q, tol);
}

namespace {

// Perturbs a stabilizing gain without losing the Hurwitz property, shrinking
// the perturbation until the closed loop stays safely stable.
Eigen::MatrixXd perturb_gain(const Eigen::MatrixXd& gain, const Eigen::MatrixXd& A,
                             const Eigen::MatrixXd& B, bool left, const Tolerances& tol,
                             std::mt19937_64* rng) {
  if (gain.size() == 0) return gain;
  Eigen::MatrixXd noise(gain.rows(), gain.cols());
  for (Eigen::Index r = 0; r < noise.rows(); ++r) {
    for (Eigen::Index c = 0; c < noise.cols(); ++c) {
      const double u = static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
      noise(r, c) = 2.0 * u - 1.0;
    }
  }
  double delta = 0.5 * (1.0 + gain.norm());
  for (int attempt = 0; attempt < 24; ++attempt) {
    const Eigen::MatrixXd candidate = gain + delta * noise;
    const Eigen::MatrixXd closed = left ? (A + candidate * B).eval() : (A + B * candidate).eval();
    if (spectral_abscissa(closed) < -10.0 * tol.hurwitz_margin) return candidate;
    delta *= 0.5;
  }
  return gain;
}

}  // namespace

SynthesisReport diagonal_test(const StateSpaceSystem& G, const StructuredPattern& P,
                              const Tolerances& tol, const DiagonalTestOptions& options) {
  validate_system(G);
  validate_pattern(P);
  const StructureCheck structure = is_structured_tf(G, P, tol);
  if (!structure.ok) {
    std::ostringstream os;
    os << "plant is not structured for the pattern; first violating block ("
       << structure.violations.front().first + 1 << "," << structure.violations.front().second + 1
       << ")";
    throw PreconditionError(os.str());
  }
  const IndexSet& k = P.row_index;
  const IndexSet& m = P.col_index;
  const Eigen::Index nodes = P.sparsity.size();

  // One stabilizing controller per diagonal block, from a minimal realization
  // of the block so the sub-synthesis always succeeds.
  std::vector<StateSpaceSystem> subcontrollers;
  subcontrollers.reserve(static_cast<std::size_t>(nodes));
  for (Eigen::Index i = 0; i < nodes; ++i) {
    StateSpaceSystem sub;
    sub.A = G.A;
    sub.B = G.B.middleCols(m.offset(i), m.dim(i));
    sub.C = G.C.middleRows(k.offset(i), k.dim(i));
    sub.D = block_of(G.D, k, m, i, i);
    sub.output_index = IndexSet::single(k.dim(i));
    sub.input_index = IndexSet::single(m.dim(i));
    StateSpaceSystem submin = minimal_realization(sub, tol);
    submin.state_index = IndexSet::single(submin.order());

    StructuredPattern trivial{SparsityPattern(1), IndexSet::single(k.dim(i)),
                              IndexSet::single(m.dim(i))};
    const StructuredRealization r = verify_structured_realization(submin, trivial, tol);
    K0Result k0 = synthesize_k0(r, tol);
    if (options.randomize_gains && submin.order() > 0) {
      std::mt19937_64 rng(options.gain_seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1));
      GainSchedule gs = k0.gains;
      gs.F_blocks[0] = perturb_gain(gs.F_blocks[0], submin.A, submin.B, false, tol, &rng);
      gs.L_blocks[0] = perturb_gain(gs.L_blocks[0], submin.A, submin.C, true, tol, &rng);
      const GainSchedule rebuilt = assemble_schedule(r, gs.F_blocks, gs.L_blocks);
      subcontrollers.push_back(nominal_controller(r, rebuilt));
    } else {
      subcontrollers.push_back(k0.controller.sys);
    }
  }

  std::vector<Eigen::Index> orders(static_cast<std::size_t>(nodes), 0);
  Eigen::Index n_total = 0;
  for (Eigen::Index i = 0; i < nodes; ++i) {
    orders[static_cast<std::size_t>(i)] = subcontrollers[static_cast<std::size_t>(i)].order();
    n_total += orders[static_cast<std::size_t>(i)];
  }

  StateSpaceSystem Kd;
  Kd.A = Eigen::MatrixXd::Zero(n_total, n_total);
  Kd.B = Eigen::MatrixXd::Zero(n_total, k.total());
  Kd.C = Eigen::MatrixXd::Zero(m.total(), n_total);
  Kd.D = Eigen::MatrixXd::Zero(m.total(), k.total());
  Kd.output_index = m;
  Kd.input_index = k;
  Kd.state_index = IndexSet(orders);
  Eigen::Index off = 0;
  for (Eigen::Index i = 0; i < nodes; ++i) {
    const StateSpaceSystem& ki = subcontrollers[static_cast<std::size_t>(i)];
    const Eigen::Index ni = ki.order();
    Kd.A.block(off, off, ni, ni) = ki.A;
    Kd.B.block(off, k.offset(i), ni, k.dim(i)) = ki.B;
    Kd.C.block(m.offset(i), off, m.dim(i), ni) = ki.C;
    Kd.D.block(m.offset(i), k.offset(i), m.dim(i), k.dim(i)) = ki.D;
    off += ni;
  }

  SynthesisReport out;
  out.controller = verify_structured_realization(Kd, controller_pattern(P), tol);
  const StateSpaceSystem gmin = minimal_realization(G, tol);
  try {
    out.loop = internal_stability_ss(gmin, out.controller->sys, tol);
    out.verdict = out.loop->stable ? Verdict::kStabilizable : Verdict::kNotStabilizable;
  } catch (const IndeterminateError&) {
    out.verdict = Verdict::kIndeterminate;
  }
  return out;
}

}  // namespace slti
