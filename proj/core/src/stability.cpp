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

#include "slti/stability.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>

#include "slti/errors.hpp"
#include "slti/numerics.hpp"
#include "slti/realize.hpp"

namespace slti {
namespace {

Eigen::Index complex_rank(const Eigen::MatrixXcd& M, const Tolerances& tol) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& sigma = svd.singularValues();
  const double cutoff = tol.rank_cutoff(sigma(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace

HurwitzResult is_hurwitz(const Eigen::MatrixXd& M, const Tolerances& tol) {
  HurwitzResult out;
  out.abscissa = spectral_abscissa(M);
  if (std::abs(out.abscissa) <= tol.hurwitz_margin) {
    std::ostringstream os;
    os << "spectral abscissa " << out.abscissa << " lies within the margin band "
       << tol.hurwitz_margin << " around the imaginary axis";
    throw IndeterminateError(os.str());
  }
  out.hurwitz = out.abscissa < -tol.hurwitz_margin;
  return out;
}

PbhCertificate pbh(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B_or_C,
                   PbhProperty property, const Tolerances& tol) {
  const Eigen::Index n = A.rows();
  if (A.rows() != A.cols()) throw InputError("A must be square");
  if (property == PbhProperty::kStabilizable && B_or_C.rows() != n) {
    throw InputError("B row count must match A");
  }
  if (property == PbhProperty::kDetectable && B_or_C.cols() != n) {
    throw InputError("C column count must match A");
  }

  PbhCertificate out;
  out.property = property;
  std::vector<std::complex<double>> tested;
  for (const auto& lambda : eigenvalues(A)) {
    if (lambda.real() < -tol.hurwitz_margin) continue;
    bool seen = false;
    for (const auto& t : tested) {
      if (std::abs(lambda - t) <= 1e-9 || std::abs(std::conj(lambda) - t) <= 1e-9) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    tested.push_back(lambda);

    Eigen::MatrixXcd pencil;
    const Eigen::MatrixXcd shifted =
        A.cast<std::complex<double>>() - lambda * Eigen::MatrixXcd::Identity(n, n);
    if (property == PbhProperty::kStabilizable) {
      pencil.resize(n, n + B_or_C.cols());
      pencil.leftCols(n) = shifted;
      pencil.rightCols(B_or_C.cols()) = B_or_C.cast<std::complex<double>>();
    } else {
      pencil.resize(n + B_or_C.rows(), n);
      pencil.topRows(n) = shifted;
      pencil.bottomRows(B_or_C.rows()) = B_or_C.cast<std::complex<double>>();
    }
    const Eigen::Index rank = complex_rank(pencil, tol);
    if (rank < n) {
      out.verdict = false;
      out.witnesses.push_back({lambda, n - rank});
    }
  }
  return out;
}

namespace {

void require_complementary(const StateSpaceSystem& G, const StateSpaceSystem& K) {
  if (G.n_inputs() != K.n_outputs() || G.n_outputs() != K.n_inputs()) {
    throw InputError("plant and controller dimensions are not complementary");
  }
}

bool loop_well_posed(const StateSpaceSystem& G, const StateSpaceSystem& K,
                     const Tolerances& tol) {
  const Eigen::Index k = G.n_outputs();
  const Eigen::MatrixXd W = Eigen::MatrixXd::Identity(k, k) - G.D * K.D;
  if (k == 0) return true;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W);
  const auto& sigma = svd.singularValues();
  return sigma(sigma.size() - 1) > tol.rank_cutoff(sigma(0));
}

}  // namespace

ClosedLoopReport internal_stability_ss(const StateSpaceSystem& G, const StateSpaceSystem& K,
                                       const Tolerances& tol) {
  validate_system(G);
  validate_system(K);
  require_complementary(G, K);
  const Eigen::Index n = G.order();
  const Eigen::Index nk = K.order();
  const Eigen::Index m = G.n_inputs();
  const Eigen::Index p = G.n_outputs();

  ClosedLoopReport out;
  out.plant_stabilizable = pbh(G.A, G.B, PbhProperty::kStabilizable, tol);
  out.plant_detectable = pbh(G.A, G.C, PbhProperty::kDetectable, tol);
  out.controller_stabilizable = pbh(K.A, K.B, PbhProperty::kStabilizable, tol);
  out.controller_detectable = pbh(K.A, K.C, PbhProperty::kDetectable, tol);
  out.well_posed = loop_well_posed(G, K, tol);
  if (!out.well_posed) return out;

  Eigen::MatrixXd coupling(m + p, m + p);
  coupling.topLeftCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
  coupling.topRightCorner(m, p) = -K.D;
  coupling.bottomLeftCorner(p, m) = -G.D;
  coupling.bottomRightCorner(p, p) = Eigen::MatrixXd::Identity(p, p);

  Eigen::MatrixXd outputs = Eigen::MatrixXd::Zero(m + p, n + nk);
  outputs.topRightCorner(m, nk) = K.C;
  outputs.bottomLeftCorner(p, n) = G.C;

  Eigen::MatrixXd inputs = Eigen::MatrixXd::Zero(n + nk, m + p);
  inputs.topLeftCorner(n, m) = G.B;
  inputs.bottomRightCorner(nk, p) = K.B;

  out.closed_loop_A = Eigen::MatrixXd::Zero(n + nk, n + nk);
  out.closed_loop_A.topLeftCorner(n, n) = G.A;
  out.closed_loop_A.bottomRightCorner(nk, nk) = K.A;
  out.closed_loop_A += inputs * coupling.lu().solve(outputs);

  out.eigenvalues = eigenvalues(out.closed_loop_A);
  out.stable = is_hurwitz(out.closed_loop_A, tol).hurwitz;
  out.stabilizes = out.stable && out.plant_stabilizable.verdict && out.plant_detectable.verdict &&
                   out.controller_stabilizable.verdict && out.controller_detectable.verdict;
  return out;
}

bool internal_stability_tf(const StateSpaceSystem& G, const StateSpaceSystem& K,
                           const Tolerances& tol) {
  validate_system(G);
  validate_system(K);
  require_complementary(G, K);
  const StateSpaceSystem g = minimal_realization(G, tol);
  const StateSpaceSystem k = minimal_realization(K, tol);
  if (!loop_well_posed(g, k, tol)) return false;

  const Eigen::Index n1 = g.order();
  const Eigen::Index n2 = k.order();
  const Eigen::Index p = g.n_outputs();
  const Eigen::Index m = g.n_inputs();

  // The map (v1, v2) -> (v1 - G v2, v2 - K v1), whose inverse collects the
  // four closed-loop transfer functions.
  StateSpaceSystem loop;
  loop.A = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  loop.A.topLeftCorner(n1, n1) = g.A;
  loop.A.bottomRightCorner(n2, n2) = k.A;
  loop.B = Eigen::MatrixXd::Zero(n1 + n2, p + m);
  loop.B.topRightCorner(n1, m) = g.B;
  loop.B.bottomLeftCorner(n2, p) = k.B;
  loop.C = Eigen::MatrixXd::Zero(p + m, n1 + n2);
  loop.C.topLeftCorner(p, n1) = -g.C;
  loop.C.bottomRightCorner(m, n2) = -k.C;
  loop.D = Eigen::MatrixXd::Identity(p + m, p + m);
  loop.D.topRightCorner(p, m) = -g.D;
  loop.D.bottomLeftCorner(m, p) = -k.D;
  loop.output_index = IndexSet::single(p + m);
  loop.input_index = IndexSet::single(p + m);

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(loop.D);
  StateSpaceSystem inv;
  inv.D = lu.inverse();
  inv.B = loop.B * inv.D;
  inv.C = -inv.D * loop.C;
  inv.A = loop.A - loop.B * inv.D * loop.C;
  inv.output_index = loop.output_index;
  inv.input_index = loop.input_index;

  const StateSpaceSystem reduced = minimal_realization(inv, tol);
  if (reduced.order() == 0) return true;
  return is_hurwitz(reduced.A, tol).hurwitz;
}

}  // namespace slti
