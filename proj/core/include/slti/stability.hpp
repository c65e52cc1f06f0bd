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

#ifndef SLTI_STABILITY_HPP_
#define SLTI_STABILITY_HPP_

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "slti/system.hpp"
#include "slti/tolerances.hpp"

namespace slti {

struct HurwitzResult {
  bool hurwitz = false;
  double abscissa = 0.0;  // max Re eig; -inf for the empty matrix
};

/// True iff the spectral abscissa is below -hurwitz_margin.  An abscissa
/// within the margin band around zero throws IndeterminateError: an answer
/// there would be decided by rounding, not by the data.
HurwitzResult is_hurwitz(const Eigen::MatrixXd& M, const Tolerances& tol = {});

enum class PbhProperty { kStabilizable, kDetectable };

struct PbhWitness {
  std::complex<double> eigenvalue;
  Eigen::Index rank_deficiency = 0;
};

/// Outcome of the eigenvalue rank test over the closed right half plane.
/// verdict is false exactly when witnesses is nonempty.
struct PbhCertificate {
  PbhProperty property = PbhProperty::kStabilizable;
  bool verdict = true;
  std::vector<PbhWitness> witnesses;
};

/// Rank test [A - lambda I, B] (stabilizability) or [A - lambda I; C]
/// (detectability) at every eigenvalue of A with Re lambda >= -hurwitz_margin.
PbhCertificate pbh(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B_or_C,
                   PbhProperty property, const Tolerances& tol = {});

/// Closed-loop analysis of the plant/controller interconnection.
///
/// A Hurwitz closed-loop state matrix certifies that K stabilizes G only when
/// both supplied realizations are stabilizable and detectable, so the report
/// carries the four PBH certificates and the combined verdict `stabilizes`.
struct ClosedLoopReport {
  bool well_posed = false;
  Eigen::MatrixXd closed_loop_A;
  std::vector<std::complex<double>> eigenvalues;
  bool stable = false;  // well_posed and closed_loop_A Hurwitz
  PbhCertificate plant_stabilizable;
  PbhCertificate plant_detectable;
  PbhCertificate controller_stabilizable;
  PbhCertificate controller_detectable;
  bool stabilizes = false;  // stable and all four certificates pass
};

/// State-space internal stability test.  Forms the closed-loop state matrix
/// from the block-diagonal plant/controller dynamics and the inverse of the
/// feedthrough coupling, then tests it for Hurwitz stability.  An ill-posed
/// loop (I - D D_K numerically singular) yields well_posed = false and no
/// eigenvalue claims.  Marginal spectra throw IndeterminateError.
ClosedLoopReport internal_stability_ss(const StateSpaceSystem& G, const StateSpaceSystem& K,
                                       const Tolerances& tol = {});

/// Input-output internal stability: well-posedness of I - D D_K plus
/// stability of the inverse of [I, -G; -K, I], built as a state-space system
/// from minimal realizations of G and K, reduced, and tested for Hurwitz
/// poles.  Agrees with internal_stability_ss's combined verdict.
bool internal_stability_tf(const StateSpaceSystem& G, const StateSpaceSystem& K,
                           const Tolerances& tol = {});

}  // namespace slti

#endif  // SLTI_STABILITY_HPP_
