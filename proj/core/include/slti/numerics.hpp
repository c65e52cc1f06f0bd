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

#ifndef SLTI_NUMERICS_HPP_
#define SLTI_NUMERICS_HPP_

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "slti/errors.hpp"
#include "slti/tolerances.hpp"

namespace slti {

/// All eigenvalues of a square real matrix, sorted by (real part, imaginary
/// part).  Complex-conjugate pairs end up adjacent.  Throws InputError for
/// non-square or non-finite input.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& M);

/// max Re eig(M); -inf for the empty matrix.
double spectral_abscissa(const Eigen::MatrixXd& M);

/// Count of singular values above rank_tol * max(1, sigma_max).
Eigen::Index numerical_rank(const Eigen::MatrixXd& M, const Tolerances& tol = {});

/// Solves A^T P + P A + Q = 0 for symmetric P via Schur reduction
/// (Bartels-Stewart).  Requires that no two eigenvalues of A sum to zero;
/// otherwise throws SolverError naming the near-zero eigenvalue sum.  The
/// result satisfies ||A^T P + P A + Q||_F <= 1e-8 * (1 + ||Q||_F).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

/// A state-feedback gain F with A + B F Hurwitz, for any stabilizable (A, B).
///
/// Already-Hurwitz A returns F = 0.  Otherwise F = -B^T P where P solves the
/// Riccati equation A^T P + P A - P B B^T P + I = 0, obtained from the stable
/// invariant subspace of the Hamiltonian; a Newton-Kleinman iteration seeded
/// by a Bass-shift gain covers defective Hamiltonians.  Throws SynthesisError
/// with the offending eigenvalue when (A, B) is not stabilizable.
Eigen::MatrixXd stabilizing_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Tolerances& tol = {});

/// Orthogonal reduction exposing the controllable (observable) subspace.
///
/// Controllability form: T^T A T = [A_uc  0; *  A_c], T^T B = [0; B_c] with
/// the uncontrollable part leading and the controllable part in the trailing
/// `dim` states.  Observability form: T^T A T = [A_o  0; *  A_uo],
/// C T = [C_o  0] with the observable part in the leading `dim` states.
struct StaircaseResult {
  Eigen::MatrixXd T;     // orthogonal, T^T T = I
  Eigen::Index dim = 0;  // controllable (resp. observable) state count
  Eigen::MatrixXd A;     // T^T A T
  Eigen::MatrixXd B;     // T^T B (controllability form only)
  Eigen::MatrixXd C;     // C T   (observability form only)
};

StaircaseResult controllability_staircase(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                          const Tolerances& tol = {});
StaircaseResult observability_staircase(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                        const Tolerances& tol = {});

}  // namespace slti

#endif  // SLTI_NUMERICS_HPP_
