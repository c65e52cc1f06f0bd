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

#include "slti/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace slti {
namespace {

void require_finite(const Eigen::MatrixXd& M, const char* name) {
  if (!M.allFinite()) {
    throw InputError(std::string(name) + " contains non-finite entries");
  }
}

void require_square(const Eigen::MatrixXd& M, const char* name) {
  if (M.rows() != M.cols()) {
    std::ostringstream os;
    os << name << " must be square, got " << M.rows() << "x" << M.cols();
    throw InputError(os.str());
  }
  require_finite(M, name);
}

// Solves M X + X N = C columnwise after complex Schur reduction of M and N.
// Returns the real part; the imaginary part is discarded (it is at rounding
// level whenever the data are real and the equation is well posed).
Eigen::MatrixXd solve_sylvester(const Eigen::MatrixXd& M, const Eigen::MatrixXd& N,
                                const Eigen::MatrixXd& C) {
  const Eigen::Index p = M.rows();
  const Eigen::Index q = N.rows();
  if (p == 0 || q == 0) return Eigen::MatrixXd::Zero(p, q);

  const Eigen::ComplexSchur<Eigen::MatrixXcd> sm(M.cast<std::complex<double>>());
  const Eigen::ComplexSchur<Eigen::MatrixXcd> sn(N.cast<std::complex<double>>());
  const Eigen::MatrixXcd& tm = sm.matrixT();
  const Eigen::MatrixXcd& tn = sn.matrixT();
  const Eigen::MatrixXcd& um = sm.matrixU();
  const Eigen::MatrixXcd& un = sn.matrixU();

  Eigen::MatrixXcd y = um.adjoint() * C.cast<std::complex<double>>() * un;
  Eigen::MatrixXcd x(p, q);
  for (Eigen::Index k = 0; k < q; ++k) {
    Eigen::VectorXcd rhs = y.col(k);
    if (k > 0) rhs -= x.leftCols(k) * tn.col(k).head(k);
    Eigen::MatrixXcd shifted = tm;
    shifted.diagonal().array() += tn(k, k);
    for (Eigen::Index i = 0; i < p; ++i) {
      const double mag = std::abs(shifted(i, i));
      if (mag <= 1e-12 * (1.0 + std::abs(tm(i, i)) + std::abs(tn(k, k)))) {
        std::ostringstream os;
        os << "Sylvester operator is singular: eigenvalue sum " << tm(i, i).real();
        if (tm(i, i).imag() != 0.0) os << (tm(i, i).imag() < 0 ? "" : "+") << tm(i, i).imag() << "i";
        os << " + " << tn(k, k).real();
        if (tn(k, k).imag() != 0.0) os << (tn(k, k).imag() < 0 ? "" : "+") << tn(k, k).imag() << "i";
        os << " is within 1e-12 of zero";
        throw SolverError(os.str());
      }
    }
    x.col(k) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return (um * x * un.adjoint()).real();
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& M) {
  require_square(M, "matrix");
  std::vector<std::complex<double>> out;
  if (M.rows() == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw SolverError("eigenvalue iteration failed to converge");
  }
  out.reserve(static_cast<std::size_t>(M.rows()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

double spectral_abscissa(const Eigen::MatrixXd& M) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues(M)) worst = std::max(worst, ev.real());
  return worst;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& M, const Tolerances& tol) {
  require_finite(M, "matrix");
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sigma = svd.singularValues();
  const double cutoff = tol.rank_cutoff(sigma(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  return rank;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  require_square(A, "A");
  require_square(Q, "Q");
  if (A.rows() != Q.rows()) {
    throw InputError("A and Q must have matching dimensions");
  }
  const double qscale = Q.norm();
  if ((Q - Q.transpose()).norm() > 1e-8 * (1.0 + qscale)) {
    throw InputError("Q must be symmetric");
  }

  Eigen::MatrixXd P = solve_sylvester(A.transpose(), A, -Q);
  P = 0.5 * (P + P.transpose()).eval();
  const double residual = (A.transpose() * P + P * A + Q).norm();
  if (residual > 1e-8 * (1.0 + qscale)) {
    std::ostringstream os;
    os << "Lyapunov residual " << residual << " exceeds tolerance; the equation is ill conditioned";
    throw SolverError(os.str());
  }
  return P;
}

namespace {

// Controllable-leading orthogonal staircase reduction.  On return Z is
// orthogonal, r is the controllable dimension, and Z^T A Z, Z^T B have the
// controllable part in the leading r states.
void raw_staircase(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Tolerances& tol,
                   Eigen::MatrixXd* Z, Eigen::Index* r) {
  const Eigen::Index n = A.rows();
  *Z = Eigen::MatrixXd::Identity(n, n);
  *r = 0;
  Eigen::MatrixXd a_cur = A;
  Eigen::MatrixXd b_cur = B;
  while (*r < n) {
    const Eigen::Index rem = n - *r;
    if (b_cur.cols() == 0 || b_cur.norm() == 0.0) break;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b_cur, Eigen::ComputeFullU);
    const auto& sigma = svd.singularValues();
    const double cutoff = tol.rank_cutoff(sigma(0));
    Eigen::Index rho = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > cutoff) ++rho;
    }
    if (rho == 0) break;
    const Eigen::MatrixXd u = svd.matrixU();
    Z->rightCols(rem) = (Z->rightCols(rem) * u).eval();
    a_cur = (u.transpose() * a_cur * u).eval();
    b_cur = a_cur.block(rho, 0, rem - rho, rho);
    a_cur = a_cur.block(rho, rho, rem - rho, rem - rho).eval();
    *r += rho;
  }
}

}  // namespace

StaircaseResult controllability_staircase(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                          const Tolerances& tol) {
  require_square(A, "A");
  require_finite(B, "B");
  if (B.rows() != A.rows()) {
    throw InputError("A and B must have matching row counts");
  }
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd z;
  Eigen::Index r = 0;
  raw_staircase(A, B, tol, &z, &r);

  StaircaseResult out;
  // Flip so the uncontrollable part leads and the controllable part trails.
  out.T = z.rowwise().reverse();
  out.dim = r;
  out.A = out.T.transpose() * A * out.T;
  out.B = out.T.transpose() * B;
  const Eigen::Index nu = n - r;
  out.A.topRightCorner(nu, r).setZero();
  out.B.topRows(nu).setZero();
  return out;
}

StaircaseResult observability_staircase(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                        const Tolerances& tol) {
  require_square(A, "A");
  require_finite(C, "C");
  if (C.cols() != A.rows()) {
    throw InputError("A and C must have matching state dimensions");
  }
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd z;
  Eigen::Index r = 0;
  raw_staircase(A.transpose(), C.transpose(), tol, &z, &r);

  StaircaseResult out;
  out.T = z;
  out.dim = r;
  out.A = z.transpose() * A * z;
  out.C = C * z;
  out.A.topRightCorner(r, n - r).setZero();
  out.C.rightCols(n - r).setZero();
  return out;
}

namespace {

// Riccati solve A^T P + P A - P B B^T P + I = 0 through the stable invariant
// subspace of the Hamiltonian.  Returns false when the subspace is defective
// or badly scaled, in which case the caller falls back to Newton-Kleinman.
bool care_via_hamiltonian(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          Eigen::MatrixXd* P) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = A;
  H.topRightCorner(n, n) = -B * B.transpose();
  H.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  H.bottomRightCorner(n, n) = -A.transpose();

  Eigen::EigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) return false;
  std::vector<Eigen::Index> stable;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (es.eigenvalues()(i).real() < 0.0) stable.push_back(i);
  }
  if (static_cast<Eigen::Index>(stable.size()) != n) return false;

  Eigen::MatrixXcd basis(2 * n, n);
  for (Eigen::Index j = 0; j < n; ++j) basis.col(j) = es.eigenvectors().col(stable[j]);
  const Eigen::MatrixXcd x1 = basis.topRows(n);
  const Eigen::MatrixXcd x2 = basis.bottomRows(n);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x1);
  const auto& sigma = svd.singularValues();
  if (sigma(n - 1) <= 1e-10 * sigma(0)) return false;

  const Eigen::MatrixXcd pc =
      x1.transpose().lu().solve(x2.transpose()).transpose();
  *P = 0.5 * (pc.real() + pc.real().transpose());
  return P->allFinite();
}

// Bass-shift stabilizing gain for a controllable pair: with beta exceeding
// the spectral abscissa of A, the Lyapunov solution W of
// (A + beta I) W + W (A + beta I)^T = 2 B B^T is invertible and
// F = -B^T W^{-1} places all closed-loop eigenvalues left of -beta + |A|.
Eigen::MatrixXd bass_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const Eigen::Index n = A.rows();
  const double beta = 1.0 + A.cwiseAbs().rowwise().sum().maxCoeff();
  const Eigen::MatrixXd M = A + beta * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd W = solve_sylvester(M, M.transpose(), 2.0 * B * B.transpose());
  W = 0.5 * (W + W.transpose()).eval();
  return -(W.ldlt().solve(B)).transpose();
}

}  // namespace

Eigen::MatrixXd stabilizing_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Tolerances& tol) {
  require_square(A, "A");
  require_finite(B, "B");
  if (B.rows() != A.rows()) {
    throw InputError("A and B must have matching row counts");
  }
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (n == 0) return Eigen::MatrixXd::Zero(m, 0);

  const auto eig_a = eigenvalues(A);
  if (eig_a.back().real() < -tol.hurwitz_margin) {
    return Eigen::MatrixXd::Zero(m, n);
  }

  // Stabilizability check: every eigenvalue in the closed right half plane
  // must leave [A - lambda I, B] at full row rank.
  for (const auto& lambda : eig_a) {
    if (lambda.real() < -tol.hurwitz_margin) continue;
    Eigen::MatrixXcd pencil(n, n + m);
    pencil.leftCols(n) =
        A.cast<std::complex<double>>() - lambda * Eigen::MatrixXcd::Identity(n, n);
    pencil.rightCols(m) = B.cast<std::complex<double>>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pencil);
    const auto& sigma = svd.singularValues();
    Eigen::Index rank = 0;
    const double cutoff = tol.rank_cutoff(sigma(0));
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > cutoff) ++rank;
    }
    if (rank < n) {
      std::ostringstream os;
      os << "pair is not stabilizable: uncontrollable eigenvalue " << lambda.real();
      if (lambda.imag() != 0.0) os << (lambda.imag() < 0 ? "" : "+") << lambda.imag() << "i";
      os << " is not in the open left half plane";
      throw SynthesisError(os.str());
    }
  }

  Eigen::MatrixXd P;
  if (care_via_hamiltonian(A, B, &P)) {
    const Eigen::MatrixXd F = -B.transpose() * P;
    if (spectral_abscissa(A + B * F) < -tol.hurwitz_margin) return F;
  }

  // Newton-Kleinman on the controllable block of the staircase form, seeded
  // by the Bass-shift gain.  The uncontrollable block passed the test above,
  // so it is already Hurwitz and needs no feedback.
  const StaircaseResult sc = controllability_staircase(A, B, tol);
  const Eigen::Index r = sc.dim;
  const Eigen::Index nu = n - r;
  const Eigen::MatrixXd ac = sc.A.bottomRightCorner(r, r);
  const Eigen::MatrixXd bc = sc.B.bottomRows(r);
  Eigen::MatrixXd F = bass_gain(ac, bc);
  for (int iter = 0; iter < 60; ++iter) {
    const Eigen::MatrixXd Pk = solve_lyapunov(
        ac + bc * F, Eigen::MatrixXd::Identity(r, r) + F.transpose() * F);
    const Eigen::MatrixXd Fn = -bc.transpose() * Pk;
    const double step = (Fn - F).norm();
    F = Fn;
    if (step <= 1e-11 * (1.0 + F.norm())) break;
  }
  Eigen::MatrixXd F_full = Eigen::MatrixXd::Zero(m, n);
  F_full.rightCols(r) = F;
  F_full = (F_full * sc.T.transpose()).eval();
  if (spectral_abscissa(A + B * F_full) >= -tol.hurwitz_margin) {
    throw SolverError("stabilizing gain iteration failed to converge");
  }
  return F_full;
}

}  // namespace slti
