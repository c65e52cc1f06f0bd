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

#ifndef SLTI_SYNTHESIS_HPP_
#define SLTI_SYNTHESIS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "slti/realize.hpp"
#include "slti/stability.hpp"
#include "slti/system.hpp"
#include "slti/tolerances.hpp"

namespace slti {

/// Per-node stabilizing state-feedback and output-injection gains, plus their
/// block-diagonal assemblies over the state partition.  Nodes with zero state
/// dimension carry empty blocks.
struct GainSchedule {
  std::vector<Eigen::MatrixXd> F_blocks;  // m_i x n_i
  std::vector<Eigen::MatrixXd> L_blocks;  // n_i x k_i
  Eigen::MatrixXd F_d;                    // m x n, block-diagonal
  Eigen::MatrixXd L_d;                    // n x k, block-diagonal
};

/// The generator of all structured stabilizing controllers: K = F_l(J, Q)
/// ranges over them as Q ranges over structured stable parameters.  J's
/// inputs are (y, v) and outputs (u, e); its first output block J11 equals
/// the nominal controller.
struct YoulaGenerator {
  StateSpaceSystem J;
  StateSpaceSystem plant;
  StructuredPattern pattern;  // plant pattern: rows k, cols m
  GainSchedule gains;
};

enum class Verdict { kStabilizable, kNotStabilizable, kIndeterminate };

/// Diagonal-block certificates for one node that failed the test.
struct NodeCertificates {
  Eigen::Index node = 0;
  PbhCertificate stabilizable;
  PbhCertificate detectable;
};

/// Outcome of a stabilizability test or synthesis run.
struct SynthesisReport {
  Verdict verdict = Verdict::kIndeterminate;
  std::vector<NodeCertificates> node_failures;
  std::optional<StructuredRealization> controller;
  std::optional<ClosedLoopReport> loop;
};

struct K0Result {
  GainSchedule gains;
  StructuredRealization controller;
  ClosedLoopReport loop;
};

struct DiagonalTestOptions {
  /// Re-run with randomly perturbed sub-controller gains; the verdict must
  /// not depend on the particular stabilizing gains chosen.
  bool randomize_gains = false;
  std::uint64_t gain_seed = 1;
};

/// A structured realization admits a structured stabilizing controller iff
/// every diagonal subsystem (A_ii, B_ii, C_ii) with nonzero state dimension
/// is stabilizable and detectable.  The candidate must carry the pattern;
/// its own certificates are recomputed here, so a rejected candidate may be
/// queried.
SynthesisReport structured_stabilizability_test(const StructuredRealization& R,
                                                const Tolerances& tol = {});

/// The nominal structured stabilizing controller: per-node gains close each
/// diagonal subsystem, and the observer-based assembly
/// (A + B F_d + L_d C + L_d D F_d, -L_d, F_d, 0) stabilizes the plant.
/// Throws SynthesisError when the stabilizability test fails.
K0Result synthesize_k0(const StructuredRealization& R, const Tolerances& tol = {});

/// Assembles J from the plant realization and a valid gain schedule; every
/// sub-block of J is structured.  Throws InputError for gains of the wrong
/// shape or gains that fail to close their diagonal subsystem.
YoulaGenerator build_youla_generator(const StructuredRealization& R, const GainSchedule& gains,
                                     const Tolerances& tol = {});

/// Structured realization of K = F_l(J, Q) via the star product.  Q must be
/// stable, structured like the controller, and leave I + D Q(inf)
/// nonsingular; it is structured-realized internally before composition.
/// The closure identity that certifies closed-loop stability is verified to
/// 1e-8; its residual is written to identity_residual when given.
StructuredRealization close_lft(const YoulaGenerator& gen, const StateSpaceSystem& Q,
                                const Tolerances& tol = {},
                                double* identity_residual = nullptr);

/// Decision procedure for structured stabilizability of a plant given only
/// its transfer matrix: stabilize each diagonal block separately, assemble
/// the block-diagonal controller K_d, and test the loop.  The verdict is
/// independent of the per-block gains; a marginal closed-loop spectrum yields
/// kIndeterminate.
SynthesisReport diagonal_test(const StateSpaceSystem& G, const StructuredPattern& P,
                              const Tolerances& tol = {},
                              const DiagonalTestOptions& options = {});

}  // namespace slti

#endif  // SLTI_SYNTHESIS_HPP_
