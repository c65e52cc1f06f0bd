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

#ifndef SLTI_REALIZE_HPP_
#define SLTI_REALIZE_HPP_

#include <vector>

#include "slti/stability.hpp"
#include "slti/system.hpp"
#include "slti/tolerances.hpp"

namespace slti {

/// A forbidden block of one of the four system matrices that carries
/// above-tolerance entries.
struct BlockViolation {
  char matrix = 'A';  // 'A', 'B', 'C', or 'D'
  Eigen::Index i = 0;
  Eigen::Index j = 0;
};

/// PBH certificates for one diagonal subsystem (C_ii, A_ii, B_ii).
struct NodePbh {
  int node = 0;
  PbhCertificate stabilizable;
  PbhCertificate detectable;
};

/// Outcome of checking a candidate realization against a pattern: sparsity of
/// all four matrices plus per-node stabilizability and detectability
/// certificates.  The diagonal subsystems decide: block-diagonal feedback
/// makes the whole triangular system Hurwitz exactly when every diagonal pair
/// passes, so the per-node test subsumes the global one.
struct VerificationReport {
  bool structured = false;  // all four matrices carry the pattern
  std::vector<BlockViolation> violations;
  std::vector<NodePbh> pbh;   // one entry per node with states
  bool stabilizable = false;  // every (A_ii, B_ii) stabilizable
  bool detectable = false;    // every (C_ii, A_ii) detectable
  bool accepted = false;      // structured and all certificates pass
};

/// A realization whose state partition has been checked against a pattern.
/// `sys` has state_index populated; forbidden blocks that were below
/// tolerance are zeroed exactly in this copy.
struct StructuredRealization {
  StateSpaceSystem sys;
  StructuredPattern pattern;
  VerificationReport report;

  bool accepted() const { return report.accepted; }
};

/// Controllable and observable realization with the same transfer matrix,
/// obtained by dropping the uncontrollable staircase block and then the
/// unobservable one.  The state partition, if any, is not preserved.
StateSpaceSystem minimal_realization(const StateSpaceSystem& sys, const Tolerances& tol = {});

/// Checks that sys (whose state_index must be populated) is a structured
/// realization for the pattern: A, B, C, D block sparsity plus PBH
/// stabilizability and detectability of every diagonal subsystem
/// (C_ii, A_ii, B_ii) with states.  Failure is reported, never thrown.
StructuredRealization verify_structured_realization(const StateSpaceSystem& sys,
                                                    const StructuredPattern& p,
                                                    const Tolerances& tol = {});

/// Structured realization of a stable structured transfer matrix: each block
/// column is realized minimally and the pieces are stacked, giving
/// block-diagonal A and B with the column's states assigned to its node.
/// Throws PreconditionError for unstable input (citing the offending
/// eigenvalue) or input that is not structured for the pattern.
StructuredRealization realize_stable(const StateSpaceSystem& sys, const StructuredPattern& p,
                                     const Tolerances& tol = {});

/// Structured realization of a chain-structured (block lower-triangular)
/// transfer matrix with output partition k and input partition m.  Starting
/// from a minimal realization, each node in turn receives the states that are
/// unreachable from the later nodes' inputs, found by an observability split
/// on the node's outputs followed by a controllability split of the
/// unobservable part; the reachable remainder recurses.  The result is an
/// orthogonal similarity of the minimal realization, so minimality is
/// preserved.  Throws PreconditionError when the input is not
/// chain-structured.
StructuredRealization realize_chain(const StateSpaceSystem& sys, const IndexSet& k,
                                    const IndexSet& m, const Tolerances& tol = {});

}  // namespace slti

#endif  // SLTI_REALIZE_HPP_
