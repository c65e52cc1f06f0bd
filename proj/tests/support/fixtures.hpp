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
//
// Shared worked examples: the two-node triangular system g1, the four-node
// system g2 whose off-diagonal entries share one unstable pole, and the
// three-state system whose unstable coupling mode defeats every two-node
// split.

#ifndef SLTI_TESTS_SUPPORT_FIXTURES_HPP_
#define SLTI_TESTS_SUPPORT_FIXTURES_HPP_

#include <Eigen/Dense>
#include <vector>

#include "slti/graph.hpp"
#include "slti/system.hpp"

namespace slti::testing {

// Two nodes, edge 1 -> 2 (0-based: 0 -> 1), mask [[1,0],[1,1]].
inline Graph fig1_graph() { return Graph(2, {{0, 0}, {1, 1}, {0, 1}}); }

// Four nodes, edges into nodes 3 and 4 from nodes 1 and 2.
inline Graph fig2_graph() {
  return Graph(4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

inline StructuredPattern scalar_block_pattern(const Graph& g) {
  const Eigen::Index n = g.n_nodes();
  std::vector<Eigen::Index> ones(static_cast<std::size_t>(n), 1);
  return StructuredPattern{adjacency(g), IndexSet(ones), IndexSet(ones)};
}

inline StructuredPattern s1_pattern() { return scalar_block_pattern(fig1_graph()); }
inline StructuredPattern s2_pattern() { return scalar_block_pattern(fig2_graph()); }

// g1 = [[1/(s+1), 0], [1/(s+1), 1/(s+2)]].
inline TransferSpec g1_spec() {
  TransferSpec spec;
  spec.output_index = IndexSet({1, 1});
  spec.input_index = IndexSet({1, 1});
  spec.entries.push_back({0, 0, {1.0}, {1.0, 1.0}});
  spec.entries.push_back({1, 0, {1.0}, {1.0, 1.0}});
  spec.entries.push_back({1, 1, {1.0}, {1.0, 2.0}});
  return spec;
}

// The displayed realization of g1: A = diag(-1,-2), B = I, C = [[1,0],[1,1]].
inline StateSpaceSystem g1_realization() {
  StateSpaceSystem sys;
  sys.A = Eigen::Vector2d(-1.0, -2.0).asDiagonal();
  sys.B = Eigen::Matrix2d::Identity();
  sys.C = (Eigen::Matrix2d() << 1.0, 0.0, 1.0, 1.0).finished();
  sys.D = Eigen::Matrix2d::Zero();
  sys.output_index = IndexSet({1, 1});
  sys.input_index = IndexSet({1, 1});
  sys.state_index = IndexSet({1, 1});
  return sys;
}

// g2: entries (3,1), (3,2), (4,1), (4,2) all equal to 1/(s-1).
inline TransferSpec g2_spec() {
  TransferSpec spec;
  spec.output_index = IndexSet({1, 1, 1, 1});
  spec.input_index = IndexSet({1, 1, 1, 1});
  for (Eigen::Index row : {2, 3}) {
    for (Eigen::Index col : {0, 1}) {
      spec.entries.push_back({row, col, {1.0}, {1.0, -1.0}});
    }
  }
  return spec;
}

// Minimal (order-1) realization of g2; not structured for any split since
// the single unstable state is shared by two columns.
inline StateSpaceSystem g2_minimal() {
  StateSpaceSystem sys;
  sys.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  sys.B = (Eigen::MatrixXd(1, 4) << 1.0, 1.0, 0.0, 0.0).finished();
  sys.C = (Eigen::MatrixXd(4, 1) << 0.0, 0.0, 1.0, 1.0).finished();
  sys.D = Eigen::MatrixXd::Zero(4, 4);
  sys.output_index = IndexSet({1, 1, 1, 1});
  sys.input_index = IndexSet({1, 1, 1, 1});
  return sys;
}

// Minimal realization of [[1/(s+1), 0], [1/(s-1), 1/(s+1)]]; the state split
// decides which diagonal pair loses the unstable mode.
inline StateSpaceSystem coupled_unstable_system(std::vector<Eigen::Index> state_split) {
  StateSpaceSystem sys;
  sys.A = Eigen::Vector3d(-1.0, 1.0, -1.0).asDiagonal();
  sys.B = (Eigen::MatrixXd(3, 2) << 1.0, 0.0, 1.0, 0.0, 0.0, 1.0).finished();
  sys.C = (Eigen::MatrixXd(2, 3) << 1.0, 0.0, 0.0, 0.0, 1.0, 1.0).finished();
  sys.D = Eigen::MatrixXd::Zero(2, 2);
  sys.output_index = IndexSet({1, 1});
  sys.input_index = IndexSet({1, 1});
  if (!state_split.empty()) sys.state_index = IndexSet(state_split);
  return sys;
}

// 1/(s-1) as a minimal scalar system.
inline StateSpaceSystem scalar_unstable() {
  StateSpaceSystem sys;
  sys.A = Eigen::MatrixXd::Constant(1, 1, 1.0);
  sys.B = Eigen::MatrixXd::Constant(1, 1, 1.0);
  sys.C = Eigen::MatrixXd::Constant(1, 1, 1.0);
  sys.D = Eigen::MatrixXd::Zero(1, 1);
  sys.output_index = IndexSet::single(1);
  sys.input_index = IndexSet::single(1);
  return sys;
}

// Static system y = G u with the given gain matrix.
inline StateSpaceSystem static_system(const Eigen::MatrixXd& gain) {
  StateSpaceSystem sys;
  sys.A = Eigen::MatrixXd(0, 0);
  sys.B = Eigen::MatrixXd(0, gain.cols());
  sys.C = Eigen::MatrixXd(gain.rows(), 0);
  sys.D = gain;
  sys.output_index = IndexSet::single(gain.rows());
  sys.input_index = IndexSet::single(gain.cols());
  return sys;
}

}  // namespace slti::testing

#endif  // SLTI_TESTS_SUPPORT_FIXTURES_HPP_
