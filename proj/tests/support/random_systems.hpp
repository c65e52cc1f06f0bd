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
// Seeded generators for property tests.  All draws go through raw mt19937_64
// output so a fixed seed reproduces the same instances everywhere.

#ifndef SLTI_TESTS_SUPPORT_RANDOM_SYSTEMS_HPP_
#define SLTI_TESTS_SUPPORT_RANDOM_SYSTEMS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "slti/graph.hpp"
#include "slti/numerics.hpp"
#include "slti/system.hpp"

namespace slti::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = scale * uniform(-1.0, 1.0);
    }
    return M;
  }

  // Orthogonal factor of a random square matrix, with deterministic signs.
  Eigen::MatrixXd orthogonal(Eigen::Index n) {
    if (n == 0) return Eigen::MatrixXd(0, 0);
    const Eigen::MatrixXd M = matrix(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    }
    return Q;
  }

 private:
  std::mt19937_64 gen_;
};

// Random valid graph: random lower-triangular edges under a random node
// relabeling, then self-loops and transitive closure.
inline Graph random_graph(Rng& rng, int n_nodes, double edge_prob = 0.5) {
  std::vector<int> label(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) label[static_cast<std::size_t>(i)] = i;
  for (int i = n_nodes - 1; i > 0; --i) {
    std::swap(label[static_cast<std::size_t>(i)],
              label[static_cast<std::size_t>(rng.uniform_int(0, i))]);
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n_nodes; ++i) {
    edges.emplace_back(label[static_cast<std::size_t>(i)], label[static_cast<std::size_t>(i)]);
    for (int j = 0; j < i; ++j) {
      if (rng.coin(edge_prob)) {
        edges.emplace_back(label[static_cast<std::size_t>(j)],
                           label[static_cast<std::size_t>(i)]);
      }
    }
  }
  return transitive_closure(Graph(n_nodes, edges));
}

inline IndexSet random_dims(Rng& rng, Eigen::Index blocks, int lo, int hi) {
  std::vector<Eigen::Index> d(static_cast<std::size_t>(blocks));
  for (auto& v : d) v = rng.uniform_int(lo, hi);
  return IndexSet(d);
}

// Zeroes the blocks forbidden by the pattern.
inline Eigen::MatrixXd structured_matrix(Rng& rng, const SparsityPattern& s, const IndexSet& rows,
                                         const IndexSet& cols, double scale = 1.0) {
  Eigen::MatrixXd M = rng.matrix(rows.total(), cols.total(), scale);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      if (!s.at(static_cast<int>(i), static_cast<int>(j))) {
        M.block(rows.offset(i), cols.offset(j), rows.dim(i), cols.dim(j)).setZero();
      }
    }
  }
  return M;
}

enum class SpectrumKind { kStable, kMixed };

// Random state-space system carrying the pattern, with state_index set.  The
// diagonal shift preserves the structure because self-loops are always
// permitted.
inline StateSpaceSystem random_structured_system(Rng& rng, const StructuredPattern& p,
                                                 const IndexSet& n, SpectrumKind kind,
                                                 double feedthrough_scale = 0.5) {
  StateSpaceSystem sys;
  sys.A = structured_matrix(rng, p.sparsity, n, n);
  sys.B = structured_matrix(rng, p.sparsity, n, p.col_index);
  sys.C = structured_matrix(rng, p.sparsity, p.row_index, n);
  sys.D = structured_matrix(rng, p.sparsity, p.row_index, p.col_index, feedthrough_scale);
  sys.output_index = p.row_index;
  sys.input_index = p.col_index;
  sys.state_index = n;

  for (Eigen::Index i = 0; i < n.blocks(); ++i) {
    const Eigen::Index ni = n.dim(i);
    if (ni == 0) continue;
    auto blk = sys.A.block(n.offset(i), n.offset(i), ni, ni);
    const double a = spectral_abscissa(Eigen::MatrixXd(blk));
    const bool unstable = kind == SpectrumKind::kMixed && rng.coin(0.4);
    // Target abscissa: comfortably negative, or strictly positive for the
    // mixed case.
    const double target = unstable ? rng.uniform(0.2, 0.8) : rng.uniform(-1.5, -0.4);
    blk.diagonal().array() += target - a;
  }
  return sys;
}

// Random minimal-looking dense system (no structure); generically minimal.
inline StateSpaceSystem random_dense_system(Rng& rng, Eigen::Index order, Eigen::Index n_out,
                                            Eigen::Index n_in, SpectrumKind kind,
                                            double feedthrough_scale = 0.5) {
  StateSpaceSystem sys;
  sys.A = rng.matrix(order, order);
  if (order > 0) {
    const double a = spectral_abscissa(sys.A);
    const double target =
        kind == SpectrumKind::kStable ? rng.uniform(-1.5, -0.4)
                                      : (rng.coin() ? rng.uniform(0.2, 0.8) : rng.uniform(-1.5, -0.4));
    sys.A.diagonal().array() += target - a;
  }
  sys.B = rng.matrix(order, n_in);
  sys.C = rng.matrix(n_out, order);
  sys.D = rng.matrix(n_out, n_in, feedthrough_scale);
  sys.output_index = IndexSet::single(n_out);
  sys.input_index = IndexSet::single(n_in);
  return sys;
}

// Similarity transform x -> T^{-1} x; drops the state partition.
inline StateSpaceSystem scramble(const StateSpaceSystem& sys, const Eigen::MatrixXd& T) {
  StateSpaceSystem out = sys;
  out.A = T.transpose() * sys.A * T;
  out.B = T.transpose() * sys.B;
  out.C = sys.C * T;
  out.state_index.reset();
  return out;
}

}  // namespace slti::testing

#endif  // SLTI_TESTS_SUPPORT_RANDOM_SYSTEMS_HPP_
