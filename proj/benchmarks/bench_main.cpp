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

#include <benchmark/benchmark.h>

#include "slti/numerics.hpp"
#include "slti/realize.hpp"
#include "slti/stability.hpp"
#include "slti/synthesis.hpp"
#include "slti/system.hpp"
#include "support/random_systems.hpp"

using namespace slti;
using namespace slti::testing;

namespace {

void BM_ControllabilityStaircase(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Rng rng(11);
  const Eigen::MatrixXd A = rng.matrix(n, n);
  const Eigen::MatrixXd B = rng.matrix(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(controllability_staircase(A, B));
  }
}
BENCHMARK(BM_ControllabilityStaircase)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_StabilizingGain(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Rng rng(13);
  const StateSpaceSystem sys = random_dense_system(rng, n, 2, 2, SpectrumKind::kMixed);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stabilizing_gain(sys.A, sys.B));
  }
}
BENCHMARK(BM_StabilizingGain)->Arg(4)->Arg(8)->Arg(16);

void BM_MinimalRealization(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Rng rng(17);
  StateSpaceSystem sys = random_dense_system(rng, n, 3, 3, SpectrumKind::kStable);
  // Plant an unreachable tail so the reduction has work to do.
  sys.B.bottomRows(n / 4).setZero();
  sys.A.bottomLeftCorner(n / 4, n - n / 4).setZero();
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimal_realization(sys));
  }
}
BENCHMARK(BM_MinimalRealization)->Arg(8)->Arg(16)->Arg(32);

void BM_RealizeChain(benchmark::State& state) {
  Rng rng(19);
  const StructuredPattern p{SparsityPattern::full_lower_triangular(3), IndexSet({1, 1, 1}),
                            IndexSet({1, 1, 1})};
  const IndexSet dims({state.range(0), state.range(0), state.range(0)});
  const StateSpaceSystem chain =
      minimal_realization(random_structured_system(rng, p, dims, SpectrumKind::kMixed));
  const StateSpaceSystem scrambled = scramble(chain, rng.orthogonal(chain.order()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize_chain(scrambled, chain.output_index, chain.input_index));
  }
}
BENCHMARK(BM_RealizeChain)->Arg(1)->Arg(2)->Arg(3);

void BM_ProbeEquality(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  Rng rng(23);
  const StateSpaceSystem a = random_dense_system(rng, n, 2, 2, SpectrumKind::kStable);
  const StateSpaceSystem b = scramble(a, rng.orthogonal(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(systems_equal(a, b));
  }
}
BENCHMARK(BM_ProbeEquality)->Arg(4)->Arg(16)->Arg(64);

void BM_CloseLft(benchmark::State& state) {
  Rng rng(29);
  const StructuredPattern p{SparsityPattern::full_lower_triangular(3), IndexSet({1, 1, 1}),
                            IndexSet({1, 1, 1})};
  StructuredRealization r;
  for (;;) {
    const StateSpaceSystem sys =
        random_structured_system(rng, p, IndexSet({2, 2, 2}), SpectrumKind::kMixed);
    r = verify_structured_realization(sys, p);
    if (r.accepted()) break;
  }
  const K0Result k0 = synthesize_k0(r);
  const YoulaGenerator gen = build_youla_generator(r, k0.gains);
  const StructuredPattern qp{p.sparsity, p.col_index, p.row_index};
  const StateSpaceSystem q =
      random_structured_system(rng, qp, IndexSet({1, 1, 1}), SpectrumKind::kStable, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(close_lft(gen, q));
  }
}
BENCHMARK(BM_CloseLft);

}  // namespace

BENCHMARK_MAIN();
