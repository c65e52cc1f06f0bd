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

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"
#include "slti/errors.hpp"
#include "slti/numerics.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

using namespace slti;
using namespace slti::testing;

namespace {

StructuredRealization g1_accepted() {
  return verify_structured_realization(g1_realization(), s1_pattern());
}

GainSchedule zero_gains(const StructuredRealization& R) {
  GainSchedule gs;
  const IndexSet& n = *R.sys.state_index;
  for (Eigen::Index i = 0; i < n.blocks(); ++i) {
    gs.F_blocks.push_back(
        Eigen::MatrixXd::Zero(R.pattern.col_index.dim(i), n.dim(i)));
    gs.L_blocks.push_back(
        Eigen::MatrixXd::Zero(n.dim(i), R.pattern.row_index.dim(i)));
  }
  return gs;
}

// Scalar unstable plant lifted to an accepted one-node realization.
StructuredRealization scalar_unstable_accepted() {
  StateSpaceSystem sys = scalar_unstable();
  sys.state_index = IndexSet::single(1);
  return verify_structured_realization(
      sys, StructuredPattern{SparsityPattern(1), IndexSet::single(1), IndexSet::single(1)});
}

StructuredPattern two_node_pattern() {
  return StructuredPattern{SparsityPattern::full_lower_triangular(2), IndexSet({1, 1}),
                           IndexSet({1, 1})};
}

double closest_to_one(const std::vector<std::complex<double>>& eigs) {
  double best = 1e300;
  for (const auto& ev : eigs) best = std::min(best, std::abs(ev - std::complex<double>(1.0)));
  return best;
}

}  // namespace

TEST_CASE("stabilizability test passes the worked two-node realization") {
  const SynthesisReport rep = structured_stabilizability_test(g1_accepted());
  CHECK(rep.verdict == Verdict::kStabilizable);
  CHECK(rep.node_failures.empty());
}

TEST_CASE("stabilizability test names the failing node for both coupled splits") {
  const StructuredRealization r21 =
      verify_structured_realization(coupled_unstable_system({2, 1}), two_node_pattern());
  const SynthesisReport rep21 = structured_stabilizability_test(r21);
  CHECK(rep21.verdict == Verdict::kNotStabilizable);
  REQUIRE(rep21.node_failures.size() == 1);
  CHECK(rep21.node_failures[0].node == 0);
  CHECK(!rep21.node_failures[0].detectable.verdict);
  CHECK(rep21.node_failures[0].stabilizable.verdict);

  const StructuredRealization r12 =
      verify_structured_realization(coupled_unstable_system({1, 2}), two_node_pattern());
  const SynthesisReport rep12 = structured_stabilizability_test(r12);
  CHECK(rep12.verdict == Verdict::kNotStabilizable);
  REQUIRE(rep12.node_failures.size() == 1);
  CHECK(rep12.node_failures[0].node == 1);
  CHECK(!rep12.node_failures[0].stabilizable.verdict);
}

TEST_CASE("stabilizability test rejects candidates without structure") {
  StructuredRealization bare;
  bare.sys = g1_realization();
  bare.sys.state_index.reset();
  CHECK_THROWS_AS(structured_stabilizability_test(bare), InputError);

  StateSpaceSystem broken = g1_realization();
  broken.A(0, 1) = 0.3;
  const StructuredRealization r = verify_structured_realization(broken, s1_pattern());
  CHECK_THROWS_AS(structured_stabilizability_test(r), PreconditionError);
}

TEST_CASE("nominal synthesis closes the loop on the worked realization") {
  const K0Result k0 = synthesize_k0(g1_accepted());
  CHECK(k0.controller.accepted());
  CHECK(k0.loop.well_posed);
  CHECK(k0.loop.stable);
  CHECK(k0.loop.stabilizes);
  // The plant is already stable per node, so the cheap zero gains suffice.
  CHECK(k0.gains.F_d.norm() == 0.0);
  CHECK(k0.gains.L_d.norm() == 0.0);
}

TEST_CASE("nominal synthesis separates state feedback from estimation") {
  const K0Result k0 = synthesize_k0(scalar_unstable_accepted());
  CHECK(k0.loop.stabilizes);
  const double f = k0.gains.F_d(0, 0);
  const double l = k0.gains.L_d(0, 0);
  CHECK(1.0 + f < 0.0);
  CHECK(1.0 + l < 0.0);
  std::vector<double> expected{1.0 + f, 1.0 + l};
  std::sort(expected.begin(), expected.end());
  REQUIRE(k0.loop.eigenvalues.size() == 2);
  std::vector<double> got{k0.loop.eigenvalues[0].real(), k0.loop.eigenvalues[1].real()};
  std::sort(got.begin(), got.end());
  CHECK(std::abs(got[0] - expected[0]) < 1e-9);
  CHECK(std::abs(got[1] - expected[1]) < 1e-9);
}

TEST_CASE("nominal synthesis refuses plants that fail the node test") {
  const StructuredRealization r =
      verify_structured_realization(coupled_unstable_system({2, 1}), two_node_pattern());
  CHECK_THROWS_AS(synthesize_k0(r), SynthesisError);
  try {
    synthesize_k0(r);
  } catch (const SynthesisError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("nominal synthesis stabilizes random structured plants") {
  Rng rng(91);
  for (int trial = 0; trial < 12; ++trial) {
    const StructuredPattern p{s2_pattern().sparsity, random_dims(rng, 4, 1, 2),
                              random_dims(rng, 4, 1, 2)};
    const StateSpaceSystem sys =
        random_structured_system(rng, p, random_dims(rng, 4, 1, 2), SpectrumKind::kMixed);
    const StructuredRealization r = verify_structured_realization(sys, p);
    if (!r.accepted()) continue;  // a diagonal block can be born uncontrollable
    const K0Result k0 = synthesize_k0(r);
    CHECK(k0.controller.accepted());
    CHECK(k0.loop.stabilizes);
  }
}

TEST_CASE("the generator with zero gains reduces to the open-loop pieces") {
  const StructuredRealization R = g1_accepted();
  const YoulaGenerator gen = build_youla_generator(R, zero_gains(R));
  CHECK((gen.J.A - R.sys.A).norm() == 0.0);
  CHECK(gen.J.B.leftCols(2).norm() == 0.0);
  CHECK((gen.J.B.rightCols(2) - R.sys.B).norm() == 0.0);
  CHECK(gen.J.C.topRows(2).norm() == 0.0);
  CHECK((gen.J.C.bottomRows(2) + R.sys.C).norm() == 0.0);
  // Feedthrough: zero blocks on the diagonal, identity couplings, minus the
  // plant feedthrough in the corner.
  CHECK(gen.J.D.topLeftCorner(2, 2).norm() == 0.0);
  CHECK((gen.J.D.topRightCorner(2, 2) - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
  CHECK((gen.J.D.bottomLeftCorner(2, 2) - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
  CHECK((gen.J.D.bottomRightCorner(2, 2) + R.sys.D).norm() == 0.0);
}

TEST_CASE("the generator rejects bad gain schedules") {
  const StructuredRealization R = g1_accepted();
  GainSchedule wrong = zero_gains(R);
  wrong.F_blocks[0] = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(build_youla_generator(R, wrong), InputError);

  // Zero gains do not stabilize an unstable node.
  const StructuredRealization S = scalar_unstable_accepted();
  CHECK_THROWS_AS(build_youla_generator(S, zero_gains(S)), InputError);

  const StructuredRealization rejected =
      verify_structured_realization(coupled_unstable_system({2, 1}), two_node_pattern());
  CHECK_THROWS_AS(build_youla_generator(rejected, zero_gains(rejected)), PreconditionError);
}

TEST_CASE("closing the loop with a zero parameter returns the nominal controller") {
  const StructuredRealization R = g1_accepted();
  const K0Result k0 = synthesize_k0(R);
  const YoulaGenerator gen = build_youla_generator(R, k0.gains);

  double residual = -1.0;
  const StructuredRealization K =
      close_lft(gen, zero_system(IndexSet({1, 1}), IndexSet({1, 1})), {}, &residual);
  CHECK(K.accepted());
  CHECK(residual >= 0.0);
  CHECK(residual <= 1e-8);
  CHECK(systems_equal(K.sys, k0.controller.sys));
}

TEST_CASE("closing the loop with structured parameters keeps the loop stable") {
  const StructuredRealization R = g1_accepted();
  const YoulaGenerator gen = build_youla_generator(R, synthesize_k0(R).gains);
  const StructuredPattern qp{R.pattern.sparsity, R.pattern.col_index, R.pattern.row_index};

  // A static structured parameter first.
  Eigen::MatrixXd Dq(2, 2);
  Dq << 0.4, 0.0, -0.3, 0.2;
  const StructuredRealization K_static =
      close_lft(gen, static_gain(Dq, qp.row_index, qp.col_index));
  CHECK(K_static.accepted());
  const ClosedLoopReport loop_static = internal_stability_ss(R.sys, K_static.sys);
  CHECK(loop_static.stabilizes);

  Rng rng(97);
  for (int trial = 0; trial < 15; ++trial) {
    const StateSpaceSystem Q =
        random_structured_system(rng, qp, random_dims(rng, 2, 0, 2), SpectrumKind::kStable);
    double residual = -1.0;
    const StructuredRealization K = close_lft(gen, Q, {}, &residual);
    CHECK(K.accepted());
    CHECK(residual <= 1e-8);
    const ClosedLoopReport loop = internal_stability_ss(R.sys, K.sys);
    CHECK(loop.stable);
    CHECK(loop.stabilizes);
  }
}

TEST_CASE("closing the loop screens the parameter") {
  const StructuredRealization R = g1_accepted();
  const YoulaGenerator gen = build_youla_generator(R, synthesize_k0(R).gains);

  CHECK_THROWS_AS(close_lft(gen, zero_system(IndexSet({1, 1, 1}), IndexSet({1, 1}))), InputError);

  StateSpaceSystem unstable_q;
  unstable_q.A = Eigen::MatrixXd::Constant(1, 1, 0.5);
  unstable_q.B = (Eigen::MatrixXd(1, 2) << 1.0, 0.0).finished();
  unstable_q.C = (Eigen::MatrixXd(2, 1) << 1.0, 0.0).finished();
  unstable_q.D = Eigen::MatrixXd::Zero(2, 2);
  unstable_q.output_index = IndexSet({1, 1});
  unstable_q.input_index = IndexSet({1, 1});
  CHECK_THROWS_AS(close_lft(gen, unstable_q), PreconditionError);

  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(2, 2);
  upper(0, 1) = 0.3;
  CHECK_THROWS_AS(close_lft(gen, static_gain(upper, IndexSet({1, 1}), IndexSet({1, 1}))),
                  PreconditionError);
}

TEST_CASE("closing the loop rejects parameters that break well-posedness") {
  // A plant with unit feedthrough makes I + D Q(inf) singular at Q = -1.
  StateSpaceSystem plant;
  plant.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  plant.B = Eigen::MatrixXd::Constant(1, 1, 1.0);
  plant.C = Eigen::MatrixXd::Constant(1, 1, 1.0);
  plant.D = Eigen::MatrixXd::Constant(1, 1, 1.0);
  plant.output_index = IndexSet::single(1);
  plant.input_index = IndexSet::single(1);
  plant.state_index = IndexSet::single(1);
  const StructuredRealization R = verify_structured_realization(
      plant, StructuredPattern{SparsityPattern(1), IndexSet::single(1), IndexSet::single(1)});
  REQUIRE(R.accepted());
  const YoulaGenerator gen = build_youla_generator(R, synthesize_k0(R).gains);
  const Eigen::MatrixXd minus_one = Eigen::MatrixXd::Constant(1, 1, -1.0);
  CHECK_THROWS_AS(close_lft(gen, static_gain(minus_one, IndexSet::single(1), IndexSet::single(1))),
                  PreconditionError);
}

TEST_CASE("the transfer-level test acquits the worked example") {
  const SynthesisReport rep = diagonal_test(tf_to_ss(g1_spec()), s1_pattern());
  CHECK(rep.verdict == Verdict::kStabilizable);
  REQUIRE(rep.controller.has_value());
  CHECK(rep.controller->accepted());
  REQUIRE(rep.loop.has_value());
  CHECK(rep.loop->stable);
}

TEST_CASE("the transfer-level test convicts the shared-pole example") {
  const SynthesisReport rep = diagonal_test(g2_minimal(), s2_pattern());
  CHECK(rep.verdict == Verdict::kNotStabilizable);
  REQUIRE(rep.loop.has_value());
  CHECK(!rep.loop->stable);
  CHECK(closest_to_one(rep.loop->eigenvalues) < 1e-6);
}

TEST_CASE("the transfer-level test convicts the coupled two-node plant") {
  const SynthesisReport rep = diagonal_test(coupled_unstable_system({}), two_node_pattern());
  CHECK(rep.verdict == Verdict::kNotStabilizable);
  REQUIRE(rep.loop.has_value());
  CHECK(closest_to_one(rep.loop->eigenvalues) < 1e-6);
}

TEST_CASE("the transfer-level verdict survives randomized sub-gains") {
  DiagonalTestOptions opts;
  opts.randomize_gains = true;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    opts.gain_seed = seed;
    CHECK(diagonal_test(tf_to_ss(g1_spec()), s1_pattern(), {}, opts).verdict ==
          Verdict::kStabilizable);
    CHECK(diagonal_test(g2_minimal(), s2_pattern(), {}, opts).verdict ==
          Verdict::kNotStabilizable);
  }
}

TEST_CASE("the transfer-level and realization-level verdicts agree on the fixtures") {
  CHECK(diagonal_test(tf_to_ss(g1_spec()), s1_pattern()).verdict ==
        structured_stabilizability_test(g1_accepted()).verdict);
  const StructuredRealization g2_cols =
      verify_structured_realization(tf_to_ss(g2_spec()), s2_pattern());
  CHECK(diagonal_test(g2_minimal(), s2_pattern()).verdict ==
        structured_stabilizability_test(g2_cols).verdict);
  const StructuredRealization coupled =
      verify_structured_realization(coupled_unstable_system({2, 1}), two_node_pattern());
  CHECK(diagonal_test(coupled_unstable_system({}), two_node_pattern()).verdict ==
        structured_stabilizability_test(coupled).verdict);
}

TEST_CASE("the transfer-level test refuses unstructured plants") {
  Rng rng(101);
  StateSpaceSystem full = random_dense_system(rng, 2, 2, 2, SpectrumKind::kStable, 1.0);
  full.output_index = IndexSet({1, 1});
  full.input_index = IndexSet({1, 1});
  full.D(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonal_test(full, two_node_pattern()), PreconditionError);
}
