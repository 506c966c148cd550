#include <gtest/gtest.h>

#include "blindrz/angle_codec.hpp"
#include "blindrz/audit.hpp"

using namespace blindrz;

namespace {

// precision_bits(pi/8) == 3.
constexpr double kEpsM3 = kPi / 8;

Transcript run(const Circuit& c, double eps, std::uint64_t seed = 0, bool pads = true) {
  RunOptions o;
  o.epsilon = eps;
  o.seed = seed;
  o.pads = pads;
  return run_protocol(c, o).transcript;
}

}  // namespace

TEST(ClassicalView, HadamardIsOneBlockMarker) {
  const auto v = classical_view(run(Circuit{1, {GateOp::h(0)}}, 1e-2));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(v[0].block_start);
  EXPECT_FALSE(v[0].tag);
  EXPECT_EQ(serialize_view(v), "B");
}

TEST(ClassicalView, RzScheduleAtThreeBits) {
  ASSERT_EQ(precision_bits(kEpsM3), 3);
  const auto v = classical_view(run(Circuit{1, {GateOp::rz(0, 1.234)}}, kEpsM3));
  EXPECT_EQ(serialize_view(v), "B1;2;1;3;2;1");
  EXPECT_EQ(v, expected_view(skeleton(Circuit{1, {GateOp::rz(0, 0.0)}}), 3));
}

TEST(ClassicalView, RejectsIncompleteTranscript) {
  Transcript t;
  EXPECT_THROW(classical_view(t), std::invalid_argument);
  EXPECT_THROW(count_rounds(t), std::invalid_argument);
}

TEST(ViewInvariance, Examples) {
  const std::vector<std::uint64_t> seeds{0, 1, 2, 3};
  const auto rz = view_invariance(Circuit{1, {GateOp::rz(0, 0.3)}}, Circuit{1, {GateOp::rz(0, 2.9)}}, 1e-2, seeds);
  EXPECT_TRUE(rz.skeleton_match);
  EXPECT_TRUE(rz.identical);
  EXPECT_EQ(rz.runs, 4u);
  const auto hh = view_invariance(Circuit{1, {GateOp::h(0)}}, Circuit{1, {GateOp::h(0)}}, 1e-2, seeds);
  EXPECT_TRUE(hh.identical);
  const auto mismatch = view_invariance(Circuit{1, {GateOp::h(0)}}, Circuit{1, {GateOp::rz(0, 1.0)}}, 1e-2, seeds);
  EXPECT_FALSE(mismatch.skeleton_match);
  EXPECT_EQ(mismatch.detail, "skeleton mismatch");
}

TEST(ViewInvariance, QubitChoiceDoesNotChangeTheView) {
  const Circuit a{2, {GateOp::h(0), GateOp::cz(0, 1), GateOp::rz(1, 0.1), GateOp::x(0)}};
  const Circuit b{2, {GateOp::h(1), GateOp::cz(1, 0), GateOp::rz(0, -2.0), GateOp::z(1)}};
  EXPECT_EQ(serialize_view(classical_view(run(a, 1e-1, 4))), serialize_view(classical_view(run(b, 1e-1, 9))));
}

TEST(Mixedness, ExhaustiveHadamard) {
  MixednessOptions o;
  const auto r = payload_mixedness(Circuit{1, {GateOp::h(0)}}, 1e-2, o);
  EXPECT_LT(r.max_distance, 1e-10);
  EXPECT_EQ(r.slots_checked, 4u);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.garbage_deviation, 1e-12);
}

TEST(Mixedness, ExhaustiveRzAllRounds) {
  MixednessOptions o;
  const Circuit c{1, {GateOp::h(0), GateOp::rz(0, 0.77)}};
  const auto r = payload_mixedness(c, kEpsM3, o);
  EXPECT_LT(r.max_distance, 1e-10);
  EXPECT_EQ(r.slots_checked, 4u + 3u * 6u + 6u);
  EXPECT_LT(r.garbage_deviation, 1e-9);
}

TEST(Mixedness, SampledRzRound) {
  MixednessOptions o;
  o.mode = MixMode::Sampled;
  o.samples = 4096;
  const auto r = payload_mixedness(Circuit{1, {GateOp::h(0), GateOp::rz(0, 0.77)}}, 1.0, o);
  EXPECT_DOUBLE_EQ(r.threshold, 3.0 / 64.0);
  EXPECT_LT(r.max_distance, 0.1);
  EXPECT_TRUE(r.pass);
}

TEST(Mixedness, UnpaddedPlusStateFails) {
  MixednessOptions o;
  o.pads = false;
  // |+> sits in slot 1 on the outbound leg of the second H block.
  const auto r = payload_mixedness(Circuit{1, {GateOp::h(0), GateOp::h(0)}}, 1e-2, o);
  EXPECT_NEAR(r.max_distance, 0.5, 1e-12);
  EXPECT_FALSE(r.pass);
}

TEST(RoundCount, Laws) {
  const auto h = count_rounds(run(Circuit{1, {GateOp::h(0)}}, 1e-2));
  EXPECT_EQ(h.total, 1u);
  EXPECT_TRUE(h.law_holds);

  const auto rz = count_rounds(run(Circuit{1, {GateOp::rz(0, 0.5)}}, 1e-2));
  EXPECT_EQ(rz.total, 45u);
  EXPECT_LE(rz.total, 81u);
  EXPECT_TRUE(rz.law_holds);

  const auto mix = count_rounds(run(Circuit{2, {GateOp::h(0), GateOp::cz(0, 1), GateOp::rz(1, 2.0)}}, kEpsM3));
  EXPECT_EQ(mix.total, 8u);
  ASSERT_EQ(mix.per_gate.size(), 3u);
  EXPECT_EQ(mix.per_gate[2].rounds, 6u);
  EXPECT_TRUE(mix.law_holds);
}

TEST(RoundCount, TamperedTranscriptBreaksLaw) {
  auto t = run(Circuit{1, {GateOp::rz(0, 0.5)}}, kEpsM3);
  t.gates[0].round_trips = 5;
  EXPECT_FALSE(count_rounds(t).law_holds);
}

TEST(Confinement, HoldsOnRunsAndCatchesViolations) {
  auto t = run(Circuit{2, {GateOp::h(0), GateOp::cz(0, 1), GateOp::rz(1, 2.0), GateOp::measure(0)}}, kEpsM3);
  EXPECT_TRUE(capability_confinement(t).pass);
  t.ops.push_back(OpRecord{Party::Client, GateKind::H, {0}});
  t.ops.push_back(OpRecord{Party::Server, GateKind::X, {0}});
  const auto c = capability_confinement(t);
  EXPECT_FALSE(c.pass);
  ASSERT_EQ(c.violations.size(), 2u);
  EXPECT_EQ(c.violations[0], "client applied h");
}

TEST(RunAudit, PassesOnPaddedRun) {
  AuditOptions o;
  o.compare = Circuit{2, {GateOp::h(1), GateOp::cz(1, 0), GateOp::rz(0, 3.0)}};
  const auto rep = run_audit(Circuit{2, {GateOp::h(0), GateOp::cz(0, 1), GateOp::rz(1, 0.4)}}, kEpsM3, o);
  EXPECT_TRUE(rep.pass);
  ASSERT_EQ(rep.checks.size(), 6u);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

TEST(RunAudit, FailsWithoutPads) {
  AuditOptions o;
  o.mixedness.pads = false;
  const auto rep = run_audit(Circuit{1, {GateOp::h(0), GateOp::h(0)}}, 1e-2, o);
  EXPECT_FALSE(rep.pass);
}
