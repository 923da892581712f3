#include <gtest/gtest.h>

#include "bpg/gauging.hpp"
#include "bpg/models.hpp"
#include "oracles.hpp"

using namespace bpg;

namespace {

BpConfig target(double t) {
  BpConfig c;
  c.target_delta = t;
  return c;
}

RealVector dense_schmidt(const TensorNetworkState& st, EdgeId e) {
  const Vector psi = oracle::brute_force_state(st);
  const std::vector<long> dims(static_cast<std::size_t>(st.num_vertices()), st.site_dim(0));
  return oracle::schmidt_values(psi, dims, oracle::tree_side(st.graph, e));
}

}  // namespace

TEST(GaugeFromMessages, TwoSiteSchmidtSpectrum) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::path(2)), 2, 3, 1);
  const BpResult r = bp_run(st, target(1e-14));
  const VidalState vs = gauge_from_messages(st, r.messages);
  EXPECT_LT(spectrum_distance(vs.lambda[0], dense_schmidt(st, 0)), 1e-12);
  EXPECT_NEAR(vs.lambda[0].sum(), 1.0, 1e-13);
}

TEST(GaugeFromMessages, ProductStateIsFixed) {
  const VidalState neel = neel_state(build_graph(LatticeSpec::square(2, 2)));
  const TensorNetworkState sym = vidal_to_symmetric(neel);
  const VidalState vs = gauge_from_messages(sym, init_messages(sym));
  for (const auto& l : vs.lambda) EXPECT_NEAR(l(0), 1.0, 1e-14);
  EXPECT_LT(relative_amplitude_error(state_vector(neel), state_vector(vs)), 1e-14);
}

TEST(GaugeFromMessages, LoopyLatticeGaugedAndPreserved) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::square(3, 3)), 2, 2, 2);
  const BpResult r = bp_run(st, target(1e-12));
  const VidalState vs = gauge_from_messages(st, r.messages);
  EXPECT_LE(vidal_distance(vs), 1e-10);
  EXPECT_LE(relative_amplitude_error(oracle::brute_force_state(st), state_vector(vs)), 1e-10);
}

TEST(BpGauge, PathSatisfiesIsometryConditions) {
  const Graph g = build_graph(LatticeSpec::path(5));
  const GaugeResult r = bp_gauge(random_tns(g, 3, 2, 3), target(1e-12));
  // Gamma_v with the Lambda of one neighbor absorbed is an isometry onto
  // the other bond, for every interior edge direction.
  for (VertexId v = 0; v < 5; ++v) {
    for (EdgeId e : g.incident(v)) {
      const LabeledTensor a = absorb_lambdas(r.state, v, e);
      const std::size_t ax = r.state.bond_axis(v, e);
      Matrix gram = axis_gram(a, a, ax);
      gram /= gram.trace();
      EXPECT_LT((gram - Matrix::Identity(gram.rows(), gram.cols()) / static_cast<double>(gram.rows())).norm(), 1e-9)
          << "v=" << v << " e=" << e;
    }
  }
  EXPECT_LE(vidal_distance(r.state), 1e-10);
}

TEST(BpGauge, DeskScaleSquareReachesTarget) {
  const GaugeResult r = bp_gauge(random_tns(build_graph(LatticeSpec::square(6, 6)), 6, 2, 4), target(1e-10));
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(vidal_distance(r.state), 1e-8);
}

TEST(BpGauge, HexagonalAndRandomRegularDecayExponentially) {
  for (auto spec : {LatticeSpec::hexagonal(3, 3), LatticeSpec::random_regular(40, 3, 6)}) {
    const GaugeResult r = bp_gauge(random_tns(build_graph(spec), 3, 2, 5), target(1e-10));
    ASSERT_TRUE(r.report.converged);
    const auto& d = r.report.deltas;
    ASSERT_GE(d.size(), 4u);
    const double rate = std::log(d.back() / d[1]) / static_cast<double>(d.size() - 2);
    EXPECT_LT(rate, -0.5);
  }
}

TEST(BpGauge, TruncationLimitsBondDimension) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::square(3, 3)), 4, 2, 6);
  const GaugeResult r = bp_gauge(st, target(1e-10), TruncationPolicy::rank(2));
  for (EdgeId e = 0; e < st.graph.num_edges(); ++e) EXPECT_LE(r.state.bond_dim(e), 2);
}

TEST(EagerGauge, IterationParityWithBp) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const TensorNetworkState st = random_tns(build_graph(LatticeSpec::square(4, 4)), 3, 2, seed);
    EXPECT_EQ(bp_gauge(st, target(1e-8)).report.iterations, eager_gauge(st, target(1e-8)).report.iterations);
  }
}

TEST(EagerGauge, TreeNeedsAtMostTwoIterations) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::random_tree(9, 4)), 3, 2, 7);
  EXPECT_LE(eager_gauge(st, target(1e-10)).report.iterations, 2);
}

TEST(SimpleUpdate, AlreadyGaugedStateIsFixed) {
  const GaugeResult r = bp_gauge(random_tns(build_graph(LatticeSpec::square(3, 3)), 3, 2, 8), target(1e-13));
  BpConfig one = target(1e-300);
  one.max_iters = 1;
  const GaugeResult again = simple_update_gauge(r.state, one);
  EXPECT_LE(again.report.deltas.front(), 1e-10);
}

TEST(SimpleUpdate, TwoSiteGivesSchmidtSpectrum) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::path(2)), 3, 2, 9);
  const GaugeResult r = simple_update_gauge(st, target(1e-12));
  EXPECT_LT(spectrum_distance(r.state.lambda[0], dense_schmidt(st, 0)), 1e-12);
}

TEST(SimpleUpdate, ConvergesOnRandomSquare) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::square(4, 4)), 4, 2, 10);
  const GaugeResult bp = bp_gauge(st, target(1e-10));
  const GaugeResult su = simple_update_gauge(st, target(1e-10));
  EXPECT_TRUE(su.report.converged);
  EXPECT_LE(vidal_distance(su.state), 1e-8);
  RecordProperty("bp_sweeps", bp.report.iterations);
  RecordProperty("simple_update_sweeps", su.report.iterations);
}

TEST(SimpleUpdate, SameFixedPointAsBp) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::square(4, 4)), 4, 2, 11);
  const GaugeResult a = bp_gauge(st, target(1e-10));
  const GaugeResult b = eager_gauge(st, target(1e-10));
  const GaugeResult c = simple_update_gauge(st, target(1e-10));
  for (std::size_t e = 0; e < a.state.lambda.size(); ++e) {
    EXPECT_LT(spectrum_distance(a.state.lambda[e], b.state.lambda[e]), 1e-6);
    EXPECT_LT(spectrum_distance(a.state.lambda[e], c.state.lambda[e]), 1e-6);
  }
}

TEST(VidalDistance, ExactTwoSiteIsZero) {
  const GaugeResult r = bp_gauge(random_tns(build_graph(LatticeSpec::path(2)), 2, 2, 12), target(1e-14));
  EXPECT_LE(vidal_distance(r.state), 1e-14);
}

TEST(VidalDistance, TracksDeltaOrderOfMagnitude) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::square(4, 4)), 3, 2, 13);
  const GaugeResult r = bp_gauge(st, target(1e-8));
  const double c = vidal_distance(r.state);
  EXPECT_LE(c, 100.0 * 1e-8);
}

TEST(VidalDistance, PerturbedLambdaDetected) {
  const GaugeResult r = bp_gauge(random_tns(build_graph(LatticeSpec::square(3, 3)), 3, 2, 14), target(1e-12));
  VidalState bad = r.state;
  bad.lambda[4](0) *= 1.1;
  EXPECT_GT(vidal_distance(bad), 1e-3);
}

TEST(VidalDistance, ProductStateIsZero) {
  EXPECT_LE(vidal_distance(neel_state(build_graph(LatticeSpec::square(3, 3)))), 1e-15);
}

TEST(Gauge, ChiOneProductStateConvergesImmediately) {
  const TensorNetworkState st = random_tns(build_graph(LatticeSpec::square(3, 3)), 1, 2, 15);
  EXPECT_LE(bp_gauge(st, target(1e-10)).report.iterations, 2);
}
