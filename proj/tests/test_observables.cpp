#include <gtest/gtest.h>

#include "bpg/gauging.hpp"
#include "bpg/linalg.hpp"
#include "bpg/models.hpp"
#include "bpg/observables.hpp"
#include "oracles.hpp"

using namespace bpg;

namespace {

BpConfig tight() {
  BpConfig c;
  c.target_delta = 1e-12;
  return c;
}

}  // namespace

TEST(RankOne, SpinUpProductState) {
  const Graph g = build_graph(LatticeSpec::path(2));
  const VidalState vs = neel_state(g);
  EXPECT_NEAR(rank_one_expectation(vs, LocalOperator::sz(), 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(rank_one_expectation(vs, LocalOperator::sz(), 1).real(), -0.5, 1e-15);
}

TEST(RankOne, InfiniteTemperatureIsingHasZeroMagnetization) {
  const Graph g = build_graph(LatticeSpec::square(3, 3));
  const GaugeResult r = bp_gauge(ising_sqrt_partition_state(g, 0.0, 0.5), tight());
  for (VertexId v = 0; v < 9; ++v) EXPECT_NEAR(rank_one_expectation(r.state, LocalOperator::sz(), v).real(), 0.0, 1e-12);
}

TEST(RankOne, LoopyTwoByTwoIsingCloseToExact) {
  const Graph g = build_graph(LatticeSpec::square(2, 2));
  const TensorNetworkState st = ising_sqrt_partition_state(g, 0.3, 0.5);
  const GaugeResult r = bp_gauge(st, tight());
  ASSERT_LE(vidal_distance(r.state), 1e-10);
  const double exact = exact_expectation(st, LocalOperator::sz(), 0).real();
  const double approx = rank_one_expectation(r.state, LocalOperator::sz(), 0).real();
  EXPECT_NEAR(approx, exact, 1e-2);
  EXPECT_NEAR(exact, oracle::site_expectation(oracle::brute_force_state(st), {2, 2, 2, 2}, 0,
                                              LocalOperator::sz().matrix).real(),
              1e-12);
}

TEST(RankOne, ExactOnTrees) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Graph g = build_graph(LatticeSpec::random_tree(8, seed));
    const TensorNetworkState st = random_tns(g, 3, 2, seed);
    const GaugeResult r = bp_gauge(st, tight());
    const Vector psi = oracle::brute_force_state(st);
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      for (const LocalOperator& op : {LocalOperator::sz(), LocalOperator::sx()}) {
        const Complex exact = oracle::site_expectation(psi, std::vector<long>(8, 2), v, op.matrix);
        EXPECT_LT(std::abs(rank_one_expectation(r.state, op, v) - exact), 1e-9);
        EXPECT_LT(std::abs(exact_expectation(st, op, v) - exact), 1e-10);
      }
    }
  }
}

TEST(RankOne, ProductStateMatchesExact) {
  const Graph g = build_graph(LatticeSpec::square(2, 3));
  const VidalState vs = neel_state(g);
  const TensorNetworkState plain = vidal_to_plain(vs);
  for (VertexId v = 0; v < 6; ++v) {
    EXPECT_EQ(rank_one_expectation(vs, LocalOperator::sz(), v).real(),
              exact_expectation(plain, LocalOperator::sz(), v).real());
  }
}

TEST(TwoSite, IdentityTermsCountTerms) {
  const Graph g = build_graph(LatticeSpec::square(3, 3));
  const GaugeResult r = bp_gauge(random_tns(g, 2, 2, 4), tight());
  std::vector<TwoSiteTerm> terms;
  for (EdgeId e = 0; e < g.num_edges(); ++e) terms.push_back({Matrix::Identity(4, 4), e});
  EXPECT_NEAR(rank_one_two_site_energy(r.state, terms).real(), static_cast<double>(g.num_edges()), 1e-9);
}

TEST(TwoSite, TreeMatchesExact) {
  const Graph g = build_graph(LatticeSpec::random_tree(7, 5));
  const TensorNetworkState st = random_tns(g, 3, 2, 6);
  const GaugeResult r = bp_gauge(st, tight());
  const double exact = oracle::tfi_energy(oracle::brute_force_state(st), g, 0.7);
  EXPECT_NEAR(rank_one_tfi_energy(r.state, 0.7), exact, 1e-9);
  EXPECT_NEAR(exact_tfi_energy(st, 0.7), exact, 1e-10);
}

TEST(TwoSite, LoopyDeviationIsFinite) {
  const Graph g = build_graph(LatticeSpec::square(2, 2));
  const TensorNetworkState st = random_tns(g, 2, 2, 7);
  const GaugeResult r = bp_gauge(st, tight());
  const double exact = exact_tfi_energy(st, 1.0);
  const double approx = rank_one_tfi_energy(r.state, 1.0);
  EXPECT_TRUE(std::isfinite(approx));
  RecordProperty("relative_deviation", std::to_string(std::abs(approx - exact) / std::abs(exact)));
}

TEST(Hamiltonian, GroundEnergyMatchesDenseDiagonalization) {
  const Graph g = build_graph(LatticeSpec::square(2, 2));
  const Matrix h = tfi_hamiltonian(g, 1.3);
  EXPECT_LT((h - h.adjoint()).norm(), 1e-14);
  const double e0 = linalg::hermitian_eig(h).values.minCoeff();
  EXPECT_NEAR(tfi_ground_energy(g, 1.3), e0, 1e-12);
  Vector basis = Vector::Zero(16);
  basis(5) = 1.0;
  EXPECT_NEAR((basis.adjoint() * h * basis)(0).real(), oracle::tfi_energy(basis, g, 1.3), 1e-13);
}
