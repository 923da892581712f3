#include <gtest/gtest.h>

#include <random>

#include "bpg/errors.hpp"
#include "bpg/linalg.hpp"
#include "bpg/models.hpp"
#include "bpg/network.hpp"
#include "oracles.hpp"

using namespace bpg;

namespace {

Matrix random_matrix(long r, long c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (long i = 0; i < r; ++i) {
    for (long j = 0; j < c; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

Matrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<long>(v.size()));
  long i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

}  // namespace

TEST(Contract, IdentityRelabelsVector) {
  const Index i = make_index(2), j = make_index(2);
  const LabeledTensor id = from_matrix(Matrix::Identity(2, 2), {i}, {j});
  const LabeledTensor v({j}, {Complex(3, 1), Complex(-2, 0)});
  const LabeledTensor out = contract(id, v);
  ASSERT_EQ(out.rank(), 1u);
  EXPECT_TRUE(out.index(0) == i);
  EXPECT_EQ(out.data()[0], Complex(3, 1));
  EXPECT_EQ(out.data()[1], Complex(-2, 0));
}

TEST(Contract, MatchesTripleLoopProduct) {
  const Index i = make_index(2), j = make_index(3), k = make_index(2);
  const Matrix a = random_matrix(2, 3, 1), b = random_matrix(3, 2, 2);
  const LabeledTensor out = contract(from_matrix(a, {i}, {j}), from_matrix(b, {j}, {k}));
  const Matrix got = to_matrix({out, {i}, {k}});
  EXPECT_LT((got - oracle::matmul(a, b)).norm(), 1e-13);
}

TEST(Contract, IsingNormNetworkGivesPartitionFunction) {
  const Graph g = build_graph(LatticeSpec::square(2, 2));
  const TensorNetworkState st = ising_sqrt_partition_state(g, 0.2, 0.5);
  const std::vector<LabeledTensor> doubled = doubled_network(st);
  const Complex z = contract_all(doubled).value() * std::exp(2.0 * st.log_scale);
  EXPECT_NEAR(z.real(), oracle::ising_partition(g, 0.2, 0.5), 1e-10 * z.real());
  EXPECT_NEAR(z.imag(), 0.0, 1e-10 * z.real());
}

TEST(Contract, ResultOrderIsFreeIndicesOfAThenB) {
  const Index a1 = make_index(2), s = make_index(3), b1 = make_index(4);
  LabeledTensor a({a1, s}), b({s, b1});
  const LabeledTensor out = contract(a, b);
  ASSERT_EQ(out.rank(), 2u);
  EXPECT_TRUE(out.index(0) == a1);
  EXPECT_TRUE(out.index(1) == b1);
}

TEST(Contract, MismatchedSharedDimensionThrows) {
  const Index s = make_index(3);
  LabeledTensor a({s}), b({s.with_dim(2)});
  EXPECT_THROW(contract(a, b), DimensionMismatch);
}

TEST(Tensor, PermutationRoundTrip) {
  const Index a = make_index(2), b = make_index(3), c = make_index(4);
  LabeledTensor t({a, b, c});
  for (std::size_t n = 0; n < t.size(); ++n) t.data()[n] = Complex(static_cast<double>(n), 0.5);
  const std::vector<Index> order = {c, a, b};
  const LabeledTensor p = t.permuted(order);
  const std::vector<long> at = {3, 1, 2};
  const std::vector<long> orig = {1, 2, 3};
  EXPECT_EQ(p.at(at), t.at(orig));
  const std::vector<Index> back = {a, b, c};
  const LabeledTensor q = p.permuted(back);
  for (std::size_t n = 0; n < t.size(); ++n) EXPECT_EQ(q.data()[n], t.data()[n]);
}

TEST(Svd, IdentityGivesUnitSpectrum) {
  const Index r = make_index(3), c = make_index(3);
  const LabeledTensor t = from_matrix(Matrix::Identity(3, 3), {r}, {c});
  const TensorSvd out = svd({t, {r}, {c}});
  ASSERT_EQ(out.singular_values.size(), 3u);
  for (double s : out.singular_values) EXPECT_NEAR(s, 1.0, 1e-14);
}

TEST(Svd, DiagonalTruncationDiscardsSmallest) {
  const Index r = make_index(3), c = make_index(3);
  const LabeledTensor t = from_matrix(diag({3, 1, 0.5}), {r}, {c});
  const TensorSvd out = svd({t, {r}, {c}}, 2);
  ASSERT_EQ(out.singular_values.size(), 2u);
  EXPECT_NEAR(out.singular_values[0], 3.0, 1e-14);
  EXPECT_NEAR(out.singular_values[1], 1.0, 1e-14);
  const LabeledTensor us = contract(out.u, out.s);
  const LabeledTensor recon = contract(us, out.v);
  const Matrix m = to_matrix({recon, {r}, {c}});
  EXPECT_NEAR((m - diag({3, 1, 0.5})).norm(), 0.5, 1e-13);
  EXPECT_NEAR(out.discarded_sq, 0.25, 1e-14);
}

TEST(Svd, RandomReconstructionAndWeight) {
  const Matrix m = random_matrix(4, 6, 7);
  const linalg::Svd dec = linalg::svd(m);
  EXPECT_LE((dec.u * dec.s.cast<Complex>().asDiagonal() * dec.vh - m).norm(), 1e-12 * m.norm());
  EXPECT_NEAR(dec.s.squaredNorm(), m.squaredNorm(), 1e-12 * m.squaredNorm());
  EXPECT_LT((dec.u.adjoint() * dec.u - Matrix::Identity(4, 4)).norm(), 1e-13);
}

TEST(Svd, CutoffOutOfRangeRejected) {
  EXPECT_THROW(TruncationPolicy::rank(2, 1.5).validate(), InvalidSpec);
  EXPECT_THROW(TruncationPolicy::rank(0).validate(), InvalidSpec);
}

TEST(Svd, NonFiniteInputRejected) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0);
  EXPECT_THROW(linalg::svd(m), NumericalError);
}

TEST(Qr, IdentityGivesIdentityFactors) {
  const linalg::Qr dec = linalg::qr(Matrix::Identity(3, 3));
  EXPECT_LT((dec.q.cwiseAbs() - Matrix::Identity(3, 3).cwiseAbs()).norm(), 1e-14);
  EXPECT_LT((dec.q * dec.r - Matrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(Qr, RandomTallMatrix) {
  const Matrix m = random_matrix(6, 3, 11);
  const linalg::Qr dec = linalg::qr(m);
  EXPECT_LT((dec.q.adjoint() * dec.q - Matrix::Identity(3, 3)).norm(), 1e-13);
  EXPECT_LT((dec.q * dec.r - m).norm(), 1e-13 * m.norm());
}

TEST(Qr, RankDeficientInput) {
  Matrix m(2, 2);
  m << 1, 1, 1, 1;
  const linalg::Qr dec = linalg::qr(m);
  EXPECT_LT(dec.r.row(1).norm(), 1e-13);
  EXPECT_LT((dec.q * dec.r - m).norm(), 1e-13);
}

TEST(SqrtInvSqrt, Identity) {
  const linalg::SqrtPair p = linalg::sqrt_and_inv_sqrt(Matrix::Identity(3, 3));
  EXPECT_LT((p.half.adjoint() * p.half - Matrix::Identity(3, 3)).norm(), 1e-14);
  EXPECT_LT((p.half * p.inv_half - Matrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(SqrtInvSqrt, Diagonal) {
  const linalg::SqrtPair p = linalg::sqrt_and_inv_sqrt(diag({4, 9}));
  EXPECT_LT((p.half - diag({3, 2})).norm() * (p.half - diag({2, 3})).norm(), 1e-12);
  EXPECT_LT((p.half.adjoint() * p.half - diag({4, 9})).norm(), 1e-13);
  const Matrix inv = p.inv_half * p.inv_half.adjoint();
  EXPECT_LT((inv - diag({0.25, 1.0 / 9.0})).norm(), 1e-13);
}

TEST(SqrtInvSqrt, PseudoInverseOfSingular) {
  const linalg::SqrtPair p = linalg::sqrt_and_inv_sqrt(diag({1, 0}), 1e-12);
  EXPECT_LT((p.half * p.inv_half - diag({1, 0})).norm(), 1e-14);
  EXPECT_LT((p.inv_half * p.inv_half.adjoint() - diag({1, 0})).norm(), 1e-14);
}

TEST(SqrtInvSqrt, RejectsNonHermitianAndNegative) {
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_THROW(linalg::sqrt_and_inv_sqrt(a), NotHermitian);
  EXPECT_THROW(linalg::sqrt_and_inv_sqrt(diag({1, -0.5})), NotPositive);
}

TEST(TraceDistance, Examples) {
  const Matrix a = random_matrix(3, 3, 5);
  const Matrix psd = a * a.adjoint();
  EXPECT_NEAR(linalg::normalized_trace_distance(psd, psd), 0.0, 1e-14);
  EXPECT_NEAR(linalg::normalized_trace_distance(Matrix::Identity(2, 2), 5.0 * Matrix::Identity(2, 2)), 0.0, 1e-14);
  EXPECT_NEAR(linalg::normalized_trace_distance(diag({1, 0}), diag({0, 1})), 2.0, 1e-14);
  EXPECT_THROW(linalg::normalized_trace_distance(Matrix::Zero(2, 2), psd.topLeftCorner(2, 2)), DegenerateInput);
}

TEST(Expm, MatchesTaylorSeries) {
  const Matrix a = random_matrix(4, 4, 3);
  const Matrix h = 0.3 * (a + a.adjoint());
  EXPECT_LT((linalg::expm_hermitian(h, -1.0) - oracle::taylor_expm(-h)).norm(), 1e-12);
}
