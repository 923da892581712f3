#include "bpg/observables.hpp"

#include <Eigen/Eigenvalues>

#include "bpg/errors.hpp"
#include "bpg/gauging.hpp"
#include "bpg/linalg.hpp"

namespace bpg {

namespace pauli {
Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

LocalOperator LocalOperator::sz() { return {0.5 * pauli::z(), "Sz"}; }
LocalOperator LocalOperator::sx() { return {0.5 * pauli::x(), "Sx"}; }
LocalOperator LocalOperator::identity(long dim) { return {Matrix::Identity(dim, dim), "I"}; }

namespace {

// sum over s, s' and the bond axes of conj(w[s', ..]) O(s', s) w[s, ..].
Complex site_sandwich(const LabeledTensor& w, const Matrix& op) {
  const long d = w.index(0).dim;
  const long rest = static_cast<long>(w.size()) / d;
  Eigen::Map<const RowMajorMatrix> m(w.data().data(), d, rest);
  return (m.conjugate().transpose() * op * m).trace();
}

}  // namespace

Complex rank_one_expectation(const VidalState& vs, const LocalOperator& op, VertexId v) {
  const LabeledTensor w = absorb_lambdas(vs, v, -1);
  if (op.matrix.rows() != w.index(0).dim || op.matrix.cols() != w.index(0).dim) {
    throw DimensionMismatch("rank_one_expectation: operator dims differ from site dim");
  }
  const Complex den = site_sandwich(w, Matrix::Identity(op.matrix.rows(), op.matrix.cols()));
  if (std::abs(den) == 0.0) throw DegenerateState("rank_one_expectation: zero norm");
  return site_sandwich(w, op.matrix) / den;
}

Complex exact_product_expectation(const TensorNetworkState& tns, const std::vector<Matrix>& ops, long limit) {
  const Complex den = contract_all(doubled_network(tns), limit).value();
  if (std::abs(den) == 0.0) throw DegenerateState("exact_expectation: zero norm");
  return contract_all(doubled_network(tns, ops), limit).value() / den;
}

Complex exact_expectation(const TensorNetworkState& tns, const LocalOperator& op, VertexId v, long limit) {
  std::vector<Matrix> ops(static_cast<std::size_t>(tns.num_vertices()));
  ops[static_cast<std::size_t>(v)] = op.matrix;
  return exact_product_expectation(tns, ops, limit);
}

Complex rank_one_two_site_energy(const VidalState& vs, const std::vector<TwoSiteTerm>& terms) {
  Complex total = 0.0;
  for (const TwoSiteTerm& term : terms) {
    const Edge& ed = vs.graph.edge(term.edge);
    LabeledTensor wu = absorb_lambdas(vs, ed.u, term.edge);
    const LabeledTensor wv = absorb_lambdas(vs, ed.v, term.edge);
    const RealVector& lam = vs.lambda[static_cast<std::size_t>(term.edge)];
    scale_axis(wu, vs.bond_axis(ed.u, term.edge), std::vector<double>(lam.data(), lam.data() + lam.size()));
    const LabeledTensor theta = contract(wu, wv);
    const Index& su = vs.site_index[static_cast<std::size_t>(ed.u)];
    const Index& sv = vs.site_index[static_cast<std::size_t>(ed.v)];
    std::vector<Index> rest;
    for (const Index& i : theta.indices()) {
      if (!i.same_label(su) && !i.same_label(sv)) rest.push_back(i);
    }
    const Matrix m = to_matrix(MatrixView{theta, {su, sv}, rest});
    const Complex den = (m.adjoint() * m).trace();
    if (std::abs(den) == 0.0) throw DegenerateState("rank_one_two_site_energy: zero norm");
    total += (m.adjoint() * term.matrix * m).trace() / den;
  }
  return total;
}

double exact_tfi_energy(const TensorNetworkState& tns, double g, long limit) {
  const auto n = static_cast<std::size_t>(tns.num_vertices());
  const Complex den = contract_all(doubled_network(tns), limit).value();
  if (std::abs(den) == 0.0) throw DegenerateState("exact_tfi_energy: zero norm");
  Complex e = 0.0;
  for (const Edge& ed : tns.graph.edges()) {
    std::vector<Matrix> ops(n);
    ops[static_cast<std::size_t>(ed.u)] = pauli::x();
    ops[static_cast<std::size_t>(ed.v)] = pauli::x();
    e += contract_all(doubled_network(tns, ops), limit).value();
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<Matrix> ops(n);
    ops[v] = pauli::z();
    e -= g * contract_all(doubled_network(tns, ops), limit).value();
  }
  return (e / den).real();
}

double rank_one_tfi_energy(const VidalState& vs, double g) {
  std::vector<TwoSiteTerm> terms;
  const Matrix xx = linalg::kron(pauli::x(), pauli::x());
  for (const Edge& ed : vs.graph.edges()) terms.push_back({xx, ed.id});
  double e = rank_one_two_site_energy(vs, terms).real();
  for (VertexId v = 0; v < vs.num_vertices(); ++v) e -= g * rank_one_expectation(vs, {pauli::z(), "Z"}, v).real();
  return e;
}

Matrix tfi_hamiltonian(const Graph& graph, double g) {
  const int n = graph.num_vertices();
  if (n > 14) throw TooLarge("tfi_hamiltonian: too many sites for a dense matrix");
  const long dim = 1L << n;
  Matrix h = Matrix::Zero(dim, dim);
  auto bit = [&](long s, VertexId v) { return (s >> (n - 1 - v)) & 1L; };
  for (long s = 0; s < dim; ++s) {
    for (VertexId v = 0; v < n; ++v) h(s, s) -= g * (bit(s, v) ? -1.0 : 1.0);
    for (const Edge& e : graph.edges()) {
      const long t = s ^ (1L << (n - 1 - e.u)) ^ (1L << (n - 1 - e.v));
      h(t, s) += 1.0;
    }
  }
  return h;
}

double tfi_ground_energy(const Graph& graph, double g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(tfi_hamiltonian(graph, g), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace bpg
