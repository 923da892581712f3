#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bpg/network.hpp"

namespace bpg {

struct LocalOperator {
  Matrix matrix;  // (out, in) over one site
  std::string name;

  static LocalOperator sz();  // diag(1/2, -1/2)
  static LocalOperator sx();
  static LocalOperator identity(long dim);
};

namespace pauli {
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

/// <O_v> with Lambda^2 environments on every incident edge of v.
Complex rank_one_expectation(const VidalState& vs, const LocalOperator& op, VertexId v);

/// <psi|O_v|psi> / <psi|psi> by exact contraction.
Complex exact_expectation(const TensorNetworkState& tns, const LocalOperator& op, VertexId v,
                          long limit = kDefaultContractLimit);

/// <psi| prod_v O_v |psi> / <psi|psi> for a product of single-site
/// operators (`ops[v]` empty means identity).
Complex exact_product_expectation(const TensorNetworkState& tns, const std::vector<Matrix>& ops,
                                  long limit = kDefaultContractLimit);

/// A two-site operator on an edge: matrix over (s_u, s_v) x (s_u', s_v')
/// with u = graph.edge(edge).u the slower index.
struct TwoSiteTerm {
  Matrix matrix;
  EdgeId edge = 0;
};

/// Sum of rank-one two-site expectations: the pair (Gamma_u, Lambda_e,
/// Gamma_v) with Lambda on every other incident edge of both sites.
Complex rank_one_two_site_energy(const VidalState& vs, const std::vector<TwoSiteTerm>& terms);

/// Exact energy of H = sum_edges XX - g sum_v Z.
double exact_tfi_energy(const TensorNetworkState& tns, double g, long limit = kDefaultContractLimit);

/// Rank-one energy of the same Hamiltonian.
double rank_one_tfi_energy(const VidalState& vs, double g);

/// Dense H = sum_edges XX - g sum_v Z (vertex 0 slowest) and its ground energy.
Matrix tfi_hamiltonian(const Graph& graph, double g);
double tfi_ground_energy(const Graph& graph, double g);

}  // namespace bpg
