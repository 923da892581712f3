#pragma once

// Tensor network states, their Vidal form, and exact-contraction oracles.
//
// Every vertex tensor has the layout [site, bond of incident edge 0, bond of
// incident edge 1, ...] with incident edges in ascending edge-id order (see
// Graph::incident). Both state types carry `log_scale`: the represented state
// is exp(log_scale) times the contraction of the stored tensors.

#include <cstddef>
#include <utility>
#include <vector>

#include "bpg/graph.hpp"
#include "bpg/tensor.hpp"

namespace bpg {

inline constexpr long kDefaultContractLimit = 1L << 24;

struct TensorNetworkState {
  Graph graph;
  std::vector<Index> site_index;         // per vertex
  std::vector<Index> bond_index;         // per edge, ket level
  std::vector<LabeledTensor> tensors;    // per vertex
  double log_scale = 0.0;

  int num_vertices() const { return graph.num_vertices(); }
  long site_dim(VertexId v) const { return site_index[static_cast<std::size_t>(v)].dim; }
  long bond_dim(EdgeId e) const { return bond_index[static_cast<std::size_t>(e)].dim; }
  const LabeledTensor& tensor(VertexId v) const { return tensors[static_cast<std::size_t>(v)]; }
  LabeledTensor& tensor(VertexId v) { return tensors[static_cast<std::size_t>(v)]; }
  /// Axis of edge `e` in the tensor of vertex `v`.
  std::size_t bond_axis(VertexId v, EdgeId e) const { return 1 + graph.slot(v, e); }
  /// Index list a vertex tensor must carry, in layout order.
  std::vector<Index> vertex_indices(VertexId v) const;

  /// Throws DimensionMismatch unless every tensor has the documented layout.
  void validate() const;
};

/// Fresh indices and zero tensors for a graph with the given dimensions.
TensorNetworkState make_tns(const Graph& g, const std::vector<long>& site_dims,
                            const std::vector<long>& bond_dims);

struct VidalState {
  Graph graph;
  std::vector<Index> site_index;
  std::vector<Index> bond_index;
  std::vector<LabeledTensor> gamma;    // per vertex, same layout as a TNS
  std::vector<RealVector> lambda;      // per edge, nonnegative, descending
  double log_scale = 0.0;

  int num_vertices() const { return graph.num_vertices(); }
  long bond_dim(EdgeId e) const { return bond_index[static_cast<std::size_t>(e)].dim; }
  std::size_t bond_axis(VertexId v, EdgeId e) const { return 1 + graph.slot(v, e); }
  /// Diagonal (bond, bond') tensor of edge `e`.
  LabeledTensor lambda_tensor(EdgeId e) const;

  void validate() const;
};

/// Wraps a plain TNS with Lambda = I / chi on every edge; log_scale absorbs
/// the normalization so the represented state is unchanged.
VidalState vidal_from_plain(const TensorNetworkState& tns);

/// Gamma with Lambda^(1/2) absorbed on every incident edge.
TensorNetworkState vidal_to_symmetric(const VidalState& vs);

enum class AbsorbMode { symmetric, toward_vertex_ordering };

/// Absorbs Lambda fully: split as sqrt on both sides, or whole onto the
/// endpoint with the smaller vertex id.
TensorNetworkState vidal_to_plain(const VidalState& vs, AbsorbMode mode = AbsorbMode::symmetric);

/// Contraction of T_v, its bra copy and `incoming` messages (edge, matrix
/// over [bra, ket] of that bond), summing the site index. The result keeps
/// (bra, ket) index pairs of every uncovered edge, bra at level 1, in
/// incidence order: [bra e1, ket e1, bra e2, ket e2, ...].
LabeledTensor norm_vertex_environment(const TensorNetworkState& tns, VertexId v,
                                      const std::vector<std::pair<EdgeId, Matrix>>& incoming);

/// Greedy pairwise contraction of a closed or open tensor list. Throws
/// TooLarge if any intermediate would exceed `limit` entries.
LabeledTensor contract_all(std::vector<LabeledTensor> tensors, long limit = kDefaultContractLimit);

/// The tensor over all site indices (vertex order), scaled by exp(log_scale).
LabeledTensor exact_contract(const TensorNetworkState& tns, long limit = kDefaultContractLimit);

/// Amplitude vector, row-major over sites in vertex order, including the scale.
Vector state_vector(const TensorNetworkState& tns, long limit = kDefaultContractLimit);
Vector state_vector(const VidalState& vs, long limit = kDefaultContractLimit);

/// <psi|psi> by contracting the doubled network, excluding exp(2 log_scale).
Complex exact_norm_unscaled(const TensorNetworkState& tns, long limit = kDefaultContractLimit);

/// Per-vertex doubled tensors sum_s T conj(T) with fused (ket, bra) bonds of
/// dimension chi^2. Optional `ops[v]` (site x site matrix, or empty) is
/// inserted as <s'| O |s>.
std::vector<LabeledTensor> doubled_network(const TensorNetworkState& tns,
                                           const std::vector<Matrix>& ops = {});

/// max |a - b| / max |a|.
double relative_amplitude_error(const Vector& a, const Vector& b);

}  // namespace bpg
