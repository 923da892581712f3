#pragma once

// Belief propagation on the norm network of a TNS.
//
// A message for the directed edge v->w is a chi x chi matrix M(b, k) over
// the (bra, ket) copies of the edge's bond index: the contraction of
// everything on v's side of the edge. Messages are kept Hermitian with unit
// trace.

#include <cstdint>
#include <vector>

#include "bpg/graph.hpp"
#include "bpg/network.hpp"

namespace bpg {

enum class Schedule { sequential, synchronous };

struct BpConfig {
  Schedule schedule = Schedule::sequential;
  int max_iters = 1000;
  double target_delta = 1e-10;
  /// new = (1 - damping) * new + damping * old, before normalization.
  double damping = 0.0;
  /// Empty means default_edge_order(graph).
  std::vector<DirectedEdge> edge_order;
  /// Worker count for the synchronous schedule; results do not depend on it.
  int threads = 1;

  void validate() const;
};

struct GaugeReport {
  int iterations = 0;
  double final_delta = 0.0;
  std::vector<double> deltas;
  /// Cumulative wall time after each iteration, seconds.
  std::vector<double> seconds;
  double wall_time = 0.0;
  bool converged = false;
};

/// Messages indexed by directed_slot(graph, d).
struct MessageSet {
  std::vector<Matrix> messages;

  Matrix& operator()(const Graph& g, DirectedEdge d) { return messages[directed_slot(g, d)]; }
  const Matrix& operator()(const Graph& g, DirectedEdge d) const { return messages[directed_slot(g, d)]; }
};

/// Square-root messages R with R^dagger R = M (up to normalization).
struct SqrtMessageSet {
  std::vector<Matrix> factors;

  Matrix& operator()(const Graph& g, DirectedEdge d) { return factors[directed_slot(g, d)]; }
  const Matrix& operator()(const Graph& g, DirectedEdge d) const { return factors[directed_slot(g, d)]; }
};

struct InitStrategy {
  enum class Kind { identity, random_psd } kind = Kind::identity;
  std::uint64_t seed = 0;

  static InitStrategy identity() { return {}; }
  static InitStrategy random_psd(std::uint64_t seed) { return {Kind::random_psd, seed}; }
};

MessageSet init_messages(const TensorNetworkState& tns, InitStrategy strategy = {});

/// The message over [bond at level 1, bond] as a labeled tensor.
LabeledTensor message_tensor(const TensorNetworkState& tns, const MessageSet& msgs, DirectedEdge d);

/// Hermitize and scale to unit trace. Throws DegenerateMessage on a
/// non-positive or non-finite trace.
Matrix normalize_message(const Matrix& m);

/// New message for `d` from the current incoming messages of its source.
Matrix bp_update_edge(const TensorNetworkState& tns, const MessageSet& msgs, DirectedEdge d);

/// One sweep over every directed edge. Returns the mean normalized trace
/// distance between old and new messages.
double bp_iterate(const TensorNetworkState& tns, MessageSet& msgs, const BpConfig& cfg);

struct BpResult {
  MessageSet messages;
  GaugeReport report;
};

/// Iterates until delta <= target_delta or max_iters sweeps.
BpResult bp_run(const TensorNetworkState& tns, const BpConfig& cfg, MessageSet initial);
BpResult bp_run(const TensorNetworkState& tns, const BpConfig& cfg, InitStrategy init = {});

/// Mean normalized trace distance over all directed edges.
double message_distance(const MessageSet& a, const MessageSet& b);

SqrtMessageSet sqrt_messages(const MessageSet& msgs);
/// Trace-normalized R^dagger R for each factor.
MessageSet square_messages(const SqrtMessageSet& sq);

/// QR-based update: the R factor of T_v with incoming factors absorbed,
/// the target bond as columns; unit Frobenius norm.
Matrix sqrt_bp_update_edge(const TensorNetworkState& tns, const SqrtMessageSet& sq, DirectedEdge d);

/// One sweep of square-root updates in the same order as bp_iterate.
/// Returns the delta of the squared messages.
double sqrt_bp_iterate(const TensorNetworkState& tns, SqrtMessageSet& sq, const BpConfig& cfg);

/// Directed edges of `cfg`'s order (or the default order).
std::vector<DirectedEdge> resolved_edge_order(const Graph& g, const BpConfig& cfg);

}  // namespace bpg
