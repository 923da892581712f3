#pragma once

// Two-site gate application and gate-by-gate evolution.

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "bpg/bp.hpp"
#include "bpg/linalg.hpp"
#include "bpg/network.hpp"

namespace bpg {

/// Matrix (out, in) over the pair (s_first, s_second), s_first slower.
struct Gate {
  Matrix matrix;
  VertexId first = 0;
  VertexId second = 0;
  bool unitary = false;
};

/// Reduced-tensor simple update. Returns sqrt(discarded / total) of the
/// squared singular values.
double apply_gate_simple_update(VidalState& vs, const Gate& gate, EdgeId e, const TruncationPolicy& trunc);

/// The same update without the QR reduction: the full two-site tensor is
/// formed and decomposed.
double apply_gate_naive_simple_update(VidalState& vs, const Gate& gate, EdgeId e, const TruncationPolicy& trunc);

/// Message-environment update on a plain state: square-root messages of the
/// surrounding edges are absorbed, the gate applied, the pair split by SVD
/// with sqrt of the new spectrum on both sides, and the inverse square
/// roots removed. Both messages on the edge become the new spectrum.
double apply_gate_bp(TensorNetworkState& tns, MessageSet& msgs, const Gate& gate, EdgeId e,
                     const TruncationPolicy& trunc);

/// Absorbs a single-site operator (out, in) into a vertex tensor.
void apply_site_operator(LabeledTensor& t, const Matrix& op);

struct TrotterLayer {
  std::vector<std::pair<Gate, EdgeId>> first_half;
  std::vector<Matrix> site_factors;   // per vertex
  std::vector<std::pair<Gate, EdgeId>> second_half;
};

/// exp(-db/2 XX) on every edge in bfs_edge_order, exp(db g Z) on every
/// site, then the edge gates in reverse order: one second-order step of
/// H = sum XX - g sum Z.
TrotterLayer trotter_ising_layer(const Graph& graph, double g, double delta_beta);

/// Haar-random n x n unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal moved into Q.
Matrix haar_unitary(long n, std::mt19937_64& rng);
Gate random_two_site_unitary(std::uint64_t seed, long dim_first, long dim_second);

struct ProgramStep {
  enum class Kind { two_site, one_site } kind = Kind::two_site;
  Gate gate;
  EdgeId edge = -1;
  VertexId vertex = -1;
  Matrix site_op;
  int layer = 0;
};
using Program = std::vector<ProgramStep>;

Program ising_program(const Graph& graph, double g, double delta_beta, int steps);
/// Layers of Haar two-site unitaries over all edges in edge-id order; for
/// lattices from build_graph that is the cross-hatch (horizontal bonds
/// row-major, then vertical bonds column-major).
Program random_circuit_program(const Graph& graph, int layers, std::uint64_t seed);
Program identity_program(const Graph& graph, int layers);

struct EvolutionConfig {
  long max_chi = 2;
  double svd_cutoff = 1e-14;
  int regauge_every = 0;
  double regauge_target = 1e-3;
  int regauge_max_iters = 200;
  std::uint64_t seed = 0;
  /// Compute f_n from exact state vectors (small systems only).
  bool track_fidelity = false;
  /// Gate ids after which the energy hook runs; empty means after the last gate.
  std::vector<int> observable_schedule;

  void validate() const;
};

struct StepRecord {
  int step = 0;
  int gate_id = 0;
  int layer = 0;
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double running_fidelity = std::numeric_limits<double>::quiet_NaN();
  double energy = std::numeric_limits<double>::quiet_NaN();
  double vidal_distance = 0.0;
  double truncation_error = 0.0;
  double seconds = 0.0;
};

struct Trajectory {
  std::vector<StepRecord> records;
  VidalState final_state;
};

using EnergyHook = std::function<double(const VidalState&)>;

/// Re-gauges through the symmetric gauge with BP warm-started from Lambda.
VidalState regauge(const VidalState& vs, double target, int max_iters);

Trajectory evolve(const VidalState& initial, const Program& program, const EvolutionConfig& cfg,
                  const EnergyHook& energy = {});

/// Dense application of a gate to a state vector ordered with vertex 0 slowest.
Vector apply_gate_dense(const Vector& psi, const std::vector<long>& site_dims, const Gate& gate);

}  // namespace bpg
