#pragma once

#include "bpg/bp.hpp"
#include "bpg/linalg.hpp"
#include "bpg/network.hpp"

namespace bpg {

/// Vidal form from (ideally converged) messages. On each edge e = (u, v),
/// with X^dagger X = M_{u->v} and Y^dagger Y = M_{v->u}, the SVD
/// X Y^T = U Lambda V^dagger gives Gamma_u <- T_u * X^-1 U and
/// Gamma_v <- T_v * Y^-1 conj(V) on the edge axis. Singular values below
/// 1e-12 of the largest are dropped in addition to `trunc`. Lambda is
/// normalized to unit sum; the scale goes to log_scale.
VidalState gauge_from_messages(const TensorNetworkState& tns, const MessageSet& msgs,
                               const TruncationPolicy& trunc = {});

struct GaugeResult {
  VidalState state;
  GaugeReport report;
};

/// BP to convergence, then a single gauge transformation.
GaugeResult bp_gauge(const TensorNetworkState& tns, const BpConfig& cfg, const TruncationPolicy& trunc = {},
                     InitStrategy init = {});
/// Same, warm-started from the given messages.
GaugeResult bp_gauge(const TensorNetworkState& tns, const BpConfig& cfg, const TruncationPolicy& trunc,
                     MessageSet initial);

/// One BP sweep, a gauge transformation, the move to the symmetric gauge and
/// the reset of both messages on each edge to Lambda, per iteration. Deltas
/// are measured on messages mapped back to the frame of the input tensors,
/// where the sweep is identical to plain BP.
GaugeResult eager_gauge(const TensorNetworkState& tns, const BpConfig& cfg, const TruncationPolicy& trunc = {},
                        InitStrategy init = {});

/// Identity-gate simple-update sweeps in bfs_edge_order. The per-sweep delta
/// is the mean normalized trace distance between old and new Lambda.
GaugeResult simple_update_gauge(const VidalState& vs, const BpConfig& cfg, const TruncationPolicy& trunc = {});
GaugeResult simple_update_gauge(const TensorNetworkState& tns, const BpConfig& cfg,
                                const TruncationPolicy& trunc = {});

/// One identity simple-update step on edge `e`, in place.
void simple_update_identity_step(VidalState& vs, EdgeId e, const TruncationPolicy& trunc = {});

/// Mean over directed edges of || rho / Tr rho - I / chi ||_1, with rho the
/// Gram matrix on the edge of Gamma_v with Lambda absorbed on its other edges.
double vidal_distance(const VidalState& vs);

/// Gamma_v with Lambda absorbed on every incident edge except `skip` (-1: none).
LabeledTensor absorb_lambdas(const VidalState& vs, VertexId v, EdgeId skip, bool square_root = false);

/// Lambda-spectrum distance: entries normalized to unit sum, shorter vector
/// padded with zeros, max absolute difference.
double spectrum_distance(const RealVector& a, const RealVector& b);

}  // namespace bpg
