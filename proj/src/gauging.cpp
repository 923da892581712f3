#include "bpg/gauging.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bpg/errors.hpp"

namespace bpg {

namespace {

constexpr double kDropSingular = 1e-12;

struct EdgeGauge {
  Matrix first;    // applied on the edge axis of the first endpoint (u)
  Matrix second;   // applied on the edge axis of the second endpoint (v)
  RealVector lambda;
  double log_sum = 0.0;
};

EdgeGauge edge_gauge(const Matrix& m_uv, const Matrix& m_vu, const TruncationPolicy& trunc) {
  if (m_uv.norm() == 0.0 || m_vu.norm() == 0.0) throw DegenerateMessage("gauge: zero message");
  const linalg::SqrtPair x = linalg::sqrt_and_inv_sqrt(m_uv);
  const linalg::SqrtPair y = linalg::sqrt_and_inv_sqrt(m_vu);
  TruncationPolicy t = trunc;
  t.cutoff = std::max(t.cutoff, kDropSingular);
  const linalg::Svd dec = linalg::svd(x.half * y.half.transpose(), t);
  const double sum = dec.s.sum();
  if (!(sum > 0.0)) throw DegenerateMessage("gauge: messages have no common support");
  EdgeGauge g;
  g.first = x.inv_half * dec.u;
  g.second = y.inv_half * dec.vh.transpose();
  g.lambda = dec.s / sum;
  g.log_sum = std::log(sum);
  return g;
}

std::vector<double> as_weights(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> sqrt_weights(const RealVector& v) {
  std::vector<double> w(static_cast<std::size_t>(v.size()));
  for (long i = 0; i < v.size(); ++i) w[static_cast<std::size_t>(i)] = std::sqrt(v(i));
  return w;
}

std::vector<double> inverse_weights(const RealVector& v) {
  const double top = v.size() ? v.maxCoeff() : 0.0;
  std::vector<double> w(static_cast<std::size_t>(v.size()));
  for (long i = 0; i < v.size(); ++i) {
    w[static_cast<std::size_t>(i)] = v(i) > linalg::kDefaultPinvCutoff * top && v(i) > 0.0 ? 1.0 / v(i) : 0.0;
  }
  return w;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Applies per-edge gauges to a copy of the state's tensors.
VidalState apply_edge_gauges(const TensorNetworkState& tns, const std::vector<EdgeGauge>& gauges) {
  VidalState vs;
  vs.graph = tns.graph;
  vs.site_index = tns.site_index;
  vs.bond_index = tns.bond_index;
  vs.gamma = tns.tensors;
  vs.log_scale = tns.log_scale;
  for (const Edge& ed : tns.graph.edges()) {
    const EdgeGauge& g = gauges[static_cast<std::size_t>(ed.id)];
    const Index fresh = tns.bond_index[static_cast<std::size_t>(ed.id)].with_dim(g.lambda.size());
    auto& gu = vs.gamma[static_cast<std::size_t>(ed.u)];
    gu = apply_on_axis(gu, tns.bond_axis(ed.u, ed.id), g.first, fresh);
    auto& gv = vs.gamma[static_cast<std::size_t>(ed.v)];
    gv = apply_on_axis(gv, tns.bond_axis(ed.v, ed.id), g.second, fresh);
    vs.bond_index[static_cast<std::size_t>(ed.id)] = fresh;
    vs.lambda.push_back(g.lambda);
    vs.log_scale += g.log_sum;
  }
  return vs;
}

std::vector<EdgeGauge> all_edge_gauges(const TensorNetworkState& tns, const MessageSet& msgs,
                                       const TruncationPolicy& trunc) {
  std::vector<EdgeGauge> gauges;
  for (const Edge& ed : tns.graph.edges()) {
    gauges.push_back(edge_gauge(msgs(tns.graph, {ed.id, ed.u}), msgs(tns.graph, {ed.id, ed.v}), trunc));
  }
  return gauges;
}

}  // namespace

VidalState gauge_from_messages(const TensorNetworkState& tns, const MessageSet& msgs, const TruncationPolicy& trunc) {
  trunc.validate();
  return apply_edge_gauges(tns, all_edge_gauges(tns, msgs, trunc));
}

GaugeResult bp_gauge(const TensorNetworkState& tns, const BpConfig& cfg, const TruncationPolicy& trunc,
                     MessageSet initial) {
  const auto t0 = std::chrono::steady_clock::now();
  BpResult bp = bp_run(tns, cfg, std::move(initial));
  GaugeResult out{gauge_from_messages(tns, bp.messages, trunc), std::move(bp.report)};
  out.report.wall_time = seconds_since(t0);
  return out;
}

GaugeResult bp_gauge(const TensorNetworkState& tns, const BpConfig& cfg, const TruncationPolicy& trunc,
                     InitStrategy init) {
  return bp_gauge(tns, cfg, trunc, init_messages(tns, init));
}

GaugeResult eager_gauge(const TensorNetworkState& tns, const BpConfig& cfg, const TruncationPolicy& trunc,
                        InitStrategy init) {
  cfg.validate();
  trunc.validate();
  const Graph& g = tns.graph;
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t slots = 2 * static_cast<std::size_t>(g.num_edges());

  TensorNetworkState sym = tns;
  MessageSet msgs = init_messages(tns, init);
  // frame[s] maps the input bond onto the current one for the tensor that
  // emits slot s: S = T * frame on that axis. back[s] is its pseudoinverse.
  std::vector<Matrix> frame(slots), back(slots);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    for (std::size_t s : {2 * static_cast<std::size_t>(e), 2 * static_cast<std::size_t>(e) + 1}) {
      frame[s] = Matrix::Identity(tns.bond_dim(e), tns.bond_dim(e));
      back[s] = frame[s];
    }
  }
  auto to_input_frame = [&](const MessageSet& m) {
    MessageSet out;
    out.messages.resize(slots);
    for (std::size_t s = 0; s < slots; ++s) out.messages[s] = back[s].adjoint() * m.messages[s] * back[s];
    return out;
  };

  GaugeResult res;
  VidalState current = vidal_from_plain(tns);
  for (int it = 0; it < cfg.max_iters; ++it) {
    const MessageSet before = to_input_frame(msgs);
    bp_iterate(sym, msgs, cfg);
    const double delta = message_distance(before, to_input_frame(msgs));

    const auto gauges = all_edge_gauges(sym, msgs, trunc);
    current = apply_edge_gauges(sym, gauges);
    sym = vidal_to_symmetric(current);
    for (const Edge& ed : g.edges()) {
      const EdgeGauge& eg = gauges[static_cast<std::size_t>(ed.id)];
      const RealVector root = eg.lambda.cwiseSqrt();
      const std::size_t su = 2 * static_cast<std::size_t>(ed.id);
      frame[su] = frame[su] * eg.first * root.cast<Complex>().asDiagonal();
      frame[su + 1] = frame[su + 1] * eg.second * root.cast<Complex>().asDiagonal();
      back[su] = linalg::pinv(frame[su]);
      back[su + 1] = linalg::pinv(frame[su + 1]);
      const Matrix lam = eg.lambda.cast<Complex>().asDiagonal();
      msgs.messages[su] = lam;
      msgs.messages[su + 1] = lam;
    }

    res.report.deltas.push_back(delta);
    res.report.seconds.push_back(seconds_since(t0));
    res.report.iterations = it + 1;
    res.report.final_delta = delta;
    if (delta <= cfg.target_delta) {
      res.report.converged = true;
      break;
    }
  }
  res.state = std::move(current);
  res.report.wall_time = seconds_since(t0);
  return res;
}

LabeledTensor absorb_lambdas(const VidalState& vs, VertexId v, EdgeId skip, bool square_root) {
  LabeledTensor w = vs.gamma[static_cast<std::size_t>(v)];
  for (EdgeId e : vs.graph.incident(v)) {
    if (e == skip) continue;
    const RealVector& lam = vs.lambda[static_cast<std::size_t>(e)];
    scale_axis(w, vs.bond_axis(v, e), square_root ? sqrt_weights(lam) : as_weights(lam));
  }
  return w;
}

void simple_update_identity_step(VidalState& vs, EdgeId e, const TruncationPolicy& trunc) {
  const Edge& ed = vs.graph.edge(e);
  struct Side {
    VertexId v;
    LabeledTensor w;
    std::vector<Index> rows;
    linalg::Qr qr;
  };
  auto reduce = [&](VertexId v) {
    Side s{v, absorb_lambdas(vs, v, e), {}, {}};
    const std::size_t axis = vs.bond_axis(v, e);
    for (std::size_t a = 0; a < s.w.rank(); ++a) {
      if (a != axis) s.rows.push_back(s.w.index(a));
    }
    s.qr = linalg::qr(to_matrix(MatrixView{s.w, s.rows, {s.w.index(axis)}}));
    return s;
  };
  Side a = reduce(ed.u);
  Side b = reduce(ed.v);
  const RealVector& lam = vs.lambda[static_cast<std::size_t>(e)];
  const Matrix core = a.qr.r * lam.cast<Complex>().asDiagonal() * b.qr.r.transpose();
  TruncationPolicy t = trunc;
  t.cutoff = std::max(t.cutoff, kDropSingular);
  const linalg::Svd dec = linalg::svd(core, t);
  const double sum = dec.s.sum();
  if (!(sum > 0.0)) throw DegenerateState("simple update: bond carries no weight");

  const Index fresh = vs.bond_index[static_cast<std::size_t>(e)].with_dim(dec.s.size());
  auto rebuild = [&](const Side& s, const Matrix& factor) {
    LabeledTensor t2 = from_matrix(s.qr.q * factor, s.rows, {fresh});
    std::vector<Index> order{vs.site_index[static_cast<std::size_t>(s.v)]};
    for (EdgeId f : vs.graph.incident(s.v)) order.push_back(f == e ? fresh : vs.bond_index[static_cast<std::size_t>(f)]);
    t2 = t2.permuted(order);
    for (EdgeId f : vs.graph.incident(s.v)) {
      if (f != e) scale_axis(t2, vs.bond_axis(s.v, f), inverse_weights(vs.lambda[static_cast<std::size_t>(f)]));
    }
    vs.gamma[static_cast<std::size_t>(s.v)] = std::move(t2);
  };
  rebuild(a, dec.u);
  rebuild(b, dec.vh.transpose());
  vs.bond_index[static_cast<std::size_t>(e)] = fresh;
  vs.lambda[static_cast<std::size_t>(e)] = dec.s / sum;
  vs.log_scale += std::log(sum);
}

GaugeResult simple_update_gauge(const VidalState& vs, const BpConfig& cfg, const TruncationPolicy& trunc) {
  cfg.validate();
  trunc.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto order = bfs_edge_order(vs.graph);
  GaugeResult res{vs, {}};
  for (int it = 0; it < cfg.max_iters; ++it) {
    const std::vector<RealVector> old = res.state.lambda;
    for (EdgeId e : order) simple_update_identity_step(res.state, e, trunc);
    double sum = 0.0;
    for (EdgeId e = 0; e < vs.graph.num_edges(); ++e) {
      const RealVector& x = old[static_cast<std::size_t>(e)];
      const RealVector& y = res.state.lambda[static_cast<std::size_t>(e)];
      const long n = std::max(x.size(), y.size());
      RealVector px = RealVector::Zero(n), py = RealVector::Zero(n);
      px.head(x.size()) = x / x.sum();
      py.head(y.size()) = y / y.sum();
      sum += (px - py).cwiseAbs().sum();
    }
    const double delta = vs.graph.num_edges() ? sum / vs.graph.num_edges() : 0.0;
    res.report.deltas.push_back(delta);
    res.report.seconds.push_back(seconds_since(t0));
    res.report.iterations = it + 1;
    res.report.final_delta = delta;
    if (delta <= cfg.target_delta) {
      res.report.converged = true;
      break;
    }
  }
  res.report.wall_time = seconds_since(t0);
  return res;
}

GaugeResult simple_update_gauge(const TensorNetworkState& tns, const BpConfig& cfg, const TruncationPolicy& trunc) {
  return simple_update_gauge(vidal_from_plain(tns), cfg, trunc);
}

double vidal_distance(const VidalState& vs) {
  const Graph& g = vs.graph;
  if (g.num_edges() == 0) return 0.0;
  double sum = 0.0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (EdgeId e : g.incident(v)) {
      const LabeledTensor w = absorb_lambdas(vs, v, e);
      const Matrix rho = axis_gram(w, w, vs.bond_axis(v, e));
      const long chi = rho.rows();
      sum += linalg::normalized_trace_distance(rho, Matrix::Identity(chi, chi));
    }
  }
  return sum / (2.0 * g.num_edges());
}

double spectrum_distance(const RealVector& a, const RealVector& b) {
  const long n = std::max(a.size(), b.size());
  RealVector pa = RealVector::Zero(n), pb = RealVector::Zero(n);
  pa.head(a.size()) = a / a.sum();
  pb.head(b.size()) = b / b.sum();
  return (pa - pb).cwiseAbs().maxCoeff();
}

}  // namespace bpg
