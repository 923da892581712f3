#include "bpg/bp.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <cmath>
#include <random>
#include <span>
#include <thread>

#include "bpg/errors.hpp"
#include "bpg/linalg.hpp"

namespace bpg {

namespace {

struct Group {
  VertexId source;
  std::vector<EdgeId> targets;
};

std::vector<Group> group_by_source(const std::vector<DirectedEdge>& order) {
  std::vector<Group> groups;
  for (const DirectedEdge& d : order) {
    if (groups.empty() || groups.back().source != d.source) groups.push_back({d.source, {}});
    groups.back().targets.push_back(d.edge);
  }
  return groups;
}

// Absorbs the message flowing into `v` along `e` on the ket side:
// ket'[.., b, ..] = sum_k ket[.., k, ..] * in(b, k).
LabeledTensor absorb(const TensorNetworkState& tns, const LabeledTensor& ket, VertexId v, EdgeId e,
                     const Matrix& in) {
  const std::size_t axis = tns.bond_axis(v, e);
  return apply_on_axis(ket, axis, in.transpose(), ket.index(axis));
}

// Divide-and-conquer over the targets of one source so partial absorptions
// are shared: each half is computed from a tensor that already carries the
// incoming factors of the other half.
template <class Incoming, class Leaf>
void emit(const TensorNetworkState& tns, VertexId v, const LabeledTensor& ket, std::span<const EdgeId> targets,
          const Incoming& incoming, const Leaf& leaf) {
  if (targets.size() == 1) {
    leaf(ket, targets[0]);
    return;
  }
  const std::size_t half = targets.size() / 2;
  const auto first = targets.subspan(0, half);
  const auto second = targets.subspan(half);
  LabeledTensor a = ket;
  for (EdgeId e : second) a = absorb(tns, a, v, e, incoming(e));
  emit(tns, v, a, first, incoming, leaf);
  LabeledTensor b = ket;
  for (EdgeId e : first) b = absorb(tns, b, v, e, incoming(e));
  emit(tns, v, b, second, incoming, leaf);
}

template <class Incoming, class Leaf>
void emit_group(const TensorNetworkState& tns, const Group& grp, const Incoming& incoming, const Leaf& leaf) {
  const VertexId v = grp.source;
  LabeledTensor ket = tns.tensor(v);
  for (EdgeId e : tns.graph.incident(v)) {
    if (std::find(grp.targets.begin(), grp.targets.end(), e) == grp.targets.end()) {
      ket = absorb(tns, ket, v, e, incoming(e));
    }
  }
  emit(tns, v, ket, std::span<const EdgeId>(grp.targets), incoming, leaf);
}

Matrix gram_leaf(const TensorNetworkState& tns, VertexId v, const LabeledTensor& ket, EdgeId e) {
  return axis_gram(tns.tensor(v), ket, tns.bond_axis(v, e));
}

Matrix qr_leaf(const TensorNetworkState& tns, VertexId v, const LabeledTensor& ket, EdgeId e) {
  const std::size_t axis = tns.bond_axis(v, e);
  std::vector<Index> rows;
  for (std::size_t a = 0; a < ket.rank(); ++a) {
    if (a != axis) rows.push_back(ket.index(a));
  }
  const Matrix m = to_matrix(MatrixView{ket, rows, {ket.index(axis)}});
  const linalg::Qr dec = linalg::qr(m);
  const long chi = m.cols();
  Matrix r = Matrix::Zero(chi, chi);
  r.topRows(dec.r.rows()) = dec.r;
  const double nrm = r.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw DegenerateMessage("sqrt BP: zero square-root message");
  return r / nrm;
}

template <class F>
void for_each_parallel(std::size_t n, int threads, const F& f) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void BpConfig::validate() const {
  if (max_iters < 1) throw InvalidSpec("max_iters must be >= 1");
  if (!(target_delta > 0.0)) throw InvalidSpec("target_delta must be > 0");
  if (damping < 0.0 || damping >= 1.0) throw InvalidSpec("damping must lie in [0, 1)");
  if (threads < 1) throw InvalidSpec("threads must be >= 1");
}

std::vector<DirectedEdge> resolved_edge_order(const Graph& g, const BpConfig& cfg) {
  if (cfg.edge_order.empty()) return default_edge_order(g);
  std::vector<char> seen(2 * static_cast<std::size_t>(g.num_edges()), 0);
  for (const DirectedEdge& d : cfg.edge_order) {
    if (d.edge < 0 || d.edge >= g.num_edges()) throw InvalidSpec("edge_order: unknown edge");
    const Edge& e = g.edge(d.edge);
    if (d.source != e.u && d.source != e.v) throw InvalidSpec("edge_order: source is not an endpoint");
    char& s = seen[directed_slot(g, d)];
    if (s) throw InvalidSpec("edge_order: directed edge listed twice");
    s = 1;
  }
  if (cfg.edge_order.size() != seen.size()) throw InvalidSpec("edge_order must list every directed edge once");
  return cfg.edge_order;
}

MessageSet init_messages(const TensorNetworkState& tns, InitStrategy strategy) {
  const Graph& g = tns.graph;
  MessageSet msgs;
  msgs.messages.resize(2 * static_cast<std::size_t>(g.num_edges()));
  std::mt19937_64 rng(strategy.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const long chi = tns.bond_dim(e);
    for (int dir = 0; dir < 2; ++dir) {
      Matrix& m = msgs.messages[2 * static_cast<std::size_t>(e) + static_cast<std::size_t>(dir)];
      if (strategy.kind == InitStrategy::Kind::identity) {
        m = Matrix::Identity(chi, chi) / static_cast<double>(chi);
      } else {
        Matrix a(chi, chi);
        for (long i = 0; i < chi; ++i) {
          for (long j = 0; j < chi; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            a(i, j) = Complex(re, im);
          }
        }
        m = normalize_message(a.adjoint() * a);
      }
    }
  }
  return msgs;
}

LabeledTensor message_tensor(const TensorNetworkState& tns, const MessageSet& msgs, DirectedEdge d) {
  const Index& b = tns.bond_index[static_cast<std::size_t>(d.edge)];
  return from_matrix(msgs(tns.graph, d), {b.at_level(1)}, {b});
}

Matrix normalize_message(const Matrix& m) {
  Matrix h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) throw DegenerateMessage("message has non-positive trace");
  h /= tr;
  return h;
}

Matrix bp_update_edge(const TensorNetworkState& tns, const MessageSet& msgs, DirectedEdge d) {
  const Graph& g = tns.graph;
  auto incoming = [&](EdgeId e) -> const Matrix& { return msgs(g, DirectedEdge{e, g.other(e, d.source)}); };
  Matrix out;
  emit_group(tns, Group{d.source, {d.edge}}, incoming,
             [&](const LabeledTensor& ket, EdgeId e) { out = gram_leaf(tns, d.source, ket, e); });
  return normalize_message(out);
}

double bp_iterate(const TensorNetworkState& tns, MessageSet& msgs, const BpConfig& cfg) {
  const Graph& g = tns.graph;
  const auto order = resolved_edge_order(g, cfg);
  const auto groups = group_by_source(order);
  const MessageSet old = msgs;
  const MessageSet& source_set = cfg.schedule == Schedule::synchronous ? old : msgs;

  auto run_group = [&](const Group& grp, MessageSet& target) {
    auto incoming = [&](EdgeId e) -> const Matrix& {
      return source_set(g, DirectedEdge{e, g.other(e, grp.source)});
    };
    std::vector<std::pair<EdgeId, Matrix>> produced;
    emit_group(tns, grp, incoming, [&](const LabeledTensor& ket, EdgeId e) {
      produced.emplace_back(e, gram_leaf(tns, grp.source, ket, e));
    });
    for (auto& [e, m] : produced) {
      const DirectedEdge d{e, grp.source};
      Matrix fresh = normalize_message(m);
      if (cfg.damping > 0.0) fresh = normalize_message((1.0 - cfg.damping) * fresh + cfg.damping * old(g, d));
      target(g, d) = std::move(fresh);
    }
  };

  if (cfg.schedule == Schedule::sequential) {
    for (const Group& grp : groups) run_group(grp, msgs);
  } else {
    for_each_parallel(groups.size(), cfg.threads, [&](std::size_t i) { run_group(groups[i], msgs); });
  }
  return message_distance(old, msgs);
}

double message_distance(const MessageSet& a, const MessageSet& b) {
  if (a.messages.size() != b.messages.size()) throw DimensionMismatch("message sets differ in size");
  if (a.messages.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.messages.size(); ++i) {
    sum += linalg::normalized_trace_distance(a.messages[i], b.messages[i]);
  }
  return sum / static_cast<double>(a.messages.size());
}

BpResult bp_run(const TensorNetworkState& tns, const BpConfig& cfg, MessageSet initial) {
  cfg.validate();
  BpResult res{std::move(initial), {}};
  const auto t0 = std::chrono::steady_clock::now();
  for (int it = 0; it < cfg.max_iters; ++it) {
    const double delta = bp_iterate(tns, res.messages, cfg);
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

BpResult bp_run(const TensorNetworkState& tns, const BpConfig& cfg, InitStrategy init) {
  return bp_run(tns, cfg, init_messages(tns, init));
}

SqrtMessageSet sqrt_messages(const MessageSet& msgs) {
  SqrtMessageSet sq;
  for (const Matrix& m : msgs.messages) sq.factors.push_back(linalg::sqrt_and_inv_sqrt(m).half);
  return sq;
}

MessageSet square_messages(const SqrtMessageSet& sq) {
  MessageSet msgs;
  for (const Matrix& r : sq.factors) msgs.messages.push_back(normalize_message(r.adjoint() * r));
  return msgs;
}

Matrix sqrt_bp_update_edge(const TensorNetworkState& tns, const SqrtMessageSet& sq, DirectedEdge d) {
  const Graph& g = tns.graph;
  auto incoming = [&](EdgeId e) -> const Matrix& { return sq(g, DirectedEdge{e, g.other(e, d.source)}); };
  Matrix out;
  emit_group(tns, Group{d.source, {d.edge}}, incoming,
             [&](const LabeledTensor& ket, EdgeId e) { out = qr_leaf(tns, d.source, ket, e); });
  return out;
}

double sqrt_bp_iterate(const TensorNetworkState& tns, SqrtMessageSet& sq, const BpConfig& cfg) {
  const Graph& g = tns.graph;
  const auto order = resolved_edge_order(g, cfg);
  const auto groups = group_by_source(order);
  const SqrtMessageSet old = sq;
  const SqrtMessageSet& source_set = cfg.schedule == Schedule::synchronous ? old : sq;
  for (const Group& grp : groups) {
    auto incoming = [&](EdgeId e) -> const Matrix& {
      return source_set(g, DirectedEdge{e, g.other(e, grp.source)});
    };
    std::vector<std::pair<EdgeId, Matrix>> produced;
    emit_group(tns, grp, incoming, [&](const LabeledTensor& ket, EdgeId e) {
      produced.emplace_back(e, qr_leaf(tns, grp.source, ket, e));
    });
    for (auto& [e, r] : produced) sq(g, DirectedEdge{e, grp.source}) = std::move(r);
  }
  return message_distance(square_messages(old), square_messages(sq));
}

}  // namespace bpg
