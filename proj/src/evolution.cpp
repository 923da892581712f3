#include "bpg/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/QR>

#include "bpg/errors.hpp"
#include "bpg/gauging.hpp"

namespace bpg {

namespace {

struct PairUpdate {
  LabeledTensor left;
  LabeledTensor right;
  RealVector s;
  double discarded_sq = 0.0;
  double total_sq = 0.0;
  Index bond;
};

// Gate matrix oriented so that the edge's `u` endpoint is the slower index.
Matrix oriented(const Gate& gate, const Edge& ed, long du, long dv) {
  if (gate.first == ed.u && gate.second == ed.v) return gate.matrix;
  if (gate.first != ed.v || gate.second != ed.u) throw DimensionMismatch("gate vertices are not the edge endpoints");
  Matrix out(du * dv, du * dv);
  for (long a = 0; a < du; ++a)
    for (long b = 0; b < dv; ++b)
      for (long c = 0; c < du; ++c)
        for (long d = 0; d < dv; ++d) out(a * dv + b, c * dv + d) = gate.matrix(b * du + a, d * du + c);
  return out;
}

std::vector<Index> replaced(std::vector<Index> idx, const Index& from, const Index& to) {
  for (auto& i : idx) {
    if (i.same_label(from)) i = to;
  }
  return idx;
}

std::vector<Index> without(const LabeledTensor& t, const Index& a, const Index& b) {
  std::vector<Index> out;
  for (const Index& i : t.indices()) {
    if (!i.same_label(a) && !i.same_label(b)) out.push_back(i);
  }
  return out;
}

PairUpdate finish_split(const TensorSvd& dec, const LabeledTensor& qu, const LabeledTensor& qv,
                        const LabeledTensor& wu, const LabeledTensor& wv, const Index& su, const Index& sv,
                        const Index& bond) {
  PairUpdate p;
  const long r = static_cast<long>(dec.singular_values.size());
  p.bond = bond.with_dim(r);
  p.s = Eigen::Map<const RealVector>(dec.singular_values.data(), r);
  p.discarded_sq = dec.discarded_sq;
  p.total_sq = p.s.squaredNorm() + dec.discarded_sq;
  const Index bu = dec.u.indices().back();
  const Index bv = dec.v.indices().front();
  LabeledTensor left = contract(qu, dec.u).relabeled(su.at_level(2), su).relabeled(bu, p.bond);
  LabeledTensor right = contract(qv, dec.v).relabeled(sv.at_level(2), sv).relabeled(bv, p.bond);
  p.left = left.permuted(replaced(wu.indices(), bond, p.bond));
  p.right = right.permuted(replaced(wv.indices(), bond, p.bond));
  return p;
}

// QR-reduced two-site update of the pair (wu, wv) sharing `bond`.
PairUpdate reduced_update(const LabeledTensor& wu, const LabeledTensor& wv, const Index& su, const Index& sv,
                          const Index& bond, const RealVector* lam, const Matrix& gate,
                          const TruncationPolicy& trunc) {
  auto reduce = [&](const LabeledTensor& w, const Index& s) {
    const std::vector<Index> rows = without(w, s, bond);
    const linalg::Qr dec = linalg::qr(to_matrix(MatrixView{w, rows, {s, bond}}));
    const Index k = make_index(dec.q.cols());
    return std::pair{from_matrix(dec.q, rows, {k}), from_matrix(dec.r, {k}, {s, bond})};
  };
  auto [qu, ru] = reduce(wu, su);
  auto [qv, rv] = reduce(wv, sv);
  if (lam) scale_axis(ru, 2, std::vector<double>(lam->data(), lam->data() + lam->size()));
  const LabeledTensor theta0 = contract(ru, rv);
  const LabeledTensor g = from_matrix(gate, {su.at_level(2), sv.at_level(2)}, {su, sv});
  const LabeledTensor theta = contract(theta0, g);
  const TensorSvd dec = svd(MatrixView{theta, {ru.index(0), su.at_level(2)}, {sv.at_level(2), rv.index(0)}},
                            trunc.max_rank, trunc.cutoff);
  return finish_split(dec, qu, qv, wu, wv, su, sv, bond);
}

double truncation_error(const PairUpdate& p) {
  return p.total_sq > 0.0 ? std::sqrt(p.discarded_sq / p.total_sq) : 0.0;
}

std::vector<double> inverse_weights(const RealVector& v) {
  const double top = v.size() ? v.maxCoeff() : 0.0;
  std::vector<double> w(static_cast<std::size_t>(v.size()));
  for (long i = 0; i < v.size(); ++i) {
    w[static_cast<std::size_t>(i)] = v(i) > linalg::kDefaultPinvCutoff * top && v(i) > 0.0 ? 1.0 / v(i) : 0.0;
  }
  return w;
}

void store_pair(VidalState& vs, const Edge& ed, PairUpdate& p) {
  const double sum = p.s.sum();
  if (!(sum > 0.0)) throw DegenerateState("gate annihilated the state");
  for (auto [v, t] : {std::pair{ed.u, &p.left}, std::pair{ed.v, &p.right}}) {
    for (EdgeId f : vs.graph.incident(v)) {
      if (f != ed.id) scale_axis(*t, vs.bond_axis(v, f), inverse_weights(vs.lambda[static_cast<std::size_t>(f)]));
    }
    vs.gamma[static_cast<std::size_t>(v)] = std::move(*t);
  }
  vs.bond_index[static_cast<std::size_t>(ed.id)] = p.bond;
  vs.lambda[static_cast<std::size_t>(ed.id)] = p.s / sum;
  vs.log_scale += std::log(sum);
}

void check_gate(const Gate& gate, long du, long dv) {
  if (gate.matrix.rows() != du * dv || gate.matrix.cols() != du * dv) {
    throw DimensionMismatch("gate dims do not match the site dims of its edge");
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double apply_gate_simple_update(VidalState& vs, const Gate& gate, EdgeId e, const TruncationPolicy& trunc) {
  trunc.validate();
  const Edge& ed = vs.graph.edge(e);
  const Index& su = vs.site_index[static_cast<std::size_t>(ed.u)];
  const Index& sv = vs.site_index[static_cast<std::size_t>(ed.v)];
  check_gate(gate, su.dim, sv.dim);
  const LabeledTensor wu = absorb_lambdas(vs, ed.u, e);
  const LabeledTensor wv = absorb_lambdas(vs, ed.v, e);
  PairUpdate p = reduced_update(wu, wv, su, sv, vs.bond_index[static_cast<std::size_t>(e)],
                                &vs.lambda[static_cast<std::size_t>(e)], oriented(gate, ed, su.dim, sv.dim), trunc);
  store_pair(vs, ed, p);
  return truncation_error(p);
}

double apply_gate_naive_simple_update(VidalState& vs, const Gate& gate, EdgeId e, const TruncationPolicy& trunc) {
  trunc.validate();
  const Edge& ed = vs.graph.edge(e);
  const Index& su = vs.site_index[static_cast<std::size_t>(ed.u)];
  const Index& sv = vs.site_index[static_cast<std::size_t>(ed.v)];
  check_gate(gate, su.dim, sv.dim);
  const Index bond = vs.bond_index[static_cast<std::size_t>(e)];
  LabeledTensor wu = absorb_lambdas(vs, ed.u, e);
  LabeledTensor wv = absorb_lambdas(vs, ed.v, e);
  const RealVector& lam = vs.lambda[static_cast<std::size_t>(e)];
  scale_axis(wu, vs.bond_axis(ed.u, e), std::vector<double>(lam.data(), lam.data() + lam.size()));
  // Parallel edges between u and v must stay open in the two-site tensor.
  LabeledTensor wv_open = wv;
  for (const Index& i : wv.indices()) {
    if (!i.same_label(bond) && wu.has(i)) wv_open = wv_open.relabeled(i, i.at_level(3));
  }
  const LabeledTensor theta0 = contract(wu, wv_open);
  const LabeledTensor g = from_matrix(oriented(gate, ed, su.dim, sv.dim), {su.at_level(2), sv.at_level(2)}, {su, sv});
  const LabeledTensor theta = contract(theta0, g);
  std::vector<Index> rows = without(wu, su, bond), cols{sv.at_level(2)};
  rows.push_back(su.at_level(2));
  for (const Index& i : wv_open.indices()) {
    if (!i.same_label(sv) && !i.same_label(bond)) cols.push_back(i);
  }
  const TensorSvd dec = svd(MatrixView{theta, rows, cols}, trunc.max_rank, trunc.cutoff);
  // Scalar "Q" factors let the shared finishing step relabel and permute.
  LabeledTensor right_raw = dec.v;
  for (const Index& i : wv_open.indices()) {
    if (i.level == 3) right_raw = right_raw.relabeled(i, i.at_level(0));
  }
  TensorSvd fixed{dec.u, dec.s, right_raw, dec.singular_values, dec.discarded_sq};
  PairUpdate p = finish_split(fixed, LabeledTensor::scalar(1.0), LabeledTensor::scalar(1.0), wu, wv, su, sv, bond);
  store_pair(vs, ed, p);
  return truncation_error(p);
}

double apply_gate_bp(TensorNetworkState& tns, MessageSet& msgs, const Gate& gate, EdgeId e,
                     const TruncationPolicy& trunc) {
  trunc.validate();
  const Graph& g = tns.graph;
  const Edge& ed = g.edge(e);
  const Index& su = tns.site_index[static_cast<std::size_t>(ed.u)];
  const Index& sv = tns.site_index[static_cast<std::size_t>(ed.v)];
  check_gate(gate, su.dim, sv.dim);
  std::vector<std::pair<std::size_t, Matrix>> undo_u, undo_v;
  auto dress = [&](VertexId v, std::vector<std::pair<std::size_t, Matrix>>& undo) {
    LabeledTensor w = tns.tensor(v);
    for (EdgeId f : g.incident(v)) {
      if (f == e) continue;
      const linalg::SqrtPair x = linalg::sqrt_and_inv_sqrt(msgs(g, DirectedEdge{f, g.other(f, v)}));
      const std::size_t axis = tns.bond_axis(v, f);
      w = apply_on_axis(w, axis, x.half.transpose(), w.index(axis));
      undo.emplace_back(axis, x.inv_half.transpose());
    }
    return w;
  };
  const LabeledTensor wu = dress(ed.u, undo_u);
  const LabeledTensor wv = dress(ed.v, undo_v);
  PairUpdate p = reduced_update(wu, wv, su, sv, tns.bond_index[static_cast<std::size_t>(e)], nullptr,
                                oriented(gate, ed, su.dim, sv.dim), trunc);
  const double sum = p.s.sum();
  if (!(sum > 0.0)) throw DegenerateState("gate annihilated the state");
  const RealVector lam = p.s / sum;
  std::vector<double> root(static_cast<std::size_t>(lam.size()));
  for (long i = 0; i < lam.size(); ++i) root[static_cast<std::size_t>(i)] = std::sqrt(lam(i));
  auto finish = [&](VertexId v, LabeledTensor& t, const std::vector<std::pair<std::size_t, Matrix>>& undo) {
    scale_axis(t, tns.bond_axis(v, e), root);
    for (const auto& [axis, m] : undo) t = apply_on_axis(t, axis, m, t.index(axis));
    tns.tensor(v) = std::move(t);
  };
  finish(ed.u, p.left, undo_u);
  finish(ed.v, p.right, undo_v);
  tns.bond_index[static_cast<std::size_t>(e)] = p.bond;
  tns.log_scale += std::log(sum);
  const Matrix diag = lam.cast<Complex>().asDiagonal();
  msgs(g, DirectedEdge{e, ed.u}) = diag;
  msgs(g, DirectedEdge{e, ed.v}) = diag;
  return truncation_error(p);
}

void apply_site_operator(LabeledTensor& t, const Matrix& op) {
  if (op.rows() != t.index(0).dim || op.cols() != t.index(0).dim) {
    throw DimensionMismatch("site operator dims differ from the site dim");
  }
  t = apply_on_axis(t, 0, op.transpose(), t.index(0));
}

TrotterLayer trotter_ising_layer(const Graph& graph, double g, double delta_beta) {
  const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const Matrix z = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  const Matrix bond = linalg::expm_hermitian(linalg::kron(x, x), Complex(-delta_beta / 2.0, 0.0));
  const Matrix site = linalg::expm_hermitian(z, Complex(delta_beta * g, 0.0));
  TrotterLayer layer;
  for (EdgeId e : bfs_edge_order(graph)) {
    const Edge& ed = graph.edge(e);
    layer.first_half.push_back({Gate{bond, ed.u, ed.v, false}, e});
  }
  layer.site_factors.assign(static_cast<std::size_t>(graph.num_vertices()), site);
  layer.second_half.assign(layer.first_half.rbegin(), layer.first_half.rend());
  return layer;
}

Matrix haar_unitary(long n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR();
  for (long j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Gate random_two_site_unitary(std::uint64_t seed, long dim_first, long dim_second) {
  std::mt19937_64 rng(seed);
  return Gate{haar_unitary(dim_first * dim_second, rng), 0, 1, true};
}

Program ising_program(const Graph& graph, double g, double delta_beta, int steps) {
  const TrotterLayer layer = trotter_ising_layer(graph, g, delta_beta);
  Program prog;
  for (int s = 0; s < steps; ++s) {
    for (const auto& [gate, e] : layer.first_half) prog.push_back({ProgramStep::Kind::two_site, gate, e, -1, {}, s});
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
      prog.push_back({ProgramStep::Kind::one_site, {}, -1, v, layer.site_factors[static_cast<std::size_t>(v)], s});
    }
    for (const auto& [gate, e] : layer.second_half) prog.push_back({ProgramStep::Kind::two_site, gate, e, -1, {}, s});
  }
  return prog;
}

Program random_circuit_program(const Graph& graph, int layers, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Program prog;
  for (int l = 0; l < layers; ++l) {
    for (const Edge& ed : graph.edges()) {
      prog.push_back({ProgramStep::Kind::two_site, Gate{haar_unitary(4, rng), ed.u, ed.v, true}, ed.id, -1, {}, l});
    }
  }
  return prog;
}

Program identity_program(const Graph& graph, int layers) {
  Program prog;
  for (int l = 0; l < layers; ++l) {
    for (const Edge& ed : graph.edges()) {
      prog.push_back({ProgramStep::Kind::two_site, Gate{Matrix::Identity(4, 4), ed.u, ed.v, true}, ed.id, -1, {}, l});
    }
  }
  return prog;
}

void EvolutionConfig::validate() const {
  if (max_chi < 1) throw InvalidSpec("max_chi must be >= 1");
  if (svd_cutoff < 0.0 || svd_cutoff >= 1.0) throw InvalidSpec("svd_cutoff must lie in [0, 1)");
  if (regauge_every < 0) throw InvalidSpec("regauge_every must be >= 0");
  if (!(regauge_target > 0.0)) throw InvalidSpec("regauge_target must be > 0");
  if (regauge_max_iters < 1) throw InvalidSpec("regauge_max_iters must be >= 1");
}

VidalState regauge(const VidalState& vs, double target, int max_iters) {
  const TensorNetworkState sym = vidal_to_symmetric(vs);
  MessageSet warm;
  for (EdgeId e = 0; e < vs.graph.num_edges(); ++e) {
    const Matrix lam = vs.lambda[static_cast<std::size_t>(e)].cast<Complex>().asDiagonal();
    warm.messages.push_back(normalize_message(lam));
    warm.messages.push_back(normalize_message(lam));
  }
  BpConfig cfg;
  cfg.target_delta = target;
  cfg.max_iters = max_iters;
  return bp_gauge(sym, cfg, {}, std::move(warm)).state;
}

Vector apply_gate_dense(const Vector& psi, const std::vector<long>& site_dims, const Gate& gate) {
  const auto n = site_dims.size();
  std::vector<long> stride(n, 1);
  for (std::size_t k = n - 1; k-- > 0;) stride[k] = stride[k + 1] * site_dims[k + 1];
  const auto a = static_cast<std::size_t>(gate.first);
  const auto b = static_cast<std::size_t>(gate.second);
  const long da = site_dims[a], db = site_dims[b];
  Vector out = psi;
  Vector local(da * db);
  for (long idx = 0; idx < psi.size(); ++idx) {
    if ((idx / stride[a]) % da != 0 || (idx / stride[b]) % db != 0) continue;
    for (long x = 0; x < da; ++x)
      for (long y = 0; y < db; ++y) local(x * db + y) = psi(idx + x * stride[a] + y * stride[b]);
    const Vector res = gate.matrix * local;
    for (long x = 0; x < da; ++x)
      for (long y = 0; y < db; ++y) out(idx + x * stride[a] + y * stride[b]) = res(x * db + y);
  }
  return out;
}

Trajectory evolve(const VidalState& initial, const Program& program, const EvolutionConfig& cfg,
                  const EnergyHook& energy) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const TruncationPolicy trunc = TruncationPolicy::rank(cfg.max_chi, cfg.svd_cutoff);
  Trajectory traj;
  VidalState vs = initial;
  std::vector<long> dims;
  for (const Index& s : vs.site_index) dims.push_back(s.dim);
  bool verify = cfg.track_fidelity;
  double log_fid_sum = 0.0;
  int fid_count = 0;
  int gate_id = 0;
  int last_gate = -1;
  for (std::size_t k = 0; k < program.size(); ++k) {
    if (program[k].kind == ProgramStep::Kind::two_site) last_gate = static_cast<int>(k);
  }

  for (std::size_t k = 0; k < program.size(); ++k) {
    const ProgramStep& step = program[k];
    if (step.kind == ProgramStep::Kind::one_site) {
      apply_site_operator(vs.gamma[static_cast<std::size_t>(step.vertex)], step.site_op);
      continue;
    }
    Vector ideal;
    if (verify) {
      try {
        ideal = apply_gate_dense(state_vector(vs), dims, step.gate);
      } catch (const TooLarge&) {
        verify = false;
      }
    }
    StepRecord rec;
    rec.step = static_cast<int>(k);
    rec.gate_id = gate_id;
    rec.layer = step.layer;
    rec.truncation_error = apply_gate_simple_update(vs, step.gate, step.edge, trunc);
    if (cfg.regauge_every > 0 && (gate_id + 1) % cfg.regauge_every == 0) {
      vs = regauge(vs, cfg.regauge_target, cfg.regauge_max_iters);
    }
    if (verify) {
      const Vector now = state_vector(vs);
      const double overlap = std::norm(now.dot(ideal));
      const double f = overlap / (now.squaredNorm() * ideal.squaredNorm());
      rec.fidelity = f;
      log_fid_sum += std::log(f);
      ++fid_count;
      rec.running_fidelity = std::exp(log_fid_sum / fid_count);
    }
    rec.vidal_distance = vidal_distance(vs);
    const bool scheduled = cfg.observable_schedule.empty()
                               ? static_cast<int>(k) == last_gate
                               : std::find(cfg.observable_schedule.begin(), cfg.observable_schedule.end(), gate_id) !=
                                     cfg.observable_schedule.end();
    if (energy && scheduled) rec.energy = energy(vs);
    rec.seconds = seconds_since(t0);
    traj.records.push_back(rec);
    ++gate_id;
  }
  traj.final_state = std::move(vs);
  return traj;
}

}  // namespace bpg
