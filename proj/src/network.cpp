#include "bpg/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bpg/errors.hpp"

namespace bpg {

namespace {

std::vector<Index> layout(const Graph& g, const std::vector<Index>& site, const std::vector<Index>& bond,
                          VertexId v) {
  std::vector<Index> out{site[static_cast<std::size_t>(v)]};
  for (EdgeId e : g.incident(v)) out.push_back(bond[static_cast<std::size_t>(e)]);
  return out;
}

void check_layout(const Graph& g, const std::vector<Index>& site, const std::vector<Index>& bond,
                  const std::vector<LabeledTensor>& tensors, const char* what) {
  const auto nv = static_cast<std::size_t>(g.num_vertices());
  if (site.size() != nv || tensors.size() != nv || bond.size() != static_cast<std::size_t>(g.num_edges())) {
    throw DimensionMismatch(std::string(what) + ": per-vertex/per-edge table sizes do not match the graph");
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (tensors[static_cast<std::size_t>(v)].indices() != layout(g, site, bond, v)) {
      throw DimensionMismatch(std::string(what) + ": tensor of vertex " + std::to_string(v) +
                              " does not match [site, incident bonds]");
    }
  }
}

std::vector<double> sqrt_weights(const RealVector& lam) {
  std::vector<double> w(static_cast<std::size_t>(lam.size()));
  for (long i = 0; i < lam.size(); ++i) w[static_cast<std::size_t>(i)] = std::sqrt(std::max(lam(i), 0.0));
  return w;
}

std::vector<double> weights(const RealVector& lam) { return {lam.data(), lam.data() + lam.size()}; }

double prod_free(const LabeledTensor& a, const LabeledTensor& b, bool& shares) {
  double size = 1.0;
  shares = false;
  for (const auto& i : a.indices()) {
    if (b.has(i)) {
      shares = true;
    } else {
      size *= static_cast<double>(i.dim);
    }
  }
  for (const auto& j : b.indices()) {
    if (!a.has(j)) size *= static_cast<double>(j.dim);
  }
  return size;
}

}  // namespace

std::vector<Index> TensorNetworkState::vertex_indices(VertexId v) const {
  return layout(graph, site_index, bond_index, v);
}

void TensorNetworkState::validate() const { check_layout(graph, site_index, bond_index, tensors, "TNS"); }

TensorNetworkState make_tns(const Graph& g, const std::vector<long>& site_dims, const std::vector<long>& bond_dims) {
  if (site_dims.size() != static_cast<std::size_t>(g.num_vertices()) ||
      bond_dims.size() != static_cast<std::size_t>(g.num_edges())) {
    throw DimensionMismatch("make_tns: dimension tables do not match the graph");
  }
  TensorNetworkState tns;
  tns.graph = g;
  for (long d : site_dims) tns.site_index.push_back(make_index(d, IndexKind::site));
  for (long d : bond_dims) tns.bond_index.push_back(make_index(d, IndexKind::bond));
  for (VertexId v = 0; v < g.num_vertices(); ++v) tns.tensors.emplace_back(tns.vertex_indices(v));
  return tns;
}

LabeledTensor VidalState::lambda_tensor(EdgeId e) const {
  const Index& b = bond_index[static_cast<std::size_t>(e)];
  const RealVector& lam = lambda[static_cast<std::size_t>(e)];
  return from_matrix(Matrix(lam.cast<Complex>().asDiagonal()), {b}, {b.at_level(1)});
}

void VidalState::validate() const {
  check_layout(graph, site_index, bond_index, gamma, "VidalState");
  if (lambda.size() != static_cast<std::size_t>(graph.num_edges())) {
    throw DimensionMismatch("VidalState: one Lambda per edge required");
  }
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    const RealVector& lam = lambda[static_cast<std::size_t>(e)];
    if (lam.size() != bond_dim(e)) throw DimensionMismatch("VidalState: Lambda size differs from bond dim");
    for (long i = 0; i < lam.size(); ++i) {
      if (!(lam(i) >= 0.0) || (i > 0 && lam(i) > lam(i - 1))) {
        throw InvalidSpec("VidalState: Lambda must be nonnegative and descending");
      }
    }
  }
}

VidalState vidal_from_plain(const TensorNetworkState& tns) {
  VidalState vs;
  vs.graph = tns.graph;
  vs.site_index = tns.site_index;
  vs.bond_index = tns.bond_index;
  vs.gamma = tns.tensors;
  vs.log_scale = tns.log_scale;
  for (EdgeId e = 0; e < tns.graph.num_edges(); ++e) {
    const long chi = tns.bond_dim(e);
    vs.lambda.push_back(RealVector::Constant(chi, 1.0 / static_cast<double>(chi)));
    vs.log_scale += std::log(static_cast<double>(chi));
  }
  return vs;
}

TensorNetworkState vidal_to_symmetric(const VidalState& vs) { return vidal_to_plain(vs, AbsorbMode::symmetric); }

TensorNetworkState vidal_to_plain(const VidalState& vs, AbsorbMode mode) {
  TensorNetworkState tns;
  tns.graph = vs.graph;
  tns.site_index = vs.site_index;
  tns.bond_index = vs.bond_index;
  tns.tensors = vs.gamma;
  tns.log_scale = vs.log_scale;
  for (const Edge& ed : vs.graph.edges()) {
    const RealVector& lam = vs.lambda[static_cast<std::size_t>(ed.id)];
    if (mode == AbsorbMode::symmetric) {
      const auto w = sqrt_weights(lam);
      scale_axis(tns.tensor(ed.u), tns.bond_axis(ed.u, ed.id), w);
      scale_axis(tns.tensor(ed.v), tns.bond_axis(ed.v, ed.id), w);
    } else {
      const VertexId target = std::min(ed.u, ed.v);
      scale_axis(tns.tensor(target), tns.bond_axis(target, ed.id), weights(lam));
    }
  }
  return tns;
}

LabeledTensor norm_vertex_environment(const TensorNetworkState& tns, VertexId v,
                                      const std::vector<std::pair<EdgeId, Matrix>>& incoming) {
  const LabeledTensor& t = tns.tensor(v);
  LabeledTensor ket = t;
  std::vector<char> covered(t.rank(), 0);
  for (const auto& [e, m] : incoming) {
    const std::size_t axis = tns.bond_axis(v, e);
    const long chi = tns.bond_dim(e);
    if (m.rows() != chi || m.cols() != chi) {
      throw DimensionMismatch("norm_vertex_environment: message dims differ from bond dim");
    }
    if (covered[axis]) throw DimensionMismatch("norm_vertex_environment: edge covered twice");
    covered[axis] = 1;
    ket = apply_on_axis(ket, axis, m.transpose(), t.index(axis));
  }
  LabeledTensor bra = t.conj();
  std::vector<Index> order;
  for (std::size_t axis = 1; axis < t.rank(); ++axis) {
    if (covered[axis]) continue;
    const Index& k = t.index(axis);
    bra = bra.relabeled(k, k.at_level(1));
    order.push_back(k.at_level(1));
    order.push_back(k);
  }
  const LabeledTensor env = contract(bra, ket);
  return env.permuted(order);
}

LabeledTensor contract_all(std::vector<LabeledTensor> tensors, long limit) {
  if (tensors.empty()) return LabeledTensor::scalar(1.0);
  while (tensors.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    bool best_shares = false;
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      for (std::size_t j = i + 1; j < tensors.size(); ++j) {
        bool shares = false;
        const double size = prod_free(tensors[i], tensors[j], shares);
        if ((shares && !best_shares) || (shares == best_shares && size < best)) {
          best = size;
          best_shares = shares;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > static_cast<double>(limit)) {
      throw TooLarge("exact contraction needs an intermediate of " + std::to_string(best) + " entries");
    }
    LabeledTensor merged = contract(tensors[bi], tensors[bj]);
    tensors.erase(tensors.begin() + static_cast<long>(bj));
    tensors[bi] = std::move(merged);
  }
  return std::move(tensors.front());
}

LabeledTensor exact_contract(const TensorNetworkState& tns, long limit) {
  LabeledTensor out = contract_all(tns.tensors, limit);
  out = out.permuted(tns.site_index);
  out *= std::exp(tns.log_scale);
  return out;
}

Vector state_vector(const TensorNetworkState& tns, long limit) {
  const LabeledTensor t = exact_contract(tns, limit);
  return Eigen::Map<const Vector>(t.data().data(), static_cast<long>(t.size()));
}

Vector state_vector(const VidalState& vs, long limit) {
  return state_vector(vidal_to_plain(vs, AbsorbMode::toward_vertex_ordering), limit);
}

std::vector<LabeledTensor> doubled_network(const TensorNetworkState& tns, const std::vector<Matrix>& ops) {
  const Graph& g = tns.graph;
  std::vector<Index> fused;
  for (EdgeId e = 0; e < g.num_edges(); ++e) fused.push_back(make_index(tns.bond_dim(e) * tns.bond_dim(e)));
  std::vector<LabeledTensor> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const LabeledTensor& t = tns.tensor(v);
    const long d = tns.site_dim(v);
    const long k = static_cast<long>(t.size()) / d;
    Eigen::Map<const RowMajorMatrix> tm(t.data().data(), d, k);
    Matrix ket = tm;
    if (static_cast<std::size_t>(v) < ops.size() && ops[static_cast<std::size_t>(v)].size() > 0) {
      ket = ops[static_cast<std::size_t>(v)] * ket;
    }
    const Matrix dm = ket.transpose() * tm.conjugate();
    std::vector<Index> kets, bras;
    for (std::size_t a = 1; a < t.rank(); ++a) {
      kets.push_back(t.index(a));
      bras.push_back(t.index(a).at_level(1));
    }
    LabeledTensor full = from_matrix(dm, kets, bras);
    std::vector<Index> order;
    for (std::size_t a = 0; a < kets.size(); ++a) {
      order.push_back(kets[a]);
      order.push_back(bras[a]);
    }
    full = full.permuted(order);
    std::vector<Index> idx;
    for (EdgeId e : g.incident(v)) idx.push_back(fused[static_cast<std::size_t>(e)]);
    out.emplace_back(std::move(idx), std::move(full.storage()));
  }
  return out;
}

Complex exact_norm_unscaled(const TensorNetworkState& tns, long limit) {
  return contract_all(doubled_network(tns), limit).value();
}

double relative_amplitude_error(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("relative_amplitude_error: sizes differ");
  const double top = a.cwiseAbs().maxCoeff();
  if (top == 0.0) throw DegenerateInput("relative_amplitude_error: reference is zero");
  return (a - b).cwiseAbs().maxCoeff() / top;
}

}  // namespace bpg
