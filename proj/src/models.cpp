#include "bpg/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "bpg/errors.hpp"

namespace bpg {

namespace {

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

void add_axis(EdgeList& edges, std::vector<int>& tags, const std::vector<int>& dims, std::size_t axis,
              bool periodic, const std::vector<std::size_t>& loop_order) {
  const int n = static_cast<int>(std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>()));
  auto id = [&](const std::vector<int>& c) {
    int v = 0;
    for (std::size_t k = dims.size(); k-- > 0;) v = v * dims[k] + c[k];
    return v;
  };
  // Enumerate coordinates with loop_order[0] varying slowest.
  std::vector<int> c(dims.size(), 0);
  std::vector<std::pair<VertexId, VertexId>> wraps;
  for (int count = 0; count < n; ++count) {
    int rem = count;
    for (std::size_t k = loop_order.size(); k-- > 0;) {
      const std::size_t ax = loop_order[k];
      c[ax] = rem % dims[ax];
      rem /= dims[ax];
    }
    if (c[axis] + 1 < dims[axis]) {
      auto d = c;
      ++d[axis];
      edges.emplace_back(id(c), id(d));
      tags.push_back(static_cast<int>(axis));
    } else if (periodic) {
      auto d = c;
      d[axis] = 0;
      wraps.emplace_back(id(d), id(c));
    }
  }
  for (auto w : wraps) {
    edges.push_back(w);
    tags.push_back(static_cast<int>(axis));
  }
}

Graph lattice(const std::vector<int>& dims, const std::vector<bool>& periodic) {
  EdgeList edges;
  std::vector<int> tags;
  std::vector<std::string> labels;
  const std::size_t nd = dims.size();
  for (std::size_t axis = 0; axis < nd; ++axis) {
    // x bonds row-major (x fastest); every other axis column-major (x slowest).
    std::vector<std::size_t> order;
    if (axis == 0) {
      for (std::size_t k = nd; k-- > 0;) order.push_back(k);
    } else {
      for (std::size_t k = 0; k < nd; ++k) order.push_back(k);
    }
    add_axis(edges, tags, dims, axis, periodic[axis], order);
  }
  const int n = static_cast<int>(std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>()));
  for (int v = 0; v < n; ++v) {
    std::string s = "(";
    int rem = v;
    for (std::size_t k = 0; k < nd; ++k) {
      s += std::to_string(rem % dims[k]);
      rem /= dims[k];
      s += k + 1 < nd ? "," : ")";
    }
    labels.push_back(s);
  }
  return Graph(n, edges, labels, tags);
}

Graph hexagonal(int rows, int cols) {
  const int w = 2 * cols + 2;
  const int h = rows + 1;
  EdgeList edges;
  std::vector<int> tags;
  std::vector<std::string> labels;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      edges.emplace_back(y * w + x, y * w + x + 1);
      tags.push_back(0);
    }
  }
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y + 1 < h; ++y) {
      if ((x + y) % 2 == 0) {
        edges.emplace_back(y * w + x, (y + 1) * w + x);
        tags.push_back(1);
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) labels.push_back("(" + std::to_string(x) + "," + std::to_string(y) + ")");
  }
  return Graph(w * h, edges, labels, tags);
}

bool connected(int n, const EdgeList& edges) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  int comps = n;
  for (auto [a, b] : edges) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[static_cast<std::size_t>(ra)] = rb;
      --comps;
    }
  }
  return comps == 1;
}

Graph random_regular(int n, int z, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> stubs;
  for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(z), v);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    EdgeList edges;
    std::set<std::pair<int, int>> seen;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      const int a = std::min(stubs[i], stubs[i + 1]);
      const int b = std::max(stubs[i], stubs[i + 1]);
      if (a == b || !seen.insert({a, b}).second) {
        ok = false;
        break;
      }
      edges.emplace_back(a, b);
    }
    if (ok && connected(n, edges)) {
      std::sort(edges.begin(), edges.end());
      return Graph(n, edges);
    }
  }
  throw InvalidSpec("random_regular: no simple connected graph found for n=" + std::to_string(n) +
                    ", z=" + std::to_string(z));
}

Graph random_tree(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EdgeList edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    edges.emplace_back(pick(rng), v);
  }
  return Graph(n, edges);
}

}  // namespace

LatticeSpec LatticeSpec::square(int lx, int ly, bool periodic) {
  return {Kind::square, {lx, ly}, {periodic, periodic}, 0};
}
LatticeSpec LatticeSpec::cubic(int lx, int ly, int lz, bool periodic) {
  return {Kind::cubic, {lx, ly, lz}, {periodic, periodic, periodic}, 0};
}
LatticeSpec LatticeSpec::hexagonal(int rows, int cols) { return {Kind::hexagonal, {rows, cols}, {}, 0}; }
LatticeSpec LatticeSpec::random_regular(int n, int z, std::uint64_t seed) {
  return {Kind::random_regular, {n, z}, {}, seed};
}
LatticeSpec LatticeSpec::path(int n) { return {Kind::path, {n}, {false}, 0}; }
LatticeSpec LatticeSpec::random_tree(int n, std::uint64_t seed) { return {Kind::random_tree, {n}, {}, seed}; }

void LatticeSpec::validate() const {
  std::size_t want = 0;
  switch (kind) {
    case Kind::square: want = 2; break;
    case Kind::cubic: want = 3; break;
    case Kind::hexagonal: want = 2; break;
    case Kind::random_regular: want = 2; break;
    case Kind::path: want = 1; break;
    case Kind::random_tree: want = 1; break;
  }
  if (dims.size() != want) throw InvalidSpec("lattice spec expects " + std::to_string(want) + " dims");
  for (int d : dims) {
    if (d < 1) throw InvalidSpec("lattice dims must be >= 1");
  }
  if (kind == Kind::square || kind == Kind::cubic || kind == Kind::path) {
    if (!periodic.empty() && periodic.size() != dims.size()) throw InvalidSpec("one periodic flag per dim");
    for (std::size_t k = 0; k < periodic.size(); ++k) {
      if (periodic[k] && dims[k] < 2) throw InvalidSpec("a periodic dimension needs size >= 2");
    }
  }
  if (kind == Kind::random_regular) {
    const int n = dims[0], z = dims[1];
    if ((static_cast<long>(n) * z) % 2 != 0) throw InvalidSpec("random_regular needs n*z even");
    if (z >= n) throw InvalidSpec("random_regular needs z < n");
    if (z < 1 || (z == 1 && n > 2)) throw InvalidSpec("random_regular with z=1 cannot be connected");
  }
}

Graph build_graph(const LatticeSpec& spec) {
  spec.validate();
  auto flags = [&] {
    std::vector<bool> p = spec.periodic;
    p.resize(spec.dims.size(), false);
    return p;
  };
  switch (spec.kind) {
    case LatticeSpec::Kind::square:
    case LatticeSpec::Kind::cubic:
    case LatticeSpec::Kind::path:
      return lattice(spec.dims, flags());
    case LatticeSpec::Kind::hexagonal:
      return hexagonal(spec.dims[0], spec.dims[1]);
    case LatticeSpec::Kind::random_regular:
      return random_regular(spec.dims[0], spec.dims[1], spec.seed);
    case LatticeSpec::Kind::random_tree:
      return random_tree(spec.dims[0], spec.seed);
  }
  throw InvalidSpec("unknown lattice kind");
}

TensorNetworkState random_tns(const Graph& g, long chi, long site_dim, std::uint64_t seed) {
  if (chi < 1 || site_dim < 1) throw InvalidSpec("random_tns: chi and site_dim must be >= 1");
  TensorNetworkState tns = make_tns(g, std::vector<long>(static_cast<std::size_t>(g.num_vertices()), site_dim),
                                    std::vector<long>(static_cast<std::size_t>(g.num_edges()), chi));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& t : tns.tensors) {
    for (Complex& x : t.data()) x = normal(rng);
  }
  return tns;
}

VidalState neel_state(const Graph& g) {
  const auto colors = g.bipartition();
  if (!colors) throw InvalidSpec("neel_state: graph is not bipartite");
  TensorNetworkState tns = make_tns(g, std::vector<long>(static_cast<std::size_t>(g.num_vertices()), 2),
                                    std::vector<long>(static_cast<std::size_t>(g.num_edges()), 1));
  for (VertexId v = 0; v < g.num_vertices(); ++v) tns.tensor(v).data()[static_cast<std::size_t>((*colors)[static_cast<std::size_t>(v)])] = 1.0;
  VidalState vs = vidal_from_plain(tns);
  return vs;
}

TensorNetworkState ising_sqrt_partition_state(const Graph& g, double beta, double h) {
  if (beta < 0.0) throw InvalidSpec("ising state needs beta >= 0");
  // W(s, s') = exp(beta s s' / 2) = A A^T with A = Q diag(sqrt(2 cosh), sqrt(2 sinh)).
  const double c = std::sqrt(2.0 * std::cosh(beta / 2.0));
  const double s = std::sqrt(2.0 * std::sinh(beta / 2.0));
  const double r = 1.0 / std::sqrt(2.0);
  const double a[2][2] = {{r * c, r * s}, {r * c, -r * s}};
  TensorNetworkState tns = make_tns(g, std::vector<long>(static_cast<std::size_t>(g.num_vertices()), 2),
                                    std::vector<long>(static_cast<std::size_t>(g.num_edges()), 2));
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    LabeledTensor& t = tns.tensor(v);
    const std::size_t deg = static_cast<std::size_t>(g.degree(v));
    const std::size_t block = std::size_t{1} << deg;
    for (std::size_t spin = 0; spin < 2; ++spin) {
      const double sv = spin == 0 ? 1.0 : -1.0;
      const double field = std::exp(beta * h * sv / 2.0);
      for (std::size_t b = 0; b < block; ++b) {
        double val = field;
        for (std::size_t k = 0; k < deg; ++k) val *= a[spin][(b >> (deg - 1 - k)) & 1U];
        t.data()[spin * block + b] = val;
      }
    }
  }
  return tns;
}

double ising_partition_brute_force(const Graph& g, double beta, double h) {
  const int n = g.num_vertices();
  if (n > 24) throw TooLarge("ising_partition_brute_force: too many spins");
  double z = 0.0;
  for (std::uint64_t conf = 0; conf < (std::uint64_t{1} << n); ++conf) {
    auto spin = [&](VertexId v) { return ((conf >> v) & 1U) ? -1.0 : 1.0; };
    double energy = 0.0;
    for (const Edge& e : g.edges()) energy -= spin(e.u) * spin(e.v);
    for (VertexId v = 0; v < n; ++v) energy -= h * spin(v);
    z += std::exp(-beta * energy);
  }
  return z;
}

}  // namespace bpg
