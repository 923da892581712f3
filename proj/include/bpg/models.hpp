#pragma once

// Graph builders and state constructors.
//
// Vertex numbering:
//   square(Lx, Ly)      v = y * Lx + x
//   cubic(Lx, Ly, Lz)   v = (z * Ly + y) * Lx + x
//   hexagonal(R, C)     brick wall, v = y * (2C + 2) + x with x in [0, 2C + 1],
//                       y in [0, R]; horizontal bonds along rows, vertical
//                       bonds (x, y)-(x, y + 1) when x + y is even
//   path(L)             v = position
// Lattice edges are created axis by axis: x bonds in row-major order, then
// y bonds in column-major order, then z bonds; edge tags hold the axis.
// Periodic wraps are appended to their axis block.

#include <cstdint>
#include <vector>

#include "bpg/graph.hpp"
#include "bpg/network.hpp"

namespace bpg {

struct LatticeSpec {
  enum class Kind { square, cubic, hexagonal, random_regular, path, random_tree };
  Kind kind = Kind::square;
  /// square: {Lx, Ly}; cubic: {Lx, Ly, Lz}; hexagonal: {rows, cols};
  /// random_regular: {n, z}; path / random_tree: {n}.
  std::vector<int> dims;
  std::vector<bool> periodic;
  std::uint64_t seed = 0;

  static LatticeSpec square(int lx, int ly, bool periodic = false);
  static LatticeSpec cubic(int lx, int ly, int lz, bool periodic = false);
  static LatticeSpec hexagonal(int rows, int cols);
  static LatticeSpec random_regular(int n, int z, std::uint64_t seed);
  static LatticeSpec path(int n);
  static LatticeSpec random_tree(int n, std::uint64_t seed);

  void validate() const;
};

Graph build_graph(const LatticeSpec& spec);

/// I.i.d. standard-normal real entries stored as complex.
TensorNetworkState random_tns(const Graph& g, long chi, long site_dim, std::uint64_t seed);

/// Product state with color 0 of the bipartition in basis state 0 (spin up)
/// and color 1 in basis state 1. Throws InvalidSpec if not bipartite.
VidalState neel_state(const Graph& g);

/// Amplitudes sqrt(exp(-beta E(s))) with E(s) = -sum_<vw> s_v s_w - h sum_v s_v.
/// Basis state 0 is s = +1. Bond dimension 2.
TensorNetworkState ising_sqrt_partition_state(const Graph& g, double beta, double h);

/// sum_s exp(-beta E(s)) by enumeration (at most 24 vertices).
double ising_partition_brute_force(const Graph& g, double beta, double h);

}  // namespace bpg
