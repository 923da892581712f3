#pragma once

// Serialization of tensor network states.
//
// Text header, one record per line:
//
//   # bpgauge-tns 1
//   vertices <n>            followed by n lines: <vertex-id>
//   edges <m>               followed by m lines: <edge-id> <v> <w> <bond-dim>
//   sites <n>               followed by n lines: <vertex-id> <site-dim>
//   log_scale <real>
//   data <nbytes>
//
// then exactly <nbytes> of payload: for each vertex in id order, its tensor
// entries in row-major order over [site, incident bonds by ascending edge
// id], each entry as two little-endian IEEE-754 doubles (re, im).

#include <iosfwd>
#include <string>

#include "bpg/network.hpp"

namespace bpg {

void write_tns(std::ostream& out, const TensorNetworkState& tns);
/// Throws InvalidSpec on malformed input.
TensorNetworkState read_tns(std::istream& in);

void save_tns(const std::string& path, const TensorNetworkState& tns);
TensorNetworkState load_tns(const std::string& path);

}  // namespace bpg
