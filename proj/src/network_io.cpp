#include "bpg/network_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bpg/errors.hpp"

namespace bpg {

namespace {

static_assert(std::endian::native == std::endian::little, "payload layout assumes a little-endian host");

std::string next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  throw InvalidSpec("tns: unexpected end of header");
}

long expect_count(std::istream& in, const std::string& keyword) {
  std::istringstream ss(next_line(in));
  std::string key;
  long n = -1;
  if (!(ss >> key >> n) || key != keyword || n < 0) throw InvalidSpec("tns: expected '" + keyword + " <n>'");
  return n;
}

}  // namespace

void write_tns(std::ostream& out, const TensorNetworkState& tns) {
  tns.validate();
  const Graph& g = tns.graph;
  out << "# bpgauge-tns 1\n";
  out << "vertices " << g.num_vertices() << '\n';
  for (VertexId v = 0; v < g.num_vertices(); ++v) out << v << '\n';
  out << "edges " << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.id << ' ' << e.u << ' ' << e.v << ' ' << tns.bond_dim(e.id) << '\n';
  out << "sites " << g.num_vertices() << '\n';
  for (VertexId v = 0; v < g.num_vertices(); ++v) out << v << ' ' << tns.site_dim(v) << '\n';
  out << "log_scale " << std::setprecision(17) << tns.log_scale << '\n';
  std::size_t entries = 0;
  for (const auto& t : tns.tensors) entries += t.size();
  out << "data " << entries * 2 * sizeof(double) << '\n';
  for (const auto& t : tns.tensors) {
    out.write(reinterpret_cast<const char*>(t.data().data()), static_cast<std::streamsize>(t.size() * sizeof(Complex)));
  }
}

TensorNetworkState read_tns(std::istream& in) {
  std::string magic;
  if (!std::getline(in, magic) || magic != "# bpgauge-tns 1") throw InvalidSpec("tns: missing '# bpgauge-tns 1' header");
  const long nv = expect_count(in, "vertices");
  for (long i = 0; i < nv; ++i) {
    if (std::stol(next_line(in)) != i) throw InvalidSpec("tns: vertex ids must be 0..n-1 in order");
  }
  const long ne = expect_count(in, "edges");
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<long> bond_dims;
  for (long i = 0; i < ne; ++i) {
    std::istringstream ss(next_line(in));
    long id, u, v, d;
    if (!(ss >> id >> u >> v >> d) || id != i || d < 1) throw InvalidSpec("tns: bad edge record");
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    bond_dims.push_back(d);
  }
  if (expect_count(in, "sites") != nv) throw InvalidSpec("tns: one site record per vertex required");
  std::vector<long> site_dims;
  for (long i = 0; i < nv; ++i) {
    std::istringstream ss(next_line(in));
    long id, d;
    if (!(ss >> id >> d) || id != i || d < 1) throw InvalidSpec("tns: bad site record");
    site_dims.push_back(d);
  }
  std::istringstream ls(next_line(in));
  std::string key;
  double log_scale = 0.0;
  if (!(ls >> key >> log_scale) || key != "log_scale") throw InvalidSpec("tns: expected 'log_scale <real>'");
  const long nbytes = expect_count(in, "data");

  TensorNetworkState tns = make_tns(Graph(static_cast<int>(nv), edges), site_dims, bond_dims);
  tns.log_scale = log_scale;
  std::size_t expected = 0;
  for (const auto& t : tns.tensors) expected += t.size() * sizeof(Complex);
  if (static_cast<std::size_t>(nbytes) != expected) throw InvalidSpec("tns: payload size does not match dims");
  for (auto& t : tns.tensors) {
    in.read(reinterpret_cast<char*>(t.data().data()), static_cast<std::streamsize>(t.size() * sizeof(Complex)));
    if (!in) throw InvalidSpec("tns: truncated payload");
  }
  return tns;
}

void save_tns(const std::string& path, const TensorNetworkState& tns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidSpec("cannot open " + path + " for writing");
  write_tns(out, tns);
}

TensorNetworkState load_tns(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidSpec("cannot open " + path);
  return read_tns(in);
}

}  // namespace bpg
