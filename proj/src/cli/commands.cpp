#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "bpg/errors.hpp"
#include "bpg/evolution.hpp"
#include "bpg/gauging.hpp"
#include "bpg/models.hpp"
#include "bpg/network_io.hpp"
#include "bpg/observables.hpp"

namespace bpg::cli {

namespace {

const std::set<std::string> kModelKeys = {"model", "L", "dims", "periodic", "n", "z", "seed",
                                          "chi", "d", "state", "beta", "h", "input"};

const std::set<std::string> kBpKeys = {"target_C", "schedule", "damping", "max_iters", "threads"};

std::set<std::string> key_set(std::initializer_list<std::set<std::string>> parts, std::set<std::string> extra) {
  for (const auto& p : parts) extra.insert(p.begin(), p.end());
  extra.insert("out");
  return extra;
}

void defaults(RunConfig& r, const std::map<std::string, std::string>& d) {
  for (const auto& [k, v] : d) {
    if (!r.has(k)) r.set(k, v);
  }
}

std::string num(double x) {
  if (std::isnan(x)) return "";
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string join(const std::vector<long>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

// Primary CSV stream plus optional companion tables.
class Output {
 public:
  Output(const RunConfig& r, std::ostream& fallback) : fallback_(fallback) {
    path_ = r.get_string("out", "");
    if (!path_.empty()) {
      file_ = std::make_unique<std::ofstream>(path_);
      if (!*file_) throw ConfigError("cannot write output file '" + path_ + "'");
    }
  }

  std::ostream& main() { return file_ ? *file_ : fallback_; }

  /// A second table: `<out><suffix>` when writing to a file, otherwise the
  /// same stream after a blank line.
  std::ostream& companion(const std::string& suffix, const std::string& explicit_path) {
    const std::string p = !explicit_path.empty() ? explicit_path : (path_.empty() ? "" : path_ + suffix);
    if (p.empty()) {
      fallback_ << "\n";
      return fallback_;
    }
    extra_ = std::make_unique<std::ofstream>(p);
    if (!*extra_) throw ConfigError("cannot write output file '" + p + "'");
    return *extra_;
  }

 private:
  std::ostream& fallback_;
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::unique_ptr<std::ofstream> extra_;
};

LatticeSpec::Kind parse_kind(const std::string& s) {
  if (s == "square") return LatticeSpec::Kind::square;
  if (s == "cubic") return LatticeSpec::Kind::cubic;
  if (s == "hexagonal") return LatticeSpec::Kind::hexagonal;
  if (s == "random_regular") return LatticeSpec::Kind::random_regular;
  if (s == "path") return LatticeSpec::Kind::path;
  if (s == "random_tree") return LatticeSpec::Kind::random_tree;
  throw ConfigError("model: unknown kind '" + s +
                    "' (square, cubic, hexagonal, random_regular, path, random_tree)");
}

std::size_t rank_of(LatticeSpec::Kind k) {
  switch (k) {
    case LatticeSpec::Kind::square:
    case LatticeSpec::Kind::hexagonal:
    case LatticeSpec::Kind::random_regular: return 2;
    case LatticeSpec::Kind::cubic: return 3;
    default: return 1;
  }
}

// Reads the lattice keys and writes the resolved dims/periodic back.
LatticeSpec lattice_from(RunConfig& r, long side_override = 0) {
  LatticeSpec spec;
  spec.kind = parse_kind(r.get_string("model", "square"));
  const std::size_t rank = rank_of(spec.kind);
  std::vector<long> dims;
  if (spec.kind == LatticeSpec::Kind::random_regular) {
    dims = {r.get_int("n", 12), r.get_int("z", 3)};
  } else if (side_override > 0) {
    dims.assign(rank, side_override);
  } else if (r.has("dims")) {
    dims = r.get_int_list("dims", {});
  } else {
    dims.assign(rank, r.get_int("L", 4));
  }
  if (dims.size() != rank) {
    throw ConfigError("dims: model '" + r.get_string("model", "") + "' needs " + std::to_string(rank) + " values");
  }
  for (long d : dims) spec.dims.push_back(static_cast<int>(d));
  std::vector<bool> periodic(rank, false);
  if (r.has("periodic")) {
    const auto items = r.get_string_list("periodic", {});
    if (items.size() == 1) {
      RunConfig one;
      one.set("periodic", items[0]);
      periodic.assign(rank, one.get_bool("periodic", false));
    } else if (items.size() == rank) {
      for (std::size_t i = 0; i < rank; ++i) {
        RunConfig one;
        one.set("periodic", items[i]);
        periodic[i] = one.get_bool("periodic", false);
      }
    } else {
      throw ConfigError("periodic: give one value or one per dimension");
    }
  }
  if (spec.kind == LatticeSpec::Kind::square || spec.kind == LatticeSpec::Kind::cubic) spec.periodic = periodic;
  spec.seed = static_cast<std::uint64_t>(r.get_int("seed", 1));
  if (side_override == 0 && spec.kind != LatticeSpec::Kind::random_regular) r.set("dims", join(dims));
  try {
    spec.validate();
  } catch (const InvalidSpec& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return spec;
}

TensorNetworkState state_from(RunConfig& r, const Graph& g, const std::string& default_state) {
  const std::string kind = r.get_string("state", default_state);
  r.set("state", kind);
  if (kind == "file") return load_tns(r.require_string("input"));
  if (kind == "random") {
    const long chi = r.get_int("chi", 4);
    const long d = r.get_int("d", 2);
    if (chi < 1 || d < 1) throw ConfigError("chi and d must be >= 1");
    r.set("chi", std::to_string(chi));
    r.set("d", std::to_string(d));
    return random_tns(g, chi, d, static_cast<std::uint64_t>(r.get_int("seed", 1)));
  }
  if (kind == "ising") {
    const double beta = r.get_double("beta", 0.3);
    const double h = r.get_double("h", 0.5);
    if (beta < 0.0) throw ConfigError("beta must be >= 0");
    r.set("beta", num(beta));
    r.set("h", num(h));
    return ising_sqrt_partition_state(g, beta, h);
  }
  throw ConfigError("state: unknown kind '" + kind + "' (random, ising, file)");
}

BpConfig bp_config(const RunConfig& r) {
  BpConfig c;
  const std::string s = r.get_string("schedule", "sequential");
  if (s == "sequential") {
    c.schedule = Schedule::sequential;
  } else if (s == "synchronous") {
    c.schedule = Schedule::synchronous;
  } else {
    throw ConfigError("schedule: expected sequential or synchronous, got '" + s + "'");
  }
  c.target_delta = r.get_double("target_C", 1e-10);
  c.damping = r.get_double("damping", 0.0);
  c.max_iters = static_cast<int>(r.get_int("max_iters", 1000));
  c.threads = static_cast<int>(r.get_int("threads", 1));
  try {
    c.validate();
  } catch (const InvalidSpec& e) {
    throw ConfigError(e.what());
  }
  return c;
}

GaugeResult run_routine(const std::string& routine, const TensorNetworkState& tns, const BpConfig& bc,
                        const TruncationPolicy& trunc, InitStrategy init) {
  if (routine == "bp") return bp_gauge(tns, bc, trunc, init);
  if (routine == "eager") return eager_gauge(tns, bc, trunc, init);
  if (routine == "simple_update") return simple_update_gauge(tns, bc, trunc);
  throw ConfigError("routine: expected bp, eager or simple_update, got '" + routine + "'");
}

long max_bond(const TensorNetworkState& tns) {
  long m = 0;
  for (EdgeId e = 0; e < tns.graph.num_edges(); ++e) m = std::max(m, tns.bond_dim(e));
  return m;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

VertexId center_vertex(int lx, int ly) { return (ly / 2) * lx + lx / 2; }

}  // namespace

int cmd_gauge(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err) {
  RunConfig r = cfg;
  r.check_keys("gauge", key_set({kModelKeys, kBpKeys}, {"routine", "init", "init_seed", "max_rank", "cutoff",
                                                         "summary", "save"}));
  defaults(r, {{"model", "square"}, {"routine", "bp"}, {"target_C", "1e-10"}, {"schedule", "sequential"}, {"damping", "0"},
               {"max_iters", "1000"}, {"threads", "1"}, {"init", "identity"}, {"init_seed", "0"}});
  const LatticeSpec spec = lattice_from(r);
  const Graph g = build_graph(spec);
  const TensorNetworkState tns = state_from(r, g, "random");
  const BpConfig bc = bp_config(r);
  TruncationPolicy trunc;
  if (r.has("max_rank")) trunc.max_rank = r.get_int("max_rank", 1);
  trunc.cutoff = r.get_double("cutoff", 0.0);
  try {
    trunc.validate();
  } catch (const InvalidSpec& e) {
    throw ConfigError(e.what());
  }
  const std::string init_kind = r.get_string("init", "identity");
  InitStrategy init;
  if (init_kind == "random_psd") {
    init = InitStrategy::random_psd(static_cast<std::uint64_t>(r.get_int("init_seed", 0)));
  } else if (init_kind != "identity") {
    throw ConfigError("init: expected identity or random_psd, got '" + init_kind + "'");
  }
  const std::string routine = r.get_string("routine", "bp");
  if (routine != "bp" && routine != "eager" && routine != "simple_update") {
    throw ConfigError("routine: expected bp, eager or simple_update, got '" + routine + "'");
  }

  Output out(r, out_stream);
  const GaugeResult res = run_routine(routine, tns, bc, trunc, init);
  const double measured = vidal_distance(res.state);

  std::ostream& main = out.main();
  main << r.header_comment("gauge") << "iteration,delta,seconds\n";
  for (std::size_t i = 0; i < res.report.deltas.size(); ++i) {
    main << (i + 1) << ',' << num(res.report.deltas[i]) << ',' << num(res.report.seconds[i]) << '\n';
  }
  std::ostream& summary = out.companion(".summary.csv", r.get_string("summary", ""));
  summary << "routine,N,chi,iterations,total_seconds,final_delta,final_C_measured,converged\n"
          << routine << ',' << g.num_vertices() << ',' << max_bond(tns) << ',' << res.report.iterations << ','
          << num(res.report.wall_time) << ',' << num(res.report.final_delta) << ',' << num(measured) << ','
          << (res.report.converged ? "true" : "false") << '\n';
  if (r.has("save")) save_tns(r.require_string("save"), vidal_to_symmetric(res.state));
  if (!res.report.converged) {
    err << "gauge: not converged after " << res.report.iterations << " iterations (delta "
        << res.report.final_delta << ")\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err) {
  RunConfig r = cfg;
  r.check_keys("bench", key_set({kModelKeys, kBpKeys}, {"L_list", "chi_list", "routines", "fit"}));
  defaults(r, {{"model", "square"}, {"L_list", "6"}, {"chi_list", "4,8,12,16"},
               {"routines", "bp,eager,simple_update"}, {"target_C", "1e-10"}, {"schedule", "sequential"},
               {"max_iters", "1000"}, {"threads", "1"}, {"d", "2"}, {"seed", "1"}});
  const auto sides = r.get_int_list("L_list", {});
  const auto chis = r.get_int_list("chi_list", {});
  const auto routines = r.get_string_list("routines", {});
  for (const auto& rt : routines) {
    if (rt != "bp" && rt != "eager" && rt != "simple_update") throw ConfigError("routines: unknown routine '" + rt + "'");
  }
  const BpConfig bc = bp_config(r);
  const long d = r.get_int("d", 2);
  const auto seed = static_cast<std::uint64_t>(r.get_int("seed", 1));
  for (long side : sides) lattice_from(r, side);

  struct Cell {
    std::string routine;
    long side;
    int n;
    long chi;
    double per_iter;
    bool ok;
  };
  std::vector<Cell> cells;
  bool any_nonconverged = false;

  Output out(r, out_stream);
  std::ostream& main = out.main();
  main << r.header_comment("bench")
       << "routine,L,N,chi,iterations,total_seconds,seconds_per_iteration,final_C_measured,status\n";
  for (long side : sides) {
    RunConfig local = r;
    const Graph g = build_graph(lattice_from(local, side));
    for (long chi : chis) {
      const TensorNetworkState tns = random_tns(g, chi, d, seed);
      for (const auto& routine : routines) {
        Cell cell{routine, side, g.num_vertices(), chi, 0.0, false};
        try {
          const GaugeResult res = run_routine(routine, tns, bc, {}, {});
          const double c = vidal_distance(res.state);
          cell.per_iter = res.report.wall_time / std::max(1, res.report.iterations);
          cell.ok = true;
          const std::string status = res.report.converged ? "ok" : "nonconverged";
          any_nonconverged = any_nonconverged || !res.report.converged;
          main << routine << ',' << side << ',' << g.num_vertices() << ',' << chi << ',' << res.report.iterations
               << ',' << num(res.report.wall_time) << ',' << num(cell.per_iter) << ',' << num(c) << ',' << status
               << '\n';
        } catch (const std::exception& e) {
          std::string msg = e.what();
          for (char& ch : msg) {
            if (ch == ',' || ch == '\n') ch = ' ';
          }
          main << routine << ',' << side << ',' << g.num_vertices() << ',' << chi << ",,,,,error: " << msg << '\n';
          err << "bench: " << routine << " L=" << side << " chi=" << chi << " failed: " << e.what() << '\n';
        }
        main.flush();
        cells.push_back(cell);
      }
    }
  }

  std::ostream& fit = out.companion(".fit.csv", r.get_string("fit", ""));
  fit << "routine,variable,fixed,exponent,points\n";
  for (const auto& routine : routines) {
    for (long side : sides) {
      std::vector<double> x, y;
      for (const Cell& c : cells) {
        if (c.ok && c.routine == routine && c.side == side) {
          x.push_back(std::log(static_cast<double>(c.chi)));
          y.push_back(std::log(c.per_iter));
        }
      }
      if (x.size() >= 2) fit << routine << ",chi,L=" << side << ',' << num(fit_slope(x, y)) << ',' << x.size() << '\n';
    }
    for (long chi : chis) {
      std::vector<double> x, y;
      for (const Cell& c : cells) {
        if (c.ok && c.routine == routine && c.chi == chi) {
          x.push_back(std::log(static_cast<double>(c.n)));
          y.push_back(std::log(c.per_iter));
        }
      }
      if (x.size() >= 2) fit << routine << ",N,chi=" << chi << ',' << num(fit_slope(x, y)) << ',' << x.size() << '\n';
    }
  }
  return any_nonconverged ? kExitNonConvergence : kExitOk;
}

namespace {

std::vector<double> beta_grid(const RunConfig& r) {
  if (r.has("betas")) return r.get_double_list("betas", {});
  const double lo = r.get_double("beta_min", 0.1);
  const double hi = r.get_double("beta_max", 0.5);
  const double step = r.get_double("beta_step", 0.02);
  if (!(step > 0.0) || hi < lo || lo < 0.0) throw ConfigError("beta grid: need 0 <= beta_min <= beta_max and beta_step > 0");
  std::vector<double> out;
  const long count = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

int sz_scan(RunConfig& r, Output& out, const std::string& command) {
  const double h = r.get_double("h", 0.5);
  const auto betas = beta_grid(r);
  const auto sides = r.get_int_list("L_list", {2, 4, 8});
  const long periodic_side = r.get_int("periodic_L", 3);
  if (periodic_side < 2) throw ConfigError("periodic_L must be >= 2");
  BpConfig bc = bp_config(r);
  std::ostream& main = out.main();
  main << r.header_comment(command) << "beta,h,lattice,Sz,iterations,converged\n";
  auto run = [&](const Graph& g, VertexId center, double beta, const std::string& label) {
    const TensorNetworkState st = ising_sqrt_partition_state(g, beta, h);
    const GaugeResult res = bp_gauge(st, bc);
    const Complex sz = rank_one_expectation(res.state, LocalOperator::sz(), center);
    main << num(beta) << ',' << num(h) << ',' << label << ',' << num(sz.real()) << ',' << res.report.iterations << ','
         << (res.report.converged ? "true" : "false") << '\n';
  };
  for (double beta : betas) {
    const int p = static_cast<int>(periodic_side);
    run(build_graph(LatticeSpec::square(p, p, true)), center_vertex(p, p), beta, "periodic");
    for (long side : sides) {
      const int l = static_cast<int>(side);
      if (l < 1) throw ConfigError("L_list entries must be >= 1");
      run(build_graph(LatticeSpec::square(l, l)), center_vertex(l, l), beta, std::to_string(l));
    }
  }
  return kExitOk;
}

const std::set<std::string> kScanKeys = {"betas", "beta_min", "beta_max", "beta_step", "routines",
                                         "L_list", "periodic_L"};

}  // namespace

int cmd_ising_scan(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err) {
  (void)err;
  RunConfig r = cfg;
  r.check_keys("ising-scan", key_set({kModelKeys, kBpKeys, kScanKeys}, {"mode"}));
  const std::string mode = r.get_string("mode", "iterations");
  if (mode == "sz") {
    defaults(r, {{"h", "0.5"}, {"target_C", "1e-10"}, {"schedule", "sequential"}, {"max_iters", "1000"},
                 {"L_list", "2,4,8"}, {"periodic_L", "3"}, {"beta_min", "0.1"}, {"beta_max", "0.5"},
                 {"beta_step", "0.02"}});
    Output out(r, out_stream);
    return sz_scan(r, out, "ising-scan");
  }
  if (mode != "iterations") throw ConfigError("mode: expected iterations or sz, got '" + mode + "'");
  defaults(r, {{"model", "cubic"}, {"L", "4"}, {"h", "0.5"}, {"routines", "bp,eager"}, {"target_C", "1e-8"},
               {"schedule", "sequential"}, {"max_iters", "1000"}, {"beta_min", "0.1"}, {"beta_max", "0.5"},
               {"beta_step", "0.02"}, {"mode", "iterations"}});
  const Graph g = build_graph(lattice_from(r));
  const double h = r.get_double("h", 0.5);
  const auto betas = beta_grid(r);
  const auto routines = r.get_string_list("routines", {});
  for (const auto& rt : routines) {
    if (rt != "bp" && rt != "eager" && rt != "simple_update") throw ConfigError("routines: unknown routine '" + rt + "'");
  }
  const BpConfig bc = bp_config(r);
  Output out(r, out_stream);
  std::ostream& main = out.main();
  main << r.header_comment("ising-scan") << "beta,routine,iterations,converged,final_C_measured\n";
  for (double beta : betas) {
    const TensorNetworkState st = ising_sqrt_partition_state(g, beta, h);
    for (const auto& routine : routines) {
      const GaugeResult res = run_routine(routine, st, bc, {}, {});
      main << num(beta) << ',' << routine << ',' << res.report.iterations << ','
           << (res.report.converged ? "true" : "false") << ',' << num(vidal_distance(res.state)) << '\n';
    }
  }
  return kExitOk;
}

int cmd_infinite(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err) {
  (void)err;
  RunConfig r = cfg;
  r.check_keys("infinite", key_set({kModelKeys, kBpKeys, kScanKeys}, {}));
  defaults(r, {{"h", "0.5"}, {"target_C", "1e-10"}, {"schedule", "sequential"}, {"max_iters", "1000"},
               {"L_list", "2,4,8"}, {"periodic_L", "3"}, {"betas", "0.3"}});
  Output out(r, out_stream);
  return sz_scan(r, out, "infinite");
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err) {
  (void)err;
  RunConfig r = cfg;
  r.check_keys("evolve", key_set({kModelKeys}, {"program", "g", "dbeta", "steps", "layers", "regauge_every",
                                                 "regauge_target", "regauge_max_iters", "svd_cutoff",
                                                 "track_fidelity", "energy"}));
  defaults(r, {{"model", "square"}, {"L", "3"}, {"chi", "2"}, {"program", "ising"}, {"g", "3"}, {"dbeta", "0.25"},
               {"steps", "8"}, {"layers", "3"}, {"regauge_every", "0"}, {"regauge_target", "1e-3"},
               {"regauge_max_iters", "200"}, {"svd_cutoff", "1e-14"}, {"seed", "1"}});
  const Graph g = build_graph(lattice_from(r));
  if (!g.bipartition()) throw ConfigError("evolve starts from the Neel state and needs a bipartite lattice");
  const std::string program_kind = r.get_string("program", "ising");
  const double field = r.get_double("g", 3.0);
  Program program;
  if (program_kind == "ising") {
    const long steps = r.get_int("steps", 8);
    if (steps < 1) throw ConfigError("steps must be >= 1");
    program = ising_program(g, field, r.get_double("dbeta", 0.25), static_cast<int>(steps));
  } else if (program_kind == "random") {
    const long layers = r.get_int("layers", 3);
    if (layers < 1) throw ConfigError("layers must be >= 1");
    program = random_circuit_program(g, static_cast<int>(layers), static_cast<std::uint64_t>(r.get_int("seed", 1)));
  } else if (program_kind == "identity") {
    program = identity_program(g, static_cast<int>(r.get_int("layers", 3)));
  } else {
    throw ConfigError("program: expected ising, random or identity, got '" + program_kind + "'");
  }

  EvolutionConfig ec;
  ec.max_chi = r.get_int("chi", 2);
  ec.svd_cutoff = r.get_double("svd_cutoff", 1e-14);
  ec.regauge_every = static_cast<int>(r.get_int("regauge_every", 0));
  ec.regauge_target = r.get_double("regauge_target", 1e-3);
  ec.regauge_max_iters = static_cast<int>(r.get_int("regauge_max_iters", 200));
  ec.seed = static_cast<std::uint64_t>(r.get_int("seed", 1));
  ec.track_fidelity = r.get_bool("track_fidelity", g.num_vertices() <= 12);
  r.set("track_fidelity", ec.track_fidelity ? "true" : "false");
  try {
    ec.validate();
  } catch (const InvalidSpec& e) {
    throw ConfigError(e.what());
  }

  int gate_id = -1;
  int current_layer = -1;
  for (const ProgramStep& s : program) {
    if (s.kind != ProgramStep::Kind::two_site) continue;
    ++gate_id;
    if (s.layer != current_layer && current_layer >= 0) ec.observable_schedule.push_back(gate_id - 1);
    current_layer = s.layer;
  }
  ec.observable_schedule.push_back(gate_id);

  const std::string energy_kind =
      r.get_string("energy", program_kind == "ising" ? (g.num_vertices() <= 16 ? "exact" : "rank_one") : "none");
  r.set("energy", energy_kind);
  EnergyHook hook;
  if (energy_kind == "exact") {
    hook = [field](const VidalState& vs) {
      try {
        return exact_tfi_energy(vidal_to_plain(vs), field);
      } catch (const TooLarge&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
  } else if (energy_kind == "rank_one") {
    hook = [field](const VidalState& vs) { return rank_one_tfi_energy(vs, field); };
  } else if (energy_kind != "none") {
    throw ConfigError("energy: expected exact, rank_one or none, got '" + energy_kind + "'");
  }

  Output out(r, out_stream);
  const Trajectory tr = evolve(neel_state(g), program, ec, hook);
  std::ostream& main = out.main();
  main << r.header_comment("evolve") << "step,gate_id,f_n,F_n,energy,C_estimate,seconds,layer,truncation_error\n";
  for (const StepRecord& rec : tr.records) {
    main << rec.step << ',' << rec.gate_id << ',' << num(rec.fidelity) << ',' << num(rec.running_fidelity) << ','
         << num(rec.energy) << ',' << num(rec.vidal_distance) << ',' << num(rec.seconds) << ',' << rec.layer << ','
         << num(rec.truncation_error) << '\n';
  }
  return kExitOk;
}

std::vector<std::string> command_names() { return {"gauge", "bench", "ising-scan", "evolve", "infinite"}; }

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out_stream, std::ostream& err) {
  using Fn = int (*)(const RunConfig&, std::ostream&, std::ostream&);
  static const std::map<std::string, Fn> table = {{"gauge", cmd_gauge},
                                                  {"bench", cmd_bench},
                                                  {"ising-scan", cmd_ising_scan},
                                                  {"evolve", cmd_evolve},
                                                  {"infinite", cmd_infinite}};
  const auto it = table.find(name);
  if (it == table.end()) {
    err << "unknown command '" << name << "'\n";
    return kExitConfigError;
  }
  try {
    return it->second(cfg, out_stream, err);
  } catch (const ConfigError& e) {
    err << name << ": config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InvalidSpec& e) {
    err << name << ": invalid input: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace bpg::cli
