#include "ashg_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ashg/connected_dp.hpp"
#include "ashg/game.hpp"
#include "ashg/io.hpp"
#include "ashg/oracle.hpp"
#include "ashg/reductions.hpp"
#include "ashg/stable_coloring.hpp"
#include "ashg/tree_decomposition.hpp"

namespace ashg::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Reader>
auto parse_file(const std::string& path, Reader&& reader) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return reader(in);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

AshgInstance load_instance(const std::string& path) {
  return parse_file(path, [](std::istream& in) { return read_instance(in); });
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  writer(out);
}

EliminationHeuristic parse_heuristic(const std::string& name) {
  return name == "min-fill" ? EliminationHeuristic::kMinFill : EliminationHeuristic::kMinDegree;
}

json instance_stats(const AshgInstance& instance) {
  return json{{"n", instance.vertex_count()},
              {"arcs", instance.arc_count()},
              {"max_degree", instance.max_degree()},
              {"max_weight", instance.max_abs_weight()}};
}

json partition_json(const Partition& p) {
  json classes = json::array();
  for (Vertex v = 0; v < p.vertex_count(); ++v) classes.push_back(p.coalition_of(v) + 1);
  return classes;
}

json witness_json(const DeviationWitness& w) {
  json j{{"vertex", w.vertex + 1}, {"current_utility", w.current_utility}};
  if (w.target) {
    j["target"] = *w.target + 1;
  } else {
    j["target"] = "SINGLETON";
  }
  j["target_utility"] = w.target_utility;
  return j;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const char* answer_name(int code) {
  switch (code) {
    case kSome: return "SOME";
    case kNone: return "NONE";
    default: return "UNKNOWN";
  }
}

AshgInstance random_instance(std::size_t n, std::size_t max_degree, Weight lo, Weight hi, double density,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<Weight> weight(lo, hi);
  std::uniform_int_distribution<int> direction(0, 2);
  std::vector<std::size_t> degree(n, 0);
  std::vector<Arc> arcs;
  for (auto [u, v] : pairs) {
    if (degree[u] >= max_degree || degree[v] >= max_degree || !keep(rng)) continue;
    ++degree[u];
    ++degree[v];
    const int d = direction(rng);
    if (d != 1) arcs.push_back(Arc{u, v, weight(rng)});
    if (d != 0) arcs.push_back(Arc{v, u, weight(rng)});
  }
  return AshgInstance(n, std::move(arcs));
}

struct SolveArgs {
  std::string mode = "nash", instance, td, heuristic = "min-degree", out;
  std::size_t max_signatures = SolverOptions{}.max_signatures_per_node;
  unsigned workers = 1;
  std::size_t max_steps = 10000;
};

int cmd_solve(const SolveArgs& a, json& report) {
  const auto start = Clock::now();
  const auto instance = load_instance(a.instance);
  report.update(instance_stats(instance));
  report["mode"] = a.mode;

  TreeDecomposition td;
  if (!a.td.empty()) {
    auto file = parse_file(a.td, [](std::istream& in) { return read_decomposition(in); });
    if (file.vertex_count != instance.vertex_count()) throw InputError("decomposition is over a different vertex count");
    if (auto v = validate(file.decomposition, instance); !v) throw InputError("invalid decomposition: " + v.violations.front());
    td = std::move(file.decomposition);
  } else if (a.mode != "dynamics") {
    td = heuristic_decompose(instance, parse_heuristic(a.heuristic));
  }
  if (a.mode != "dynamics") report["width"] = td.width();

  SolverOptions options;
  options.max_signatures_per_node = a.max_signatures;
  options.workers = a.workers;

  std::optional<Partition> result;
  int code = kUnknown;
  try {
    if (a.mode == "nash") {
      auto solution = solve_stable_coloring(instance, td, options);
      report["colors"] = solution.colors;
      report["peak_table_size"] = solution.stats.peak_table_size;
      result = std::move(solution.partition);
      code = result ? kSome : kNone;
    } else if (a.mode == "connected-nash") {
      const auto ntd = make_nice(td);
      ConnectedNashSolver solver(instance, ntd, options);
      result = solver.solve();
      report["peak_table_size"] = solver.stats().peak_table_size;
      code = result ? kSome : kNone;
    } else {
      result = better_response_dynamics(instance, a.max_steps);
      code = result ? kSome : kUnknown;
    }
  } catch (const ResourceLimitError& e) {
    report["error"] = e.what();
    code = kUnknown;
  }

  if (result) {
    report["partition"] = partition_json(*result);
    if (!a.out.empty()) write_file(a.out, [&](std::ostream& o) { write_partition(o, *result); });
  }
  report["answer"] = answer_name(code);
  report["wall_ms"] = elapsed_ms(start);
  return code;
}

struct VerifyArgs {
  std::string instance, partition;
  bool connected = false;
};

int cmd_verify(const VerifyArgs& a, json& report) {
  const auto instance = load_instance(a.instance);
  report.update(instance_stats(instance));
  const auto partition = parse_file(a.partition, [&](std::istream& in) {
    return read_partition(in, instance.vertex_count());
  });
  report["coalitions"] = partition.coalition_count();
  const auto stability = is_nash_stable(instance, partition);
  bool ok = stability.stable;
  report["nash_stable"] = stability.stable;
  if (stability.witness) report["witness"] = witness_json(*stability.witness);
  if (a.connected) {
    const auto conn = is_connected_partition(instance, partition);
    report["connected"] = conn.connected;
    if (conn.offender) report["disconnected_coalition"] = *conn.offender + 1;
    ok = ok && conn.connected;
  }
  report["answer"] = ok ? "STABLE" : "UNSTABLE";
  return ok ? kSome : kNone;
}

struct GenArgs {
  std::string generator, cnf, items, instance, certificate, out, witness;
  std::size_t delta = 2, bins = 0, n = 8, max_degree = 4;
  std::int64_t target = 0;
  Weight min_weight = -3, max_weight = 3;
  double density = 0.5;
  std::uint64_t seed = 1;
  bool unit_weights = false;
};

std::vector<std::int64_t> load_integers(const std::string& path) {
  return parse_file(path, [](std::istream& in) { return read_integer_list(in); });
}

std::vector<bool> load_assignment(const std::string& path, std::size_t variables) {
  std::vector<bool> assignment(variables, false);
  for (auto lit : load_integers(path)) {
    if (lit == 0) continue;
    const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
    if (var > variables) throw InputError("certificate names variable " + std::to_string(var));
    assignment[var - 1] = lit > 0;
  }
  return assignment;
}

int cmd_gen(const GenArgs& a, json& report) {
  report["generator"] = a.generator;
  GeneratedInstance gen;
  std::optional<Partition> witness;
  const bool certified = !a.certificate.empty();

  if (a.generator == "sat-hd" || a.generator == "sat-bd") {
    if (a.cnf.empty()) throw InputError(a.generator + " needs --cnf");
    const auto phi = parse_file(a.cnf, [](std::istream& in) { return read_dimacs_cnf(in); });
    const bool high = a.generator == "sat-hd";
    gen = high ? gen_sat_high_degree(phi, a.delta) : gen_sat_bounded_degree(phi);
    if (certified) {
      const auto assignment = load_assignment(a.certificate, phi.variable_count());
      witness = high ? witness_sat_high_degree(phi, a.delta, assignment)
                     : witness_sat_bounded_degree(phi, assignment);
    }
    report["variables"] = gen.encoded_variables;
    if (high) report["delta"] = gen.delta;
  } else if (a.generator == "3part") {
    if (a.items.empty()) throw InputError("3part needs --items");
    NumericInstance problem{load_integers(a.items), a.target, 0};
    gen = gen_three_partition_star(problem);
    if (certified) {
      const auto flat = load_integers(a.certificate);
      if (flat.size() % 3 != 0) throw InputError("certificate must list item indices in groups of three");
      std::vector<std::array<std::size_t, 3>> triples;
      for (std::size_t i = 0; i < flat.size(); i += 3) {
        std::array<std::size_t, 3> t{};
        for (std::size_t k = 0; k < 3; ++k) {
          if (flat[i + k] < 1) throw InputError("item indices are 1-based");
          t[k] = static_cast<std::size_t>(flat[i + k] - 1);
        }
        triples.push_back(t);
      }
      witness = witness_three_partition_star(problem, triples);
    }
  } else if (a.generator == "binpack") {
    if (a.items.empty()) throw InputError("binpack needs --items");
    NumericInstance problem{load_integers(a.items), a.target, a.bins};
    gen = gen_bin_packing(problem, a.unit_weights);
    if (certified) {
      std::vector<std::size_t> bin_of;
      for (auto b : load_integers(a.certificate)) {
        if (b < 1) throw InputError("bin indices are 1-based");
        bin_of.push_back(static_cast<std::size_t>(b - 1));
      }
      witness = witness_bin_packing(problem, a.unit_weights, bin_of);
    }
  } else if (a.generator == "square") {
    if (a.instance.empty()) throw InputError("square needs --instance");
    gen.instance = square_zero_arcs(load_instance(a.instance));
  } else if (a.generator == "random") {
    if (a.min_weight > a.max_weight) throw InputError("--min-weight exceeds --max-weight");
    gen.instance = random_instance(a.n, a.max_degree, a.min_weight, a.max_weight, a.density, a.seed);
    report["seed"] = a.seed;
  } else {
    throw InputError("unknown generator " + a.generator);
  }

  report.update(instance_stats(gen.instance));
  if (!gen.warnings.empty()) report["warnings"] = gen.warnings;
  write_file(a.out, [&](std::ostream& o) { write_instance(o, gen.instance); });
  if (witness) {
    const auto check = is_nash_stable(gen.instance, *witness);
    report["witness_stable"] = check.stable;
    if (!a.witness.empty()) write_file(a.witness, [&](std::ostream& o) { write_partition(o, *witness); });
  }
  return kSome;
}

struct OracleArgs {
  std::string instance, mode = "nash", out;
  std::size_t k = 0, max_n = OracleOptions{}.max_vertices;
};

int cmd_oracle(const OracleArgs& a, json& report) {
  const auto start = Clock::now();
  const auto instance = load_instance(a.instance);
  report.update(instance_stats(instance));
  report["mode"] = a.mode;
  OracleOptions options{a.max_n};
  int code = kUnknown;
  try {
    std::optional<Partition> result;
    if (a.mode == "coloring") {
      const auto k = a.k != 0 ? a.k : choose_k(heuristic_decompose(instance).max_bag_size(), instance.max_degree());
      report["k"] = k;
      if (auto coloring = brute_force_stable_coloring(instance, k, options)) result = coloring_to_partition(*coloring);
    } else if (a.mode == "connected-nash") {
      result = brute_force_connected_nash(instance, options);
    } else {
      result = brute_force_nash(instance, options);
    }
    code = result ? kSome : kNone;
    if (result) {
      report["partition"] = partition_json(*result);
      if (!a.out.empty()) write_file(a.out, [&](std::ostream& o) { write_partition(o, *result); });
    }
  } catch (const ResourceLimitError& e) {
    report["error"] = e.what();
  }
  report["answer"] = answer_name(code);
  report["wall_ms"] = elapsed_ms(start);
  return code;
}

struct DecomposeArgs {
  std::string instance, heuristic = "min-degree", out;
};

int cmd_decompose(const DecomposeArgs& a, json& report) {
  const auto instance = load_instance(a.instance);
  report.update(instance_stats(instance));
  const auto td = heuristic_decompose(instance, parse_heuristic(a.heuristic));
  report["heuristic"] = a.heuristic;
  report["bags"] = td.bag_count();
  report["width"] = td.width();
  if (!a.out.empty()) write_file(a.out, [&](std::ostream& o) { write_decomposition(o, td, instance.vertex_count()); });
  return kSome;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash stability solvers and instance generators for additively separable hedonic games", "ashg"};
  app.require_subcommand(1);

  const std::vector<std::string> heuristics{"min-degree", "min-fill"};

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Decide (connected) Nash stability and write a stable partition");
  s->add_option("--mode", solve.mode, "nash | connected-nash | dynamics")
      ->check(CLI::IsMember({"nash", "connected-nash", "dynamics"}));
  s->add_option("-i,--instance", solve.instance, "Instance file")->required();
  s->add_option("--td", solve.td, "Tree decomposition file (default: heuristic)");
  s->add_option("--heuristic", solve.heuristic, "Elimination heuristic")->check(CLI::IsMember(heuristics));
  s->add_option("-o,--out", solve.out, "Partition output file");
  s->add_option("--max-signatures", solve.max_signatures, "Signature budget per decomposition node");
  s->add_option("--workers", solve.workers, "Worker threads for subtree-parallel DP")->check(CLI::PositiveNumber);
  s->add_option("--max-steps", solve.max_steps, "Step budget for dynamics");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check a partition for Nash stability");
  v->add_option("-i,--instance", verify.instance, "Instance file")->required();
  v->add_option("-p,--partition", verify.partition, "Partition file")->required();
  v->add_flag("--connected", verify.connected, "Also require connected coalitions");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance (and optionally a witness partition)");
  g->add_option("generator", gen.generator, "sat-hd | sat-bd | 3part | binpack | square | random")
      ->required()
      ->check(CLI::IsMember({"sat-hd", "sat-bd", "3part", "binpack", "square", "random"}));
  g->add_option("-o,--out", gen.out, "Instance output file")->required();
  g->add_option("--witness", gen.witness, "Witness partition output file (needs --certificate)");
  g->add_option("--certificate", gen.certificate,
                "Assignment literals (sat-*), 1-based item triples (3part) or 1-based bin per item (binpack)");
  g->add_option("--cnf", gen.cnf, "DIMACS CNF input (sat-*)");
  g->add_option("--delta", gen.delta, "Degree parameter, rounded up to a power of two (sat-hd)");
  g->add_option("--items", gen.items, "Integer list file (3part, binpack)");
  g->add_option("--target", gen.target, "Triple sum T (3part) or bin capacity B (binpack)");
  g->add_option("--bins", gen.bins, "Bin count k (binpack)");
  g->add_flag("--unit-weights", gen.unit_weights, "Expand arcs to weights in {-1,0,1} (binpack)");
  g->add_option("-i,--instance", gen.instance, "Input instance (square)");
  g->add_option("--n", gen.n, "Vertices (random)");
  g->add_option("--max-degree", gen.max_degree, "Degree cap (random)");
  g->add_option("--min-weight", gen.min_weight, "Smallest weight (random)");
  g->add_option("--max-weight", gen.max_weight, "Largest weight (random)");
  g->add_option("--density", gen.density, "Edge probability (random)")->check(CLI::Range(0.0, 1.0));
  g->add_option("--seed", gen.seed, "Random seed (random)");

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "Exhaustive search on small instances");
  o->add_option("-i,--instance", oracle.instance, "Instance file")->required();
  o->add_option("--mode", oracle.mode, "nash | connected-nash | coloring")
      ->check(CLI::IsMember({"nash", "connected-nash", "coloring"}));
  o->add_option("--k", oracle.k, "Color count for coloring mode (default: from a heuristic decomposition)");
  o->add_option("--max-n", oracle.max_n, "Vertex cap");
  o->add_option("-o,--out", oracle.out, "Partition output file");

  DecomposeArgs decompose;
  auto* d = app.add_subcommand("decompose", "Heuristic tree decomposition");
  d->add_option("-i,--instance", decompose.instance, "Instance file")->required();
  d->add_option("--heuristic", decompose.heuristic, "Elimination heuristic")->check(CLI::IsMember(heuristics));
  d->add_option("-o,--out", decompose.out, "Decomposition output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kInputError;
  }

  json report;
  int code = kInputError;
  try {
    if (*s) {
      report["command"] = "solve";
      code = cmd_solve(solve, report);
    } else if (*v) {
      report["command"] = "verify";
      code = cmd_verify(verify, report);
    } else if (*g) {
      report["command"] = "gen";
      code = cmd_gen(gen, report);
    } else if (*o) {
      report["command"] = "oracle";
      code = cmd_oracle(oracle, report);
    } else {
      report["command"] = "decompose";
      code = cmd_decompose(decompose, report);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  report["exit_code"] = code;
  out << report.dump(2) << '\n';
  return code;
}

}  // namespace ashg::cli
