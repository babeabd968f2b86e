#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smc/bench.hpp"
#include "smc/certify.hpp"
#include "smc/cnf.hpp"
#include "smc/engines_base.hpp"
#include "smc/kavy.hpp"
#include "smc/pdr.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct EngineChoice {
  std::string name = "kavy";
};

smc::CheckResult run_engine(const std::string& engine,
                            const smc::TransitionSystem& ts,
                            const smc::EngineOptions& opts) {
  if (engine == "kavy") return smc::kavy_engine(ts, opts);
  if (engine == "vanilla") return smc::vanilla_engine(ts, opts);
  if (engine == "pdr") return smc::pdr_engine(ts, opts);
  if (engine == "kind") return smc::kind(ts, opts.max_frames);
  if (engine == "bmc") return smc::bmc(ts, opts.max_frames);
  throw CLI::ValidationError("--engine", "unknown engine " + engine);
}

std::string witness_text(const smc::Witness& w) {
  std::ostringstream os;
  os << "1\n";
  for (const auto& line : w.inputs) {
    for (bool b : line) os << (b ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

void write_stats_csv(const std::string& path, const std::string& instance,
                     const std::string& engine, const smc::CheckResult& r) {
  std::ofstream out(path);
  out << "# smc-stats v1\n";
  out << "instance,engine,iteration,frames,sel_i,sel_k,sat_queries,"
         "learned_clauses,time_ms\n";
  for (const auto& row : r.stats.per_iteration)
    out << instance << ',' << engine << ',' << row.iteration << ','
        << row.frames << ',' << row.sel.i << ',' << row.sel.k << ','
        << row.sat_queries << ',' << row.learned_clauses << ',' << row.time_ms
        << "\n";
  out << instance << ',' << engine << ",total," << r.stats.frames << ",,,"
      << r.stats.sat_queries << ',' << r.stats.learned_clauses << ','
      << r.stats.time_ms << "\n";
}

int cmd_check(const std::string& path, const std::string& engine,
              const smc::EngineOptions& opts, bool certify, bool witness,
              const std::string& stats_csv, const std::string& invariant_out) {
  smc::TransitionSystem ts = smc::parse_aiger(read_file(path));
  smc::CheckResult r = run_engine(engine, ts, opts);

  switch (r.verdict) {
    case smc::Verdict::safe:
      std::cout << "0\n";
      break;
    case smc::Verdict::unsafe:
      std::cout << "1\n";
      break;
    case smc::Verdict::unknown:
      std::cout << "2\n";
      break;
  }
  if (witness && r.witness) {
    for (const auto& line : r.witness->inputs) {
      for (bool b : line) std::cout << (b ? '1' : '0');
      std::cout << "\n";
    }
  }
  if (certify) {
    if (r.verdict == smc::Verdict::safe) {
      if (!r.invariant) {
        if (engine == "kind" || engine == "bmc") {
          std::cerr << "certificate: engine '" << engine
                    << "' emits no CNF invariant\n";
        } else {
          std::cerr << "certificate missing\n";
          return 1;
        }
      } else {
        std::string diag;
        if (!smc::check_invariant(*r.invariant, ts, nullptr, &diag)) {
          std::cerr << "certificate check FAILED: " << diag << "\n";
          return 1;
        }
        std::cerr << "certificate OK: " << r.invariant->size() << " clauses\n";
        std::string out_path =
            invariant_out.empty() ? path + ".inv" : invariant_out;
        write_file(out_path,
                   smc::invariant_to_text(*r.invariant, ts.num_latches()));
      }
    } else if (r.verdict == smc::Verdict::unsafe) {
      std::string diag;
      if (!r.witness || !smc::check_witness(*r.witness, ts, &diag)) {
        std::cerr << "witness check FAILED: " << diag << "\n";
        return 1;
      }
      std::cerr << "witness OK: depth " << r.witness->depth() << "\n";
    }
  }
  if (!stats_csv.empty()) write_stats_csv(stats_csv, path, engine, r);
  return r.verdict == smc::Verdict::unknown ? 2 : 0;
}

struct FamilySpec {
  std::string family = "shift";
  int min_param = 2, max_param = 8;
  int count = 20;
  uint64_t seed = 1;
  int latches = 5, gates = 20, inputs = 2;
  int width = 8;
  uint64_t reset_at = 64, bad = 66;
};

std::vector<std::pair<std::string, smc::TransitionSystem>> make_family(
    const FamilySpec& f) {
  std::vector<std::pair<std::string, smc::TransitionSystem>> out;
  if (f.family == "shift") {
    for (int w = f.min_param; w <= f.max_param; ++w)
      out.emplace_back("shift_w" + std::to_string(w), smc::gen_shift(w));
  } else if (f.family == "counter") {
    for (int w = f.min_param; w <= f.max_param; ++w) {
      uint64_t reset = (uint64_t{1} << w) / 2;
      out.emplace_back("counter_w" + std::to_string(w),
                       smc::gen_counter(w, reset, reset + 2));
    }
  } else if (f.family == "random") {
    for (int i = 0; i < f.count; ++i) {
      uint64_t s = f.seed + static_cast<uint64_t>(i);
      out.emplace_back("random_s" + std::to_string(s),
                       smc::gen_random_aig(s, f.latches, f.gates, f.inputs));
    }
  } else {
    throw CLI::ValidationError("--family", "unknown family " + f.family);
  }
  return out;
}

int cmd_bench(const FamilySpec& f, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream manifest(fs::path(out_dir) / "manifest.csv");
  manifest << "name,file,latches,inputs,gates\n";
  for (auto& [name, ts] : make_family(f)) {
    std::string file = name + ".aag";
    write_file((fs::path(out_dir) / file).string(), smc::to_aiger_ascii(ts));
    manifest << name << ',' << file << ',' << ts.num_latches() << ','
             << ts.num_inputs() << ',' << ts.num_gates() << "\n";
  }
  return 0;
}

int cmd_experiment(const FamilySpec& f, const std::string& engines_csv,
                   const std::string& out_csv, bool oracle_check,
                   const smc::EngineOptions& opts) {
  std::vector<std::string> engines;
  {
    std::stringstream ss(engines_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) engines.push_back(item);
  }
  if (engines.empty())
    throw CLI::ValidationError("--engines", "empty engine list");

  std::ofstream out(out_csv);
  out << "# smc-experiment v1\n";
  out << "instance,engine,verdict,frames,converged_k,sel_i,sel_k,sat_queries,"
         "learned_clauses,time_ms,oracle\n";
  int mismatches = 0;
  for (auto& [name, ts] : make_family(f)) {
    std::string oracle = "-";
    std::optional<smc::OracleResult> orc;
    if (oracle_check) {
      try {
        orc = smc::bfs_reachable(ts);
        oracle = orc->safe ? "safe" : "unsafe@" + std::to_string(orc->shortest_cex);
      } catch (const std::exception&) {
        oracle = "skipped";
      }
    }
    for (const std::string& engine : engines) {
      smc::CheckResult r = run_engine(engine, ts, opts);
      const char* v = r.verdict == smc::Verdict::safe     ? "safe"
                      : r.verdict == smc::Verdict::unsafe ? "unsafe"
                                                          : "unknown";
      smc::Sel last{};
      if (!r.stats.per_iteration.empty())
        last = r.stats.per_iteration.back().sel;
      out << name << ',' << engine << ',' << v << ',' << r.stats.frames << ','
          << r.stats.converged_k << ',' << last.i << ',' << last.k << ','
          << r.stats.sat_queries << ',' << r.stats.learned_clauses << ','
          << r.stats.time_ms << ',' << oracle << "\n";
      if (orc && r.verdict != smc::Verdict::unknown) {
        bool engine_safe = r.verdict == smc::Verdict::safe;
        if (engine_safe != orc->safe) {
          ++mismatches;
          std::cerr << "verdict mismatch on " << name << " with " << engine
                    << "\n";
        }
      }
    }
  }
  return mismatches == 0 ? 0 : 1;
}

int cmd_dump(const std::string& path, int depth, const std::string& out_path) {
  smc::TransitionSystem ts = smc::parse_aiger(read_file(path));
  smc::sat::Solver solver;
  smc::VarMap map(solver);
  smc::CnfFormula all = smc::encode_init(ts, 0, map);
  for (int t = 0; t < depth; ++t) all.append(smc::encode_tr(ts, t, map));
  smc::MaybeLit bad = smc::encode_bad(ts, depth, map, all);
  if (!bad.is_const) all.add({bad.lit});
  std::ostringstream os;
  smc::dump_dimacs(all, map, solver.num_vars(), os);
  if (out_path.empty())
    std::cout << os.str();
  else
    write_file(out_path, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAT-based safety model checker for AIGER circuits"};
  app.require_subcommand(1);

  std::string engine = "kavy";
  std::string sel = "topdown";
  bool no_indgen = false, certify = false, witness = false;
  bool no_validate_itp = false, debug_checks = false;
  int max_frames = 1 << 20;
  uint64_t seed = 0;
  int64_t conflict_budget = -1;
  double timeout_ms = 0;
  std::string stats_csv, invariant_out, file, debug_dump_dir;

  auto add_engine_opts = [&](CLI::App* c) {
    c->add_option("--engine", engine, "kavy|vanilla|pdr|kind|bmc");
    c->add_option("--sel", sel, "topdown|bottomup");
    c->add_flag("--no-indgen", no_indgen, "disable inductive generalization");
    c->add_option("--max-frames", max_frames, "frame/depth/k bound");
    c->add_option("--seed", seed, "rng seed");
    c->add_flag("--no-validate-itp", no_validate_itp,
                "skip interpolant validation");
    c->add_flag("--debug-checks", debug_checks,
                "SAT-check algorithm invariants while running");
    c->add_option("--conflict-budget", conflict_budget,
                  "per-call solver conflict limit (-1 = off)");
    c->add_option("--timeout-ms", timeout_ms,
                  "wall-clock bound checked between iterations");
    c->add_option("--debug-dump-dir", debug_dump_dir,
                  "write per-extension proof and interpolant dumps");
  };
  auto engine_options = [&]() {
    smc::EngineOptions o;
    o.max_frames = max_frames;
    o.sel = sel == "bottomup" ? smc::SelStrategy::bottomup
                              : smc::SelStrategy::topdown;
    o.indgen = !no_indgen;
    o.validate_interpolants = !no_validate_itp;
    o.debug_checks = debug_checks;
    o.seed = seed;
    o.conflict_budget = conflict_budget;
    o.wall_ms = timeout_ms;
    o.debug_dump_dir = debug_dump_dir;
    return o;
  };

  CLI::App* check = app.add_subcommand("check", "decide safety of a circuit");
  check->add_option("file", file, "AIGER file")->required();
  add_engine_opts(check);
  check->add_flag("--certify", certify, "validate the certificate");
  check->add_flag("--witness", witness, "print the stimulus on unsafe");
  check->add_option("--stats-csv", stats_csv, "per-iteration statistics");
  check->add_option("--invariant-out", invariant_out, "invariant file path");

  FamilySpec fam;
  std::string out_dir = "bench_out", engines_csv = "kavy,vanilla,pdr,kind,bmc";
  std::string out_csv = "experiment.csv";
  bool oracle_check = false;

  auto add_family_opts = [&](CLI::App* c) {
    c->add_option("--family", fam.family, "counter|shift|random");
    c->add_option("--min", fam.min_param, "least family parameter");
    c->add_option("--max", fam.max_param, "greatest family parameter");
    c->add_option("--count", fam.count, "random instances");
    c->add_option("--seed", fam.seed, "random family seed");
    c->add_option("--latches", fam.latches, "random family latches");
    c->add_option("--gates", fam.gates, "random family gates");
    c->add_option("--inputs", fam.inputs, "random family inputs");
  };

  CLI::App* bench = app.add_subcommand("bench", "write a benchmark family");
  add_family_opts(bench);
  bench->add_option("--out", out_dir, "output directory");

  CLI::App* exp = app.add_subcommand("experiment", "sweep a family");
  add_family_opts(exp);
  exp->add_option("--engines", engines_csv, "comma-separated engines");
  exp->add_option("--out", out_csv, "result csv");
  exp->add_flag("--oracle-check", oracle_check, "cross-check with bfs");
  exp->add_option("--max-frames", max_frames, "frame/depth/k bound");
  exp->add_option("--timeout-ms", timeout_ms,
                  "per-row wall-clock bound, row recorded as unknown");

  std::string dump_out;
  int dump_depth = 0;
  CLI::App* dump = app.add_subcommand("dump", "DIMACS of a BMC unrolling");
  dump->add_option("file", file, "AIGER file")->required();
  dump->add_option("--depth", dump_depth, "unrolling depth");
  dump->add_option("--out", dump_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(file, engine, engine_options(), certify, witness,
                       stats_csv, invariant_out);
    if (bench->parsed()) return cmd_bench(fam, out_dir);
    if (exp->parsed())
      return cmd_experiment(fam, engines_csv, out_csv, oracle_check,
                            engine_options());
    if (dump->parsed()) return cmd_dump(file, dump_depth, dump_out);
  } catch (const smc::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
