#pragma once

// Command-line surface: solve, verify, gen, oracle, and a benchmark table.
// run_cli is a plain function over streams so tests can drive every path
// in-process; the binary under tools/ is a thin wrapper around it.
//
// Exit codes: 0 success, 1 invalid input (including a solution that fails
// `verify`), 2 infeasible instance, 3 internal verification failure — the
// last one is a bug by contract, never expected in normal operation.

#include <CLI11.hpp>
#include <json.hpp>

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "capkc/format.hpp"
#include "capkc/oracle.hpp"
#include "capkc/pipeline.hpp"

namespace capkc {

namespace detail {

inline std::string slurp(const std::string& path, std::istream& in) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(f), {});
}

inline std::string join_rats(const std::vector<Rat>& v) {
  std::string s;
  for (const Rat& r : v) {
    if (!s.empty()) s += ' ';
    s += rat_str(r);
  }
  return s;
}

inline std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (int x : v) {
    if (!s.empty()) s += ' ';
    s += std::to_string(x);
  }
  return s;
}

inline void trace_phases(std::ostream& err, const ReduceResult& rr) {
  err << "  openings by phase (augmented ids; auxiliaries start at " << rr.aug.n0 << "):\n";
  err << "    start  : " << join_rats(rr.y_start) << "\n";
  err << "    phase 1: " << join_rats(rr.y_phase1) << "\n";
  err << "    phase 2: " << join_rats(rr.y_phase2) << "\n";
  err << "    phase 3: " << join_rats(rr.y_phase3) << "\n";
  err << "  midpoints: " << join_ints(rr.clusters.midpoints)
      << "  delegates: " << join_ints(rr.clusters.delegate) << "\n";
  err << "  tree nodes: " << join_ints(rr.tree_nodes) << "\n";
  err << "  opened: " << join_ints(rr.S) << "\n";
}

// Re-runs each component's rounding to show its internal movements. The
// solvers are deterministic, so this replays exactly what `solve` did.
inline void trace_solution(std::ostream& err, const MetricInstance& inst, const Solution& sol) {
  ThresholdGraph g = variant_graph(inst, sol.variant, sol.tau_star);
  std::vector<Rat> L = rat_caps(inst);
  std::vector<Component> comps = components(g);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Component& comp = comps[i];
    err << "component " << i << " (vertices " << join_ints(comp.verts)
        << "), openings: " << sol.components[i].k_i << "\n";
    std::vector<Rat> Lc;
    for (int ov : comp.verts) Lc.push_back(L[ov]);
    if (sol.variant == Variant::Budget) {
      std::vector<Rat> Cc;
      for (int ov : comp.verts) Cc.push_back(inst.cost[ov]);
      BudgetComponentSolution bs = solve_budget_component(comp.graph, Lc, Cc);
      err << "  relaxation cost " << rat_str(bs.relax_cost) << ", opened cost "
          << rat_str(bs.open_cost) << "\n";
      trace_phases(err, bs.detail);
    } else if (sol.variant == Variant::Supplier) {
      std::vector<char> cl;
      for (int ov : comp.verts) cl.push_back(!inst.facility[ov]);
      if (sol.components[i].k_i == 0) {
        err << "  no clients; stays closed\n";
        continue;
      }
      SupplierComponentSolution ss = solve_supplier_component(comp.graph, Lc, cl,
                                                              sol.components[i].k_i);
      trace_phases(err, ss.detail);
    } else if (sol.variant == Variant::ZeroL) {
      auto lp = solve_boxed(comp.graph, Lc, sol.components[i].k_i, all_vertices(comp.graph.n),
                            all_vertices(comp.graph.n));
      require(lp.has_value(), "trace: certified opening count became infeasible");
      ZerolClusters cl = zerol_cluster(comp.graph, Lc);
      std::vector<Rat> rounded = zerol_round(comp.graph, Lc, cl, lp->y);
      err << "  relaxation: " << join_rats(lp->y) << "\n";
      err << "  midpoints: " << join_ints(cl.midpoint)
          << "  aggregation vertices: " << join_ints(cl.agg) << "\n";
      err << "  rounded: " << join_rats(rounded) << "\n";
    } else {
      ComponentSolution ps = solve_component(comp.graph, Lc, sol.components[i].k_i);
      trace_phases(err, ps.detail);
    }
  }
}

inline void print_text_summary(std::ostream& out, const Solution& sol) {
  out << "variant: " << variant_name(sol.variant) << "\n";
  out << "tau_star: " << rat_str(sol.tau_star) << "\n";
  out << "opens (" << sol.opens.size() << "): " << join_ints(sol.opens) << "\n";
  out << "metric radius: " << rat_str(sol.metric_radius) << "\n";
  out << "hop radius: " << sol.hop_radius << "\n";
  out << "ratio bound: " << sol.ratio_bound << "\n";
  if (sol.variant == Variant::Budget)
    out << "opening cost: " << rat_str(sol.total_cost) << " of budget "
        << rat_str(sol.budget_limit) << "\n";
  if (sol.variant == Variant::Supplier)
    out << "clients: " << sol.clients.size() << ", facilities: " << sol.facilities.size() << "\n";
  out << "certified: " << (sol.certified ? "yes" : "no") << "\n";
}

struct BenchRow {
  bool included = false;
  std::string line;
  Variant var = Variant::Center;
  std::optional<Rat> ratio;
};

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"certified approximation solver for capacitated k-center and variants"};
  app.require_subcommand(1);

  std::string solve_file = "-", solve_variant = "auto";
  bool flag_json = false, flag_text = false, flag_scan = false, flag_trace = false;
  bool flag_bisect_budget = false;
  CLI::App* sc_solve = app.add_subcommand("solve", "solve an instance, print the solution");
  sc_solve->add_option("file", solve_file, "CAPKC instance path, '-' for stdin");
  sc_solve->add_option("--variant", solve_variant, "auto|center|zerol|supplier|budget")
      ->capture_default_str();
  CLI::Option* oj = sc_solve->add_flag("--json", flag_json, "machine-readable JSON (default)");
  sc_solve->add_flag("--text", flag_text, "human summary instead of JSON")->excludes(oj);
  sc_solve->add_flag("--scan", flag_scan, "probe thresholds in order instead of bisecting");
  sc_solve->add_flag("--trace", flag_trace, "dump per-phase opening vectors to stderr");
  sc_solve->add_flag("--bisect-budget", flag_bisect_budget,
                     "experimental: bisect the threshold ladder for the budget variant too");

  std::string oracle_file = "-", oracle_variant = "auto";
  CLI::App* sc_oracle = app.add_subcommand("oracle", "exact optimum by exhaustive search");
  sc_oracle->add_option("file", oracle_file, "CAPKC instance path, '-' for stdin");
  sc_oracle->add_option("--variant", oracle_variant, "auto|center|zerol|supplier|budget")
      ->capture_default_str();

  std::string gen_kind, gen_c = "100", gen_out = "-";
  int gen_n = 8;
  std::uint64_t gen_seed = 1;
  std::optional<long long> gen_k;
  CLI::App* sc_gen = app.add_subcommand("gen", "generate a seeded instance");
  sc_gen->add_option("kind", gen_kind,
                     "star6|gap2x3|grid_l1|random_graph_hop|zerol_random|supplier_random|"
                     "budget_random")
      ->required();
  sc_gen->add_option("--n", gen_n, "vertex count")->capture_default_str();
  sc_gen->add_option("--k", gen_k, "override the opening allowance");
  sc_gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
  sc_gen->add_option("--C", gen_c, "inter-group distance of gap2x3")->capture_default_str();
  sc_gen->add_option("-o,--out", gen_out, "output path, '-' for stdout")->capture_default_str();

  std::string verify_inst, verify_sol;
  CLI::App* sc_verify = app.add_subcommand("verify", "re-validate a solution against an instance");
  sc_verify->add_option("instance", verify_inst, "CAPKC instance path, '-' for stdin")->required();
  sc_verify->add_option("solution", verify_sol, "solution JSON path")->required();

  std::string bench_dir;
  int bench_max_n = 10, bench_jobs = 1;
  CLI::App* sc_bench = app.add_subcommand("bench", "solve every .capkc file in a directory");
  sc_bench->add_option("--dir", bench_dir, "instance directory")->required();
  sc_bench->add_option("--max-n", bench_max_n, "skip instances above this size")
      ->capture_default_str();
  sc_bench->add_option("--jobs", bench_jobs, "worker threads")->capture_default_str();

  std::vector<const char*> argv{"capkc"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*sc_solve) {
      MetricInstance inst = parse_instance(detail::slurp(solve_file, in));
      TauSearch mode = flag_scan           ? TauSearch::Scan
                       : flag_bisect_budget ? TauSearch::Bisect
                                            : TauSearch::Default;
      Solution sol = solve(inst, variant_from_name(solve_variant), mode);
      if (flag_trace) detail::trace_solution(err, inst, sol);
      if (flag_text)
        detail::print_text_summary(out, sol);
      else
        out << solution_json(sol);
    } else if (*sc_oracle) {
      MetricInstance inst = parse_instance(detail::slurp(oracle_file, in));
      OracleResult r = exact_opt(inst, variant_from_name(oracle_variant));
      nlohmann::ordered_json j;
      j["opt_radius"] = rat_str(r.opt_radius);
      j["opens"] = r.opens;
      out << j.dump(2) << "\n";
    } else if (*sc_gen) {
      GenParams p;
      p.n = gen_n;
      auto c = parse_rat(gen_c);
      if (!c) throw std::invalid_argument("--C needs a rational value");
      p.gap = *c;
      MetricInstance inst = generate(gen_kind, p, gen_seed);
      if (gen_k) {
        inst.k = *gen_k;
        inst.validate();
      }
      std::string text = serialize_instance(inst);
      if (gen_out == "-") {
        out << text;
      } else {
        std::ofstream f(gen_out);
        if (!f) throw ParseError("cannot open '" + gen_out + "'");
        f << text;
      }
    } else if (*sc_verify) {
      MetricInstance inst = parse_instance(detail::slurp(verify_inst, in));
      Solution sol = solution_from_json(detail::slurp(verify_sol, in));
      try {
        validate_solution(inst, sol);
      } catch (const VerificationError& e) {
        err << "invalid: " << e.what() << "\n";
        return 1;
      }
      out << "valid\n";
    } else if (*sc_bench) {
      namespace fs = std::filesystem;
      if (!fs::is_directory(bench_dir)) throw ParseError("not a directory: '" + bench_dir + "'");
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(bench_dir))
        if (e.path().extension() == ".capkc") files.push_back(e.path());
      std::sort(files.begin(), files.end());

      std::vector<detail::BenchRow> rows(files.size());
      std::vector<std::exception_ptr> fails(files.size());
      auto work = [&](std::size_t i) {
        try {
          std::ifstream f(files[i]);
          if (!f) throw ParseError("cannot open '" + files[i].string() + "'");
          MetricInstance inst =
              parse_instance(std::string(std::istreambuf_iterator<char>(f), {}));
          if (inst.n > bench_max_n) return;
          Solution sol = solve(inst);
          std::optional<Rat> opt;
          try {
            opt = exact_opt(inst).opt_radius;
          } catch (const TooLargeError&) {
          }
          std::optional<Rat> ratio;
          if (opt && *opt > 0) ratio = Rat(sol.metric_radius / *opt);
          std::ostringstream line;
          line << files[i].filename().string() << "\t" << variant_name(sol.variant) << "\t"
               << rat_str(sol.tau_star) << "\t" << rat_str(sol.metric_radius) << "\t"
               << (opt ? rat_str(*opt) : "-") << "\t" << (ratio ? rat_str(*ratio) : "-") << "\t"
               << sol.ratio_bound << "\t" << (sol.certified ? "yes" : "no");
          rows[i] = {true, line.str(), sol.variant, ratio};
        } catch (...) {
          fails[i] = std::current_exception();
        }
      };
      int jobs = std::max(1, bench_jobs);
      if (jobs == 1) {
        for (std::size_t i = 0; i < files.size(); ++i) work(i);
      } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
          pool.emplace_back([&, j] {
            for (std::size_t i = (std::size_t)j; i < files.size(); i += (std::size_t)jobs)
              work(i);
          });
        for (std::thread& t : pool) t.join();
      }
      for (const std::exception_ptr& ep : fails)
        if (ep) std::rethrow_exception(ep);

      out << "file\tvariant\ttau_star\tradius\topt\tratio\tbound\tcertified\n";
      for (const detail::BenchRow& r : rows)
        if (r.included) out << r.line << "\n";
      for (Variant v : {Variant::Center, Variant::ZeroL, Variant::Supplier, Variant::Budget}) {
        std::optional<Rat> worst;
        for (const detail::BenchRow& r : rows)
          if (r.included && r.var == v && r.ratio && (!worst || *r.ratio > *worst))
            worst = *r.ratio;
        if (worst) out << "max ratio " << variant_name(v) << ": " << rat_str(*worst) << "\n";
      }
    }
    return 0;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    err << "internal verification failure: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  } catch (const TooLargeError& e) {
    err << "input too large: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace capkc
