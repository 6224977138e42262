// Command-line toolkit: compile multiagent problems to classical PDDL,
// solve them with the built-in planner, validate and decode plans, and
// generate or benchmark instances.
//
// Exit codes: 0 solved/valid, 1 invalid plan, 2 unsolvable, 3 timeout,
// 4 usage or parse error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmap/bench.hpp"
#include "cmap/codec.hpp"
#include "cmap/compile.hpp"
#include "cmap/ground.hpp"
#include "cmap/pddl_io.hpp"
#include "cmap/search.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUnsolvable = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitUsage = 4;

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

struct CompileFlags {
  std::string variant = "negsel";
  std::string bound = "inf";

  cmap::CompileOptions options() const {
    cmap::CompileOptions opts;
    opts.neg_in_select = variant == "negsel";
    if (bound == "inf") {
      opts.bound = 0;
    } else {
      int c = std::stoi(bound);
      if (c < 1) throw CLI::ValidationError("--bound", "C must be >= 1 or inf");
      opts.bound = c;
    }
    return opts;
  }
};

void add_compile_flags(CLI::App* cmd, CompileFlags& flags) {
  cmd->add_option("--variant", flags.variant, "base or negsel")
      ->check(CLI::IsMember({"base", "negsel"}))
      ->capture_default_str();
  cmd->add_option("--bound", flags.bound,
                  "joint-action size bound C, or inf")
      ->capture_default_str();
}

struct SearchFlags {
  std::string heuristic = "add";
  double timeout = 300.0;
  long long nodes = 1'000'000;

  cmap::SearchConfig config() const {
    cmap::SearchConfig cfg;
    cfg.heuristic = heuristic == "gc" ? cmap::SearchConfig::Heuristic::GoalCount
                                      : cmap::SearchConfig::Heuristic::Additive;
    cfg.timeout_s = timeout;
    cfg.node_cap = nodes;
    return cfg;
  }
};

void add_search_flags(CLI::App* cmd, SearchFlags& flags) {
  cmd->add_option("--heuristic", flags.heuristic, "gc or add")
      ->check(CLI::IsMember({"gc", "add"}))
      ->capture_default_str();
  cmd->add_option("--timeout", flags.timeout, "search timeout in seconds")
      ->capture_default_str();
  cmd->add_option("--nodes", flags.nodes, "search node cap")
      ->capture_default_str();
}

cmap::MapProblem load_map(const std::string& domain_path,
                          const std::string& problem_path) {
  cmap::DomainAst d = cmap::parse_domain(read_file(domain_path));
  cmap::ProblemAst p = cmap::parse_problem(read_file(problem_path), d);
  return cmap::ground(d, p).first;
}

int run_compile(const std::string& domain_path, const std::string& problem_path,
                const CompileFlags& flags, const std::string& out_prefix) {
  cmap::MapProblem mp = load_map(domain_path, problem_path);
  cmap::ClassicalProblem cp = cmap::compile(mp, flags.options());
  cmap::EmittedPddl emitted = cmap::emit_classical_pddl(cp);
  write_file(out_prefix + "-domain.pddl", emitted.domain);
  write_file(out_prefix + "-problem.pddl", emitted.problem);
  write_file(out_prefix + "-sidecar.json", cmap::emit_sidecar(cp));
  std::cout << "compiled " << mp.name << ": |F'| = " << cp.fluents.size()
            << ", |A'| = " << cp.actions.size() << "\n";
  std::cout << "wrote " << out_prefix << "-domain.pddl, " << out_prefix
            << "-problem.pddl, " << out_prefix << "-sidecar.json\n";
  return kExitOk;
}

int run_solve(const std::string& domain_path, const std::string& problem_path,
              const CompileFlags& cflags, const SearchFlags& sflags,
              const std::string& plan_out) {
  cmap::MapProblem mp = load_map(domain_path, problem_path);
  cmap::ClassicalProblem cp = cmap::compile(mp, cflags.options());
  cmap::SearchResult res = cmap::solve(cp, sflags.config());
  if (res.status == cmap::SearchStatus::Unsolvable) {
    std::cout << "unsolvable (reachable space exhausted, "
              << res.stats.expansions << " expansions)\n";
    return kExitUnsolvable;
  }
  if (res.status == cmap::SearchStatus::Timeout) {
    std::cout << "timeout after " << res.stats.seconds << " s ("
              << res.stats.generations << " nodes)\n";
    return kExitTimeout;
  }
  cmap::ConcurrentPlan dec = cmap::decode(res.plan, mp, cp);
  cmap::ValidationReport rep = cmap::validate_concurrent(mp, dec);
  if (!rep.valid) {
    // Pipeline self-check: never print a plan that fails validation.
    std::cerr << "internal error: decoded plan failed validation\n";
    return kExitInvalid;
  }
  std::string text = cmap::write_concurrent_plan(dec, mp);
  std::cout << "; " << dec.steps.size() << " joint steps, "
            << res.plan.size() << " classical actions, "
            << res.stats.expansions << " expansions, " << res.stats.seconds
            << " s\n"
            << text;
  if (!plan_out.empty()) write_file(plan_out, text);
  return kExitOk;
}

int run_validate(const std::string& domain_path,
                 const std::string& problem_path,
                 const std::string& plan_path, bool json) {
  cmap::MapProblem mp = load_map(domain_path, problem_path);
  cmap::ConcurrentPlan plan =
      cmap::parse_concurrent_plan(read_file(plan_path), mp);
  cmap::ValidationReport rep = cmap::validate_concurrent(mp, plan);
  std::cout << (json ? cmap::report_to_json(rep, &mp)
                     : cmap::report_to_text(rep));
  return rep.valid ? kExitOk : kExitInvalid;
}

int run_decode(const std::string& domain_path, const std::string& problem_path,
               const std::string& plan_path, const std::string& sidecar_path,
               CompileFlags cflags) {
  if (!sidecar_path.empty()) {
    nlohmann::json j = nlohmann::json::parse(read_file(sidecar_path));
    cflags.variant = j["options"]["neg_in_select"].get<bool>() ? "negsel"
                                                               : "base";
    int bound = j["options"]["bound"].get<int>();
    cflags.bound = bound > 0 ? std::to_string(bound) : "inf";
  }
  cmap::MapProblem mp = load_map(domain_path, problem_path);
  cmap::ClassicalProblem cp = cmap::compile(mp, cflags.options());
  cmap::ClassicalPlan plan =
      cmap::parse_classical_plan(read_file(plan_path), cp);
  try {
    cmap::ConcurrentPlan dec = cmap::decode(plan, mp, cp);
    std::cout << cmap::write_concurrent_plan(dec, mp);
    return kExitOk;
  } catch (const cmap::CodecError& e) {
    std::cerr << "decode failed: " << e.what() << "\n";
    return kExitInvalid;
  }
}

int run_generate(const cmap::BenchSpec& spec, const std::string& out_prefix) {
  cmap::GeneratedInstance gi = cmap::generate(spec);
  if (out_prefix.empty()) {
    std::cout << gi.domain_text << gi.problem_text;
  } else {
    write_file(out_prefix + "-domain.pddl", gi.domain_text);
    write_file(out_prefix + "-problem.pddl", gi.problem_text);
    std::cout << "wrote " << out_prefix << "-domain.pddl and " << out_prefix
              << "-problem.pddl\n";
  }
  return kExitOk;
}

cmap::BenchVariant make_variant(const std::string& name) {
  cmap::BenchVariant v;
  v.label = name;
  if (name == "naive") {
    v.naive = true;
    return v;
  }
  if (name == "base") {
    v.opts.neg_in_select = false;
    return v;
  }
  if (name == "negsel") {
    v.opts.neg_in_select = true;
    return v;
  }
  if (name.size() > 1 && name[0] == 'c') {
    v.opts.neg_in_select = true;
    v.opts.bound = std::stoi(name.substr(1));
    return v;
  }
  throw CLI::ValidationError("--variants",
                             "expected base, negsel, naive or c<N>");
}

int run_bench_cmd(const std::string& domain, int agents, unsigned seed,
                  const std::vector<std::string>& variant_names,
                  double timeout, long long nodes, int jobs,
                  const std::string& format) {
  std::vector<cmap::BenchSpec> specs;
  auto add = [&](cmap::BenchSpec s) { specs.push_back(std::move(s)); };
  if (domain == "suite" || domain == "tablemover") {
    cmap::BenchSpec s;
    s.domain = "tablemover";
    s.agents = agents > 0 ? agents : 2;
    add(s);
  }
  if (domain == "suite" || domain == "workshop") {
    cmap::BenchSpec s;
    s.domain = "workshop";
    s.agents = agents > 1 ? agents : 2;
    add(s);
  }
  if (domain == "suite" || domain == "boxpushing") {
    cmap::BenchSpec s;
    s.domain = "boxpushing";
    s.agents = agents > 0 ? agents : 2;
    s.boxes = {1, 2};
    add(s);
  }
  if (domain == "suite" || domain == "maze") {
    cmap::BenchSpec s;
    s.domain = "maze";
    s.agents = agents > 0 ? agents : 2;
    s.grid_w = 3;
    s.grid_h = 2;
    s.seed = seed;
    add(s);
  }
  if (domain == "maze-scaling") {
    cmap::BenchSpec s;
    s.domain = "maze-scaling";
    s.agents = agents > 1 ? agents : 2;
    add(s);
  }
  if (specs.empty())
    throw CLI::ValidationError("--domain", "unknown benchmark domain");

  std::vector<cmap::BenchVariant> variants;
  for (const auto& n : variant_names) variants.push_back(make_variant(n));
  cmap::BenchReport report =
      cmap::run_bench(specs, variants, timeout, nodes, jobs);
  std::cout << (format == "csv" ? cmap::bench_to_csv(report)
                                : cmap::bench_to_text(report));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concurrent multiagent planning toolkit"};
  app.require_subcommand(1);

  std::string domain_path, problem_path, plan_path, sidecar_path;
  std::string out_prefix, plan_out, format = "text";
  bool json_report = false;
  CompileFlags cflags;
  SearchFlags sflags;

  auto* c_compile = app.add_subcommand(
      "compile", "Compile MA-PDDL to classical PDDL plus a sidecar");
  c_compile->add_option("domain", domain_path, "MA-PDDL domain file")
      ->required();
  c_compile->add_option("problem", problem_path, "MA-PDDL problem file")
      ->required();
  c_compile->add_option("-o,--out", out_prefix, "output file prefix")
      ->default_val("compiled");
  add_compile_flags(c_compile, cflags);

  auto* c_solve = app.add_subcommand(
      "solve", "Compile, search, decode and validate a concurrent plan");
  c_solve->add_option("domain", domain_path, "MA-PDDL domain file")
      ->required();
  c_solve->add_option("problem", problem_path, "MA-PDDL problem file")
      ->required();
  c_solve->add_option("--plan-out", plan_out, "write the plan to this file");
  add_compile_flags(c_solve, cflags);
  add_search_flags(c_solve, sflags);

  auto* c_validate = app.add_subcommand(
      "validate", "Validate a concurrent plan against a MA-PDDL problem");
  c_validate->add_option("domain", domain_path, "MA-PDDL domain file")
      ->required();
  c_validate->add_option("problem", problem_path, "MA-PDDL problem file")
      ->required();
  c_validate->add_option("plan", plan_path, "concurrent plan file")
      ->required();
  c_validate->add_flag("--json", json_report, "emit a JSON report");

  auto* c_decode = app.add_subcommand(
      "decode", "Decode a classical plan into a concurrent plan");
  c_decode->add_option("domain", domain_path, "MA-PDDL domain file")
      ->required();
  c_decode->add_option("problem", problem_path, "MA-PDDL problem file")
      ->required();
  c_decode->add_option("plan", plan_path, "classical plan file")->required();
  c_decode->add_option("--sidecar", sidecar_path,
                       "sidecar JSON from `compile` (overrides flags)");
  add_compile_flags(c_decode, cflags);

  cmap::BenchSpec gspec;
  auto* c_generate =
      app.add_subcommand("generate", "Generate a benchmark instance");
  c_generate->add_option("--domain", gspec.domain,
                         "maze, tablemover, workshop, boxpushing, maze-scaling")
      ->required();
  c_generate->add_option("--agents", gspec.agents)->capture_default_str();
  c_generate->add_option("--rooms", gspec.rooms)->capture_default_str();
  c_generate->add_option("--blocks", gspec.blocks)->capture_default_str();
  c_generate->add_option("--grid-w", gspec.grid_w)->capture_default_str();
  c_generate->add_option("--grid-h", gspec.grid_h)->capture_default_str();
  c_generate->add_option("--doors", gspec.doors)->capture_default_str();
  c_generate->add_option("--pallets", gspec.pallets)->capture_default_str();
  c_generate->add_option("--locations", gspec.locations)
      ->capture_default_str();
  c_generate->add_option("--boxes", gspec.boxes, "box sizes, e.g. 1 2 3");
  c_generate->add_option("--seed", gspec.seed)->capture_default_str();
  c_generate->add_option("-o,--out", out_prefix, "output file prefix");

  std::string bench_domain = "suite";
  int bench_agents = 0;
  unsigned bench_seed = 1;
  int jobs = 1;
  std::vector<std::string> variant_names = {"negsel", "c2", "c4"};
  auto* c_bench = app.add_subcommand("bench", "Run a benchmark matrix");
  c_bench->add_option("--domain", bench_domain,
                      "suite or a single domain name")
      ->capture_default_str();
  c_bench->add_option("--agents", bench_agents, "override agent count");
  c_bench->add_option("--seed", bench_seed)->capture_default_str();
  c_bench->add_option("--variants", variant_names,
                      "base, negsel, naive, c<N>")
      ->capture_default_str();
  c_bench->add_option("--timeout", sflags.timeout)->capture_default_str();
  c_bench->add_option("--nodes", sflags.nodes)->capture_default_str();
  c_bench->add_option("--jobs", jobs, "parallel bench workers")
      ->capture_default_str();
  c_bench->add_option("--format", format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_compile->parsed())
      return run_compile(domain_path, problem_path, cflags, out_prefix);
    if (c_solve->parsed())
      return run_solve(domain_path, problem_path, cflags, sflags, plan_out);
    if (c_validate->parsed())
      return run_validate(domain_path, problem_path, plan_path, json_report);
    if (c_decode->parsed())
      return run_decode(domain_path, problem_path, plan_path, sidecar_path,
                        cflags);
    if (c_generate->parsed()) return run_generate(gspec, out_prefix);
    if (c_bench->parsed())
      return run_bench_cmd(bench_domain, bench_agents, bench_seed,
                           variant_names, sflags.timeout, sflags.nodes, jobs,
                           format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
