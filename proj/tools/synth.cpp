// synth: type-directed local program search, PBE and policy-imitation drivers.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "synth/dsl.hpp"
#include "synth/enumerate.hpp"
#include "synth/eval.hpp"
#include "synth/imitate.hpp"
#include "synth/mlp.hpp"
#include "synth/neighborhood.hpp"
#include "synth/pbe.hpp"
#include "synth/pendulum.hpp"
#include "synth/term.hpp"
#include "synth/typecheck.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace synth;

namespace {

constexpr const char* kVersion = "synth 0.1.0";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int default_jobs() {
  if (const char* env = std::getenv("SYNTH_JOBS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

void require_file(const std::string& path, const char* flag) {
  if (!fs::exists(path)) {
    throw CLI::ValidationError(flag, "file does not exist: " + path);
  }
}

DepthMetric parse_metric(const std::string& name) {
  if (name == "tree") return DepthMetric::Tree;
  if (name == "insertions") return DepthMetric::Insertions;
  throw CLI::ValidationError("--metric", "must be 'tree' or 'insertions'");
}

const char* metric_name(DepthMetric m) {
  return m == DepthMetric::Tree ? "tree" : "insertions";
}

struct OracleSpec {
  std::string raw;
  TermPtr program;  // program-backed
  MlpPolicy mlp;    // network-backed
  bool is_program = false;
};

// --oracle program:<file.sexp> | mlp:<weights.json> | expert (built-in fixture)
OracleSpec load_oracle(const std::string& spec, const Dsl& dsl, int input_arity) {
  OracleSpec out;
  out.raw = spec;
  if (spec == "expert") {
    out.is_program = true;
    out.program = expert_program(dsl);
    return out;
  }
  if (spec.rfind("program:", 0) == 0) {
    std::string path = spec.substr(8);
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--oracle", "cannot open program file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    out.is_program = true;
    out.program = parse_program(ss.str(), dsl, input_arity);
    return out;
  }
  if (spec.rfind("mlp:", 0) == 0) {
    out.mlp = load_mlp(spec.substr(4));
    return out;
  }
  throw CLI::ValidationError("--oracle",
                             "expected 'program:<file>', 'mlp:<file>', or 'expert'");
}

Oracle make_oracle(const OracleSpec& spec, const Dsl& dsl) {
  if (spec.is_program) return make_term_oracle(spec.program, dsl);
  return make_mlp_oracle(spec.mlp);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config) {
  json m;
  m["tool"] = kVersion;
  m["command"] = command;
  m["config"] = config;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

std::string trace_csv(const SearchTrace& trace) {
  std::ostringstream os;
  os << "iter,loss,evaluated,tokens,program\n";
  for (const auto& it : trace.iterations) {
    os << it.iter << "," << fmt_double(it.loss) << "," << it.evaluated << ","
       << (it.best ? token_count(it.best) : 0) << ","
       << (it.best ? print_program(it.best) : "") << "\n";
  }
  return os.str();
}

// ---- subcommands ----

int cmd_enumerate(const std::string& dsl_path, const std::string& type_str, int depth,
                  int inputs, bool count_only, const std::string& metric_str) {
  require_file(dsl_path, "--dsl");
  Dsl dsl = Dsl::load_file(dsl_path);
  TypeRef target = parse_type(type_str);
  std::vector<TypeRef> input_types(inputs, type_float());
  DepthMetric metric = parse_metric(metric_str);
  if (count_only) {
    std::cout << count_programs(dsl, target, depth, input_types, metric) << "\n";
  } else {
    for_each_program(dsl, target, depth, input_types, metric, [](const TermPtr& t) {
      std::cout << print_program(t) << "\n";
      return true;
    });
  }
  return 0;
}

int cmd_search(const std::string& dsl_path, const std::string& data_path, int depth,
               int edits, int iters, const std::string& init_path,
               const std::string& trace_path, const std::string& loss_str,
               const std::string& metric_str, int jobs, bool dedup,
               std::uint64_t seed) {
  require_file(dsl_path, "--dsl");
  require_file(data_path, "--data");
  Dsl dsl = Dsl::load_file(dsl_path);
  Dataset data = load_dataset_csv(data_path);

  SearchConfig cfg;
  cfg.depth = depth;
  cfg.max_edits = edits;
  cfg.max_iterations = iters;
  cfg.loss = loss_str == "abs" ? LossKind::PbeAbs : LossKind::ImitationMse;
  cfg.metric = parse_metric(metric_str);
  cfg.jobs = jobs;
  cfg.dedup_signatures = dedup;
  cfg.probe_seed = seed;

  TermPtr init;
  if (!init_path.empty()) {
    std::ifstream in(init_path);
    if (!in) throw CLI::ValidationError("--init", "cannot open program file: " + init_path);
    std::stringstream ss;
    ss << in.rdbuf();
    init = parse_program(ss.str(), dsl, data.arity());
  }

  SearchTrace trace = iterate_search(dsl, init, data, cfg);

  if (!trace_path.empty()) {
    fs::path tp(trace_path);
    write_text(tp, trace_csv(trace));
    json config = {{"dsl", dsl_path},     {"data", data_path},
                   {"depth", depth},      {"edits", edits},
                   {"iters", iters},      {"init", init_path},
                   {"trace", trace_path}, {"loss", loss_str},
                   {"metric", metric_str}, {"jobs", jobs},
                   {"dedup", dedup},      {"seed", seed}};
    write_manifest(tp.has_parent_path() ? tp.parent_path() : fs::path("."), "search",
                   config);
  }
  const auto& last = trace.back();
  std::cout << "best " << print_program(last.best) << "\n";
  std::cout << "loss " << fmt_double(last.loss) << " evaluated "
            << trace.total_evaluated() << " iterations " << trace.iterations.size()
            << "\n";
  return 0;
}

int cmd_pbe(const std::string& config_path, const std::string& out_dir) {
  require_file(config_path, "--config");
  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
  json jc = json::parse(in);

  Dsl dsl = jc.contains("dsl") ? Dsl::load_file(jc["dsl"].get<std::string>()) : pbe_dsl();

  PbeConfig cfg;
  cfg.num_programs = jc.value("num_programs", 100);
  cfg.num_inputs = jc.value("num_inputs", 10);
  cfg.input_arity = jc.value("input_arity", 3);
  cfg.min_tokens = jc.value("min_tokens", 8);
  cfg.reject_depth = jc.value("reject_depth", 4);
  cfg.equivalence_probes = jc.value("equivalence_probes", 16);
  if (jc.contains("input_range")) {
    cfg.input_lo = jc["input_range"][0].get<double>();
    cfg.input_hi = jc["input_range"][1].get<double>();
  }
  cfg.input_weight = jc.value("input_weight", 3.0);
  cfg.sample_depth = jc.value("sample_depth", 5);
  cfg.resample_budget = jc.value("resample_budget", 2000);
  cfg.seed = jc.value("seed", 0);
  cfg.metric = parse_metric(jc.value("metric", "insertions"));

  SearchConfig search;
  if (jc.contains("search")) {
    const json& js = jc["search"];
    search.depth = js.value("depth", 4);
    search.max_edits = js.value("edits", 1);
    search.max_iterations = js.value("iters", 10);
    search.jobs = js.value("jobs", default_jobs());
  }
  search.loss = LossKind::PbeAbs;
  search.metric = cfg.metric;

  PbeReport report = run_pbe(dsl, cfg, search);

  fs::path dir(out_dir);
  fs::create_directories(dir);
  {
    std::ostringstream os;
    os << "program_id,iter,evaluated,norm_error\n";
    for (const auto& s : report.series) {
      for (std::size_t i = 0; i < s.iter.size(); ++i) {
        os << s.program_id << "," << s.iter[i] << "," << s.evaluated[i] << ","
           << fmt_double(s.norm_error[i]) << "\n";
      }
    }
    write_text(dir / "series.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "iter,mean,median,stddev\n";
    for (std::size_t i = 0; i < report.mean.size(); ++i) {
      os << i << "," << fmt_double(report.mean[i]) << "," << fmt_double(report.median[i])
         << "," << fmt_double(report.stddev[i]) << "\n";
    }
    write_text(dir / "summary.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "program_id,tokens,program\n";
    for (const auto& s : report.series) {
      os << s.program_id << "," << token_count(s.ground_truth) << ","
         << print_program(s.ground_truth) << "\n";
    }
    write_text(dir / "ground_truth.csv", os.str());
  }
  jc["resolved_jobs"] = search.jobs;
  write_manifest(dir, "pbe", jc);

  int exact = 0;
  for (const auto& s : report.series) {
    if (!s.error.empty() && s.error.back() <= 1e-9) exact++;
  }
  std::cout << "programs " << report.series.size() << " exact_fits " << exact << "\n";
  return 0;
}

int cmd_imitate(const std::string& oracle_spec, const std::string& dsl_path, int n_expert,
                int m_policy, int rounds, int depth, int round_iters,
                const std::string& aggregate, const std::string& metric_str,
                std::uint64_t seed, int jobs, const std::string& out_dir) {
  if (!dsl_path.empty()) require_file(dsl_path, "--dsl");
  Dsl dsl = dsl_path.empty() ? pendulum_dsl() : Dsl::load_file(dsl_path);
  OracleSpec ospec = load_oracle(oracle_spec, dsl, 3);
  Oracle oracle = make_oracle(ospec, dsl);

  ImitationConfig cfg;
  cfg.expert_trajectories = n_expert;
  cfg.policy_trajectories = m_policy;
  cfg.rounds = rounds;
  cfg.aggregate = aggregate == "initial" ? ImitationConfig::Aggregate::Initial
                                         : ImitationConfig::Aggregate::Full;
  cfg.seed = seed;
  cfg.search.depth = depth;
  cfg.search.max_iterations = round_iters;
  cfg.search.metric = parse_metric(metric_str);
  cfg.search.jobs = jobs;

  ImitationResult result = run_imitation(oracle, dsl, cfg);

  fs::path dir(out_dir);
  fs::create_directories(dir);
  {
    std::ostringstream os;
    os << "round,iter,loss,evaluated,tokens,program\n";
    for (const auto& r : result.rounds) {
      for (const auto& it : r.search.iterations) {
        os << r.round << "," << it.iter << "," << fmt_double(it.loss) << ","
           << it.evaluated << "," << (it.best ? token_count(it.best) : 0) << ","
           << (it.best ? print_program(it.best) : "") << "\n";
      }
    }
    write_text(dir / "trace.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "round,mean,max,min\n";
    for (const auto& r : result.rounds) {
      os << r.round << "," << fmt_double(r.stats.mean_return) << ","
         << fmt_double(r.stats.max_return) << "," << fmt_double(r.stats.min_return)
         << "\n";
    }
    write_text(dir / "rewards.csv", os.str());
  }
  for (const auto& r : result.rounds) {
    write_text(dir / ("policy_" + std::to_string(r.round) + ".sexp"),
               print_program(r.policy) + "\n");
  }
  json config = {{"oracle", oracle_spec}, {"dsl", dsl_path},   {"N", n_expert},
                 {"M", m_policy},         {"rounds", rounds},  {"depth", depth},
                 {"round_iters", round_iters},                 {"aggregate", aggregate},
                 {"metric", metric_str},  {"seed", seed},      {"jobs", jobs}};
  write_manifest(dir, "imitate", config);

  const auto& last = result.rounds.back();
  std::cout << "final round " << last.round << " loss " << fmt_double(last.loss)
            << " mean_return " << fmt_double(last.stats.mean_return) << " balanced "
            << last.stats.balanced << "/" << last.stats.rollouts << "\n";
  return 0;
}

int cmd_eval_policy(const std::string& oracle_spec, const std::string& dsl_path,
                    int rollouts, std::uint64_t seed, int jobs,
                    const std::string& out_path) {
  if (!dsl_path.empty()) require_file(dsl_path, "--dsl");
  Dsl dsl = dsl_path.empty() ? pendulum_dsl() : Dsl::load_file(dsl_path);
  OracleSpec ospec = load_oracle(oracle_spec, dsl, 3);
  Oracle oracle = make_oracle(ospec, dsl);

  PolicyStats stats = evaluate_policy(oracle, rollouts, seed, PendulumParams{}, jobs);

  json out;
  out["mean"] = stats.mean_return;
  out["max"] = stats.max_return;
  out["min"] = stats.min_return;
  out["balanced"] = stats.balanced;
  out["rollouts"] = stats.rollouts;
  fs::path path(out_path);
  write_text(path, out.dump(2) + "\n");
  json config = {{"oracle", oracle_spec}, {"dsl", dsl_path},
                 {"rollouts", rollouts},  {"seed", seed},
                 {"jobs", jobs},          {"out", out_path}};
  write_manifest(path.has_parent_path() ? path.parent_path() : fs::path("."),
                 "eval-policy", config);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_heatmap(const std::string& oracle_spec, const std::string& dsl_path,
                const std::string& grid, const std::string& out_path) {
  if (!dsl_path.empty()) require_file(dsl_path, "--dsl");
  Dsl dsl = dsl_path.empty() ? pendulum_dsl() : Dsl::load_file(dsl_path);
  OracleSpec ospec = load_oracle(oracle_spec, dsl, 3);
  Oracle oracle = make_oracle(ospec, dsl);

  int rows = 0, cols = 0;
  if (std::sscanf(grid.c_str(), "%dx%d", &rows, &cols) != 2 || rows < 1 || cols < 1) {
    throw CLI::ValidationError("--grid", "expected <rows>x<cols>, e.g. 101x101");
  }
  auto cells = heatmap(oracle, rows, cols);
  std::ostringstream os;
  os << "theta,theta_dot,action\n";
  for (const auto& c : cells) {
    os << fmt_double(c.theta) << "," << fmt_double(c.theta_dot) << ","
       << fmt_double(c.action) << "\n";
  }
  fs::path path(out_path);
  write_text(path, os.str());
  json config = {{"oracle", oracle_spec}, {"dsl", dsl_path}, {"grid", grid},
                 {"out", out_path}};
  write_manifest(path.has_parent_path() ? path.parent_path() : fs::path("."), "heatmap",
                 config);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typed-neighborhood program synthesis engine"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate well-typed programs");
  std::string en_dsl, en_type = "Float", en_metric = "tree";
  int en_depth = 3, en_inputs = 0;
  bool en_count = false;
  enumerate->add_option("--dsl", en_dsl, "DSL JSON file")->required();
  enumerate->add_option("--type", en_type, "target type");
  enumerate->add_option("--depth", en_depth, "depth bound d");
  enumerate->add_option("--inputs", en_inputs, "number of Float input variables");
  enumerate->add_flag("--count-only", en_count, "print only the count");
  enumerate->add_option("--metric", en_metric, "depth metric: tree|insertions");

  // search
  auto* search = app.add_subcommand("search", "Iterated local search on a dataset");
  std::string se_dsl, se_data, se_init, se_trace, se_loss = "mse", se_metric = "tree";
  int se_depth = 4, se_edits = 1, se_iters = 20, se_jobs = default_jobs();
  bool se_dedup = false;
  std::uint64_t se_seed = 0;
  search->add_option("--dsl", se_dsl, "DSL JSON file")->required();
  search->add_option("--data", se_data, "dataset CSV (x1..xN,action)")->required();
  search->add_option("--depth", se_depth, "depth bound d");
  search->add_option("--edits", se_edits, "max simultaneous edits n");
  search->add_option("--iters", se_iters, "max iterations");
  search->add_option("--init", se_init, "initial program file (.sexp)");
  search->add_option("--trace", se_trace, "trace CSV output path");
  search->add_option("--loss", se_loss, "loss: mse|abs");
  search->add_option("--metric", se_metric, "depth metric: tree|insertions");
  search->add_option("--jobs", se_jobs, "worker threads");
  search->add_flag("--dedup", se_dedup, "deduplicate candidates by observational signature");
  search->add_option("--seed", se_seed, "probe seed (used with --dedup)");

  // pbe
  auto* pbe = app.add_subcommand("pbe", "Programming-by-example experiment");
  std::string pb_config, pb_out = "report";
  pbe->add_option("--config", pb_config, "PBE config JSON")->required();
  pbe->add_option("--out", pb_out, "output directory");

  // imitate
  auto* imitate = app.add_subcommand("imitate", "Iterative policy imitation");
  std::string im_oracle, im_dsl, im_aggregate = "full", im_metric = "insertions",
              im_out = "run";
  int im_n = 5, im_m = 2, im_rounds = 10, im_depth = 4, im_round_iters = 1,
      im_jobs = default_jobs();
  std::uint64_t im_seed = 0;
  imitate->add_option("--oracle", im_oracle, "program:<file>|mlp:<file>|expert")
      ->required();
  imitate->add_option("--dsl", im_dsl, "DSL JSON (default: built-in pendulum DSL)");
  imitate->add_option("--N", im_n, "expert trajectories");
  imitate->add_option("--M", im_m, "policy trajectories per round");
  imitate->add_option("--rounds", im_rounds, "aggregation rounds K");
  imitate->add_option("--depth", im_depth, "search depth d");
  imitate->add_option("--round-iters", im_round_iters, "search iterations per round");
  imitate->add_option("--aggregate", im_aggregate, "full|initial");
  imitate->add_option("--metric", im_metric, "depth metric: tree|insertions");
  imitate->add_option("--seed", im_seed, "run seed")->required();
  imitate->add_option("--jobs", im_jobs, "worker threads");
  imitate->add_option("--out", im_out, "output directory");

  // eval-policy
  auto* evalp = app.add_subcommand("eval-policy", "Evaluate a pendulum policy");
  std::string ev_oracle, ev_dsl, ev_out = "stats.json";
  int ev_rollouts = 100, ev_jobs = default_jobs();
  std::uint64_t ev_seed = 0;
  evalp->add_option("--oracle", ev_oracle, "program:<file>|mlp:<file>|expert")
      ->required();
  evalp->add_option("--dsl", ev_dsl, "DSL JSON (default: built-in pendulum DSL)");
  evalp->add_option("--rollouts", ev_rollouts, "number of evaluation rollouts");
  evalp->add_option("--seed", ev_seed, "run seed")->required();
  evalp->add_option("--jobs", ev_jobs, "worker threads");
  evalp->add_option("--out", ev_out, "stats JSON output path");

  // heatmap
  auto* heat = app.add_subcommand("heatmap", "Export a policy heatmap grid");
  std::string hm_oracle, hm_dsl, hm_grid = "101x101", hm_out = "heatmap.csv";
  heat->add_option("--oracle", hm_oracle, "program:<file>|mlp:<file>|expert")->required();
  heat->add_option("--dsl", hm_dsl, "DSL JSON (default: built-in pendulum DSL)");
  heat->add_option("--grid", hm_grid, "grid resolution <theta>x<theta_dot>");
  heat->add_option("--out", hm_out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*enumerate) {
      return cmd_enumerate(en_dsl, en_type, en_depth, en_inputs, en_count, en_metric);
    }
    if (*search) {
      return cmd_search(se_dsl, se_data, se_depth, se_edits, se_iters, se_init, se_trace,
                        se_loss, se_metric, se_jobs, se_dedup, se_seed);
    }
    if (*pbe) return cmd_pbe(pb_config, pb_out);
    if (*imitate) {
      return cmd_imitate(im_oracle, im_dsl, im_n, im_m, im_rounds, im_depth,
                         im_round_iters, im_aggregate, im_metric, im_seed, im_jobs,
                         im_out);
    }
    if (*evalp) {
      return cmd_eval_policy(ev_oracle, ev_dsl, ev_rollouts, ev_seed, ev_jobs, ev_out);
    }
    if (*heat) return cmd_heatmap(hm_oracle, hm_dsl, hm_grid, hm_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
