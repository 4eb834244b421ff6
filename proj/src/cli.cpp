#include "bpmp/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpmp/bench.hpp"
#include "bpmp/cim.hpp"
#include "bpmp/formulations.hpp"
#include "bpmp/instance.hpp"
#include "bpmp/measure.hpp"
#include "bpmp/model.hpp"
#include "bpmp/oracle.hpp"
#include "bpmp/report.hpp"
#include "bpmp/solve.hpp"

namespace bpmp {

namespace {

// Errors caused by the user's flags or input files.
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<int> parse_int_list(const std::string& flag, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw UserError(flag + ": '" + tok + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw UserError(flag + ": empty list");
  return out;
}

Instance load_instance(const std::string& path) {
  try {
    return load(path);
  } catch (const bpmp::ParseError& e) {
    throw UserError(std::string("--instance: ") + e.what());
  } catch (const ValidationError& e) {
    throw UserError(std::string("--instance: ") + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserError("cannot write " + path.string());
  out << text;
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_file(path, text);
}

// Formulation and technique set from --formulation / --preset / --techniques.
Approach resolve_approach(const std::string& formulation, const std::string& preset, const std::string& techniques) {
  Approach a;
  std::optional<Formulation> f;
  try {
    if (!formulation.empty()) f = parse_formulation(formulation);
  } catch (const std::invalid_argument& e) {
    throw UserError(std::string("--formulation: ") + e.what());
  }
  if (!preset.empty()) {
    try {
      a = approach_from_preset(preset);
    } catch (const std::invalid_argument& e) {
      throw UserError(std::string("--preset: ") + e.what());
    }
    if (f && *f != a.formulation)
      throw UserError("--preset " + preset + " is a " + to_string(a.formulation) + " preset but --formulation is " +
                      to_string(*f));
    return a;
  }
  if (!f) throw UserError("--formulation is required unless --preset is given");
  a.formulation = *f;
  try {
    a.techniques = parse_techniques(techniques);
    check_techniques(a.formulation, a.techniques);
  } catch (const std::invalid_argument& e) {
    throw UserError(std::string("--techniques: ") + e.what());
  }
  return a;
}

WeightScheme resolve_weights(const std::string& path, const std::vector<BenchInstance>& instances) {
  if (path.empty()) return fill_size_weights(WeightScheme::node_arc(), instances);
  try {
    return load_weights(path);
  } catch (const std::invalid_argument& e) {
    throw UserError(std::string("--weights: ") + e.what());
  }
}

void check_size_weights(const WeightScheme& w, const std::vector<int>& sizes) {
  for (int n : sizes)
    if (!w.size.count(n)) throw UserError("--weights: no size weight for n = " + std::to_string(n));
}

void check_sizes(const std::vector<int>& sizes) {
  for (int n : sizes)
    if (n < 3) throw UserError("--sizes: n must be at least 3 (got " + std::to_string(n) + ")");
}

void write_report_dir(const std::filesystem::path& dir, const std::vector<CompositeReport>& reports) {
  auto list = nlohmann::ordered_json::array();
  for (const auto& r : reports) list.push_back(to_json(r));
  write_file(dir / "report.json", list.dump(2) + "\n");
  write_file(dir / "report.md", render_markdown(reports));
  write_file(dir / "report.csv", render_csv(reports));
}

void write_log(const std::filesystem::path& path, const std::vector<RunMeasurement>& runs) {
  std::ostringstream s;
  write_measurement_log(s, runs);
  write_file(path, s.str());
}

void print_warnings(const std::vector<RunMeasurement>& runs, std::ostream& err) {
  for (const auto& r : runs)
    for (const auto& w : r.warnings) err << "warning: " << r.instance_id << ": " << w << "\n";
}

void prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw UserError("--out: cannot create directory " + dir);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"BPMP models, exact oracle and Composite Index Method benchmarking", "bpmp"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  GenerationParams gen_params;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Node count (>= 3)")->required();
  gen->add_option("--seed", gen_seed, "Random seed")->required();
  gen->add_option("--density", gen_params.density, "Request probability per eligible pair, in (0,1]");
  gen->add_option("--slack", gen_params.slack, "D as a multiple of the origin-depot distance, > 1");
  gen->add_option("--out", gen_out, "Output file (stdout when omitted)");

  // model
  auto* model_cmd = app.add_subcommand("model", "Build a formulation and emit it as LP or MPS");
  std::string m_instance, m_formulation, m_techniques, m_preset, m_emit, m_out;
  model_cmd->add_option("--instance", m_instance, "Instance file")->required()->check(CLI::ExistingFile);
  model_cmd->add_option("--formulation", m_formulation, "node-arc or triples");
  auto* m_tech_opt = model_cmd->add_option("--techniques", m_techniques, "Technique list, e.g. t1,t2,t4,t5");
  model_cmd->add_option("--preset", m_preset, "Named preset")->excludes(m_tech_opt);
  model_cmd->add_option("--emit", m_emit, "lp or mps")->required()->check(CLI::IsMember({"lp", "mps"}));
  model_cmd->add_option("--out", m_out, "Output file (stdout when omitted)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance with the built-in MIP solver");
  std::string s_instance, s_formulation, s_techniques, s_preset, s_cuts;
  bool s_json = false;
  std::int64_t s_node_limit = 0;
  solve_cmd->add_option("--instance", s_instance, "Instance file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--formulation", s_formulation, "node-arc or triples");
  auto* s_tech_opt = solve_cmd->add_option("--techniques", s_techniques, "Technique list");
  solve_cmd->add_option("--preset", s_preset, "Named preset")->excludes(s_tech_opt);
  solve_cmd->add_option("--cuts", s_cuts, "Root separation families: cover,pairwise");
  solve_cmd->add_option("--node-limit", s_node_limit, "Stop after this many nodes")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--json", s_json, "Print the solution as JSON");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Solve an instance by exhaustive enumeration (n <= 10)");
  std::string o_instance;
  bool o_json = false;
  oracle_cmd->add_option("--instance", o_instance, "Instance file")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_flag("--json", o_json, "Print the solution as JSON");

  // bench
  auto* bench = app.add_subcommand("bench", "Compare two presets with the Composite Index Method");
  std::string b_baseline, b_challenger, b_sizes, b_weights, b_external, b_out;
  int b_per_size = 10, b_trials = 3;
  std::uint64_t b_seed = 0;
  bench->add_option("--baseline", b_baseline, "Baseline preset")->required();
  bench->add_option("--challenger", b_challenger, "Challenger preset")->required();
  bench->add_option("--sizes", b_sizes, "Instance sizes, e.g. 4,5")->required();
  bench->add_option("--per-size", b_per_size, "Instances per size")->check(CLI::PositiveNumber);
  bench->add_option("--trials", b_trials, "Trials per instance")->check(CLI::PositiveNumber);
  bench->add_option("--seed", b_seed, "First instance seed");
  bench->add_option("--weights", b_weights, "Weight scheme JSON")->check(CLI::ExistingFile);
  bench->add_option("--external", b_external, "External solver command; {model} is the MPS path");
  bench->add_option("--out", b_out, "Output directory")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Sequential technique evaluation");
  std::string e_formulation, e_techniques, e_initial, e_sizes, e_weights, e_external, e_out;
  int e_per_size = 10, e_trials = 3;
  std::uint64_t e_seed = 0;
  evaluate->add_option("--formulation", e_formulation, "node-arc or triples")->required();
  evaluate->add_option("--techniques", e_techniques, "Ordered technique list")->required();
  evaluate->add_option("--initial", e_initial, "Initial preset (default: the original model)");
  evaluate->add_option("--sizes", e_sizes, "Instance sizes")->required();
  evaluate->add_option("--per-size", e_per_size, "Instances per size")->check(CLI::PositiveNumber);
  evaluate->add_option("--trials", e_trials, "Trials per instance")->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", e_seed, "First instance seed");
  evaluate->add_option("--weights", e_weights, "Weight scheme JSON")->check(CLI::ExistingFile);
  evaluate->add_option("--external", e_external, "External solver command; {model} is the MPS path");
  evaluate->add_option("--out", e_out, "Output directory")->required();

  // report
  auto* report = app.add_subcommand("report", "Render a bench/evaluate result directory");
  std::string r_in, r_format = "md";
  report->add_option("--in", r_in, "Result directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--format", r_format, "md or csv")->check(CLI::IsMember({"md", "csv"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  try {
    if (*gen) {
      if (gen_n < 3) throw UserError("--n: must be at least 3");
      try {
        const auto inst = generate(gen_n, gen_seed, gen_params);
        write_or_print(gen_out, to_json(inst), out);
      } catch (const std::invalid_argument& e) {
        throw UserError(e.what());
      }
    } else if (*model_cmd) {
      const auto a = resolve_approach(m_formulation, m_preset, m_techniques);
      const auto inst = load_instance(m_instance);
      const auto model = build_model(inst, a.formulation, a.techniques);
      write_or_print(m_out, m_emit == "lp" ? emit_lp(model) : emit_mps(model), out);
    } else if (*solve_cmd) {
      const auto a = resolve_approach(s_formulation, s_preset, s_techniques);
      std::vector<CutFamily> families;
      try {
        families = parse_cut_families(s_cuts);
      } catch (const std::invalid_argument& e) {
        throw UserError(std::string("--cuts: ") + e.what());
      }
      if (std::find(families.begin(), families.end(), CutFamily::kCover) != families.end() &&
          a.formulation != Formulation::kNodeArc)
        throw UserError("--cuts: cover cuts apply to the node-arc formulation only");
      const auto inst = load_instance(s_instance);
      const auto model = build_model(inst, a.formulation, a.techniques);
      CutLoopConfig config;
      if (s_node_limit > 0) config.mip.node_limit = s_node_limit;
      const auto outcome = solve(model, inst, families, config);
      if (s_json) {
        out << to_json(model, outcome).dump(2) << "\n";
      } else {
        const auto& s = outcome.solution;
        out << "status " << to_string(s.status) << "\n";
        if (!s.values.empty()) out << "objective " << fmt("%.6f", s.objective) << "\n";
        out << "nodes " << s.nodes << "\npivots " << s.pivots << "\nticks " << s.ticks << "\n";
        if (!outcome.cuts.empty() || outcome.cut_rounds > 0)
          out << "cuts " << outcome.cuts.size() << " in " << outcome.cut_rounds << " rounds\n";
        if (outcome.round_limit_hit) err << "warning: separation round limit reached\n";
      }
      if (s_node_limit > 0 && outcome.solution.status == MipStatus::kNodeLimit)
        err << "warning: node limit reached, objective is the best incumbent\n";
    } else if (*oracle_cmd) {
      const auto inst = load_instance(o_instance);
      ExactSolution ex;
      try {
        ex = solve_exact(inst);
      } catch (const std::invalid_argument& e) {
        throw UserError(e.what());
      }
      if (o_json) {
        out << to_json(inst, ex).dump(2) << "\n";
      } else {
        out << "objective " << fmt("%.6f", ex.objective) << "\nroute";
        for (int v : ex.route) out << " " << v;
        out << "\naccepted";
        for (const auto& r : ex.accepted) out << " (" << r.from << "," << r.to << ")";
        out << "\n";
      }
    } else if (*bench) {
      Approach base, chal;
      try {
        base = approach_from_preset(b_baseline);
      } catch (const std::invalid_argument& e) {
        throw UserError(std::string("--baseline: ") + e.what());
      }
      try {
        chal = approach_from_preset(b_challenger);
      } catch (const std::invalid_argument& e) {
        throw UserError(std::string("--challenger: ") + e.what());
      }
      const auto sizes = parse_int_list("--sizes", b_sizes);
      check_sizes(sizes);
      const auto instances = make_instances(sizes, b_per_size, b_seed);
      const auto weights = resolve_weights(b_weights, instances);
      check_size_weights(weights, sizes);
      prepare_out_dir(b_out);
      const auto measure = b_external.empty()
                               ? builtin_measurer()
                               : external_measurer(b_external, std::filesystem::path(b_out) / "models");
      const auto ev = evaluate_technique(b_baseline + " -> " + b_challenger, base, chal, instances, weights, b_trials,
                                         measure);
      print_warnings(ev.incumbent_runs, err);
      print_warnings(ev.challenger_runs, err);
      const std::filesystem::path dir(b_out);
      write_log(dir / "measurements_baseline.csv", ev.incumbent_runs);
      write_log(dir / "measurements_challenger.csv", ev.challenger_runs);
      write_file(dir / "weights.json", to_json(weights).dump(2) + "\n");
      write_report_dir(dir, {ev.report});
      out << "GCI " << fmt("%.2f", ev.report.gci) << " decision " << (ev.report.adopt ? "adopt" : "reject") << "\n";
    } else if (*evaluate) {
      Formulation f;
      try {
        f = parse_formulation(e_formulation);
      } catch (const std::invalid_argument& e) {
        throw UserError(std::string("--formulation: ") + e.what());
      }
      std::vector<int> order;
      try {
        order = parse_technique_order(e_techniques);
      } catch (const std::invalid_argument& e) {
        throw UserError(std::string("--techniques: ") + e.what());
      }
      Approach initial{f, {}};
      if (!e_initial.empty()) {
        try {
          initial = approach_from_preset(e_initial);
        } catch (const std::invalid_argument& e) {
          throw UserError(std::string("--initial: ") + e.what());
        }
        if (initial.formulation != f) throw UserError("--initial: preset does not match --formulation");
      }
      for (int t : order) {
        TechniqueSet single;
        single.set(t, true);
        if (t == 4) single.set(1, true);
        try {
          check_techniques(f, single);
        } catch (const std::invalid_argument& e) {
          throw UserError(std::string("--techniques: ") + e.what());
        }
      }
      const auto sizes = parse_int_list("--sizes", e_sizes);
      check_sizes(sizes);
      const auto instances = make_instances(sizes, e_per_size, e_seed);
      auto weights = resolve_weights(e_weights, instances);
      check_size_weights(weights, sizes);
      prepare_out_dir(e_out);
      const std::filesystem::path dir(e_out);
      const auto measure =
          e_external.empty() ? builtin_measurer() : external_measurer(e_external, dir / "models");
      const auto result = sequential_evaluation(initial, order, instances, weights, e_trials, measure,
                                                [&](const Evaluation& ev) {
                                                  out << ev.report.label << " GCI " << fmt("%.2f", ev.report.gci)
                                                      << " decision " << (ev.report.adopt ? "adopt" : "reject");
                                                  if (!ev.report.note.empty()) out << " (" << ev.report.note << ")";
                                                  out << "\n";
                                                  print_warnings(ev.challenger_runs, err);
                                                });
      std::vector<CompositeReport> reports;
      for (const auto& step : result.steps) {
        reports.push_back(step.report);
        if (!step.challenger_runs.empty()) {
          write_log(dir / ("measurements_" + step.report.label + "_incumbent.csv"), step.incumbent_runs);
          write_log(dir / ("measurements_" + step.report.label + "_challenger.csv"), step.challenger_runs);
        }
      }
      write_report_dir(dir, reports);
      write_file(dir / "weights.json", to_json(weights).dump(2) + "\n");
      nlohmann::ordered_json fin;
      fin["formulation"] = to_string(result.final_approach.formulation);
      fin["initial"] = to_string(initial.techniques);
      fin["final"] = to_string(result.final_approach.techniques);
      auto decisions = nlohmann::ordered_json::array();
      for (const auto& r : reports) decisions.push_back({{"technique", r.label}, {"adopt", r.adopt}, {"gci", r.gci}});
      fin["decisions"] = std::move(decisions);
      write_file(dir / "final.json", fin.dump(2) + "\n");
      out << "final " << result.final_approach.describe() << "\n";
    } else if (*report) {
      const auto path = std::filesystem::path(r_in) / "report.json";
      std::ifstream in(path);
      if (!in) throw UserError("--in: " + path.string() + " not found");
      std::vector<CompositeReport> reports;
      try {
        const auto j = nlohmann::json::parse(in);
        if (!j.is_array()) throw std::invalid_argument("expected a JSON array of reports");
        for (const auto& e : j) reports.push_back(report_from_json(e));
      } catch (const nlohmann::json::exception& e) {
        throw UserError("--in: " + path.string() + ": " + e.what());
      } catch (const std::invalid_argument& e) {
        throw UserError("--in: " + path.string() + ": " + e.what());
      }
      out << (r_format == "md" ? render_markdown(reports) : render_csv(reports));
    }
  } catch (const UserError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const OracleSizeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace bpmp
