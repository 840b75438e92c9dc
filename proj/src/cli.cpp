#include "vanplan/cli.h"

#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "vanplan/errors.h"
#include "vanplan/genetic.h"
#include "vanplan/heuristic.h"
#include "vanplan/io.h"
#include "vanplan/validate.h"

namespace vanplan::cli {

namespace {

struct GenOptions {
  Index n = 0;
  Seed seed = 1;
  std::string births = "2:16";
  double speed = 100.0;
  std::string output;
};

struct SolveOptions {
  std::string algo = "heuristic";
  std::optional<double> time;
  Seed seed = 1;
  std::string strategy = "furthest";
  double keep_percent = 0.20;
  std::string score_mode = "ratio";
  double difference_factor = 60.0;
  Count min_exams = 2;
  Count mu = 150;
  Count lambda = 300;
  double cx_prob = 0.6;
  double mut_prob = 0.2;
  std::optional<Count> generations;
  Count sa_runs = 8;
  Count sa_iterations = 200000;
  std::string input;
  std::string output;
  std::string text;
  std::string pool_output;
};

struct Common {
  std::string config;
  unsigned threads = 0;
};

Instance load_with_config(const std::string& path, const Common& common) {
  auto instance = io::load_instance(path);
  if (!common.config.empty()) {
    const auto doc = io::read_json(common.config);
    const auto& params = doc.contains("params") ? doc["params"] : doc;
    instance.params = io::params_from_json(params, instance.params);
  }
  return instance;
}

std::pair<Count, Count> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("--births expects lo:hi, got '" + text + "'");
  }
  try {
    return {std::stoll(text.substr(0, colon)), std::stoll(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError("--births expects integers lo:hi, got '" + text + "'");
  }
}

void print_summary(std::ostream& out, const Schedule& schedule, const Instance& instance) {
  const auto m = static_cast<Count>(schedule.tours.size());
  out << "tours=" << m << " vans=" << vans_required(m, instance.params)
      << " travel=" << total_travel(schedule, instance)
      << " duration=" << total_duration(schedule, instance) << "\n";
}

int cmd_gen(const GenOptions& opt, const Common& common, std::ostream& out) {
  io::GenSpec spec;
  spec.n = opt.n;
  spec.seed = opt.seed;
  spec.speed = opt.speed;
  std::tie(spec.births_lo, spec.births_hi) = parse_range(opt.births);
  if (!common.config.empty()) {
    const auto doc = io::read_json(common.config);
    spec.params = io::params_from_json(doc.contains("params") ? doc["params"] : doc);
  }
  const auto instance = io::generate_instance(spec);
  io::save_instance(instance, opt.output);
  out << "wrote " << opt.output << ": " << instance.n() << " townships, "
      << instance.total_demand() << " examinations\n";
  return ok;
}

int cmd_solve(const SolveOptions& opt, const Common& common, std::ostream& out) {
  const auto instance = load_with_config(opt.input, common);

  Schedule schedule;
  if (opt.algo == "heuristic") {
    static const std::map<std::string, Strategy> strategies{
      {"furthest", Strategy::FurthestFirst},
      {"closest", Strategy::ClosestFirst},
      {"relevant", Strategy::MostRelevantFirst},
      {"random", Strategy::Random}};
    HeuristicParams hp;
    hp.strategy = strategies.at(opt.strategy);
    hp.score_mode = opt.score_mode == "ratio" ? ScoreMode::Ratio : ScoreMode::Difference;
    hp.difference_factor = opt.difference_factor;
    hp.keep_percent = opt.keep_percent;
    hp.min_exams_per_stop = opt.min_exams;
    hp.seed = opt.seed;
    hp.time_limit = opt.time.value_or(20.0);
    hp.restarts = opt.generations;
    hp.threads = common.threads;

    SAParams sa;
    sa.runs = opt.sa_runs;
    sa.iterations_per_run = opt.sa_iterations;
    sa.seed = opt.seed;
    sa.threads = common.threads;

    auto report = solve_heuristic(instance, hp, sa);
    if (!opt.pool_output.empty()) {
      io::write_text(opt.pool_output, io::export_geojson(report.pool, instance).dump(1) + "\n");
    }
    out << "pool=" << report.pool.size() << " plannings=" << report.scores.size()
        << " score=" << report.best_score << "\n";
    schedule = std::move(report.best);
  } else {
    GAParams ga;
    ga.mu = opt.mu;
    ga.lambda = opt.lambda;
    ga.cx_prob = opt.cx_prob;
    ga.mut_prob = opt.mut_prob;
    ga.seed = opt.seed;
    ga.time_limit = opt.time.value_or(60.0);
    ga.generations = opt.generations;
    ga.threads = common.threads;
    auto report = solve_ga(instance, ga);
    out << "generations=" << report.generations << " fitness=" << report.best_fitness
        << "\n";
    schedule = std::move(report.best);
  }

  print_summary(out, schedule, instance);
  io::save_schedule(schedule, opt.output);
  if (!opt.text.empty()) {
    io::write_text(opt.text, io::write_schedule_text(schedule, instance));
  }
  return ok;
}

int cmd_validate(const std::string& input,
                 const std::string& schedule_path,
                 const Common& common,
                 std::ostream& out) {
  const auto instance = load_with_config(input, common);
  const auto schedule = io::load_schedule(schedule_path);
  const auto violations = validate_schedule(schedule, instance);
  for (const auto& v : violations) {
    out << to_string(v.kind) << ": " << v.detail << "\n";
  }
  if (!violations.empty()) {
    out << violations.size() << " violation(s)\n";
    return invalid_schedule;
  }
  out << "valid: ";
  print_summary(out, schedule, instance);
  return ok;
}

int cmd_export(const std::string& format,
               const std::string& input,
               const std::string& schedule_path,
               const std::string& output,
               const Common& common,
               std::ostream& out) {
  const auto instance = load_with_config(input, common);
  const auto schedule = io::load_schedule(schedule_path);
  if (format == "geojson") {
    io::write_text(output, io::export_geojson(schedule, instance).dump(1) + "\n");
  } else if (format == "html") {
    io::write_text(output, io::export_html(schedule, instance));
  } else {
    io::write_text(output, io::write_schedule_text(schedule, instance));
  }
  out << "wrote " << output << "\n";
  return ok;
}

int cmd_compare(const std::string& input,
                const std::vector<std::string>& schedules,
                const Common& common,
                std::ostream& out) {
  const auto instance = load_with_config(input, common);
  const auto a = io::load_schedule(schedules[0]);
  const auto b = io::load_schedule(schedules[1]);
  const auto order = compare_schedules(a, b, instance);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& s = k == 0 ? a : b;
    const auto m = static_cast<Count>(s.tours.size());
    out << schedules[k] << ": tours=" << m << " duration=" << total_duration(s, instance)
        << " vans=" << vans_required(m, instance.params) << "\n";
  }
  if (order < 0) {
    out << "first is better\n";
  } else if (order > 0) {
    out << "second is better\n";
  } else {
    out << "equal\n";
  }
  return ok;
}

int cmd_fetch(const std::string& endpoint,
              const std::string& coords_path,
              const std::string& output,
              std::ostream& out) {
  const auto doc = io::read_json(coords_path);
  const auto& pairs = doc.is_object() && doc.contains("coords") ? doc["coords"] : doc;
  if (!pairs.is_array() || pairs.size() < 2) {
    throw SchemaError(coords_path + ": expected at least 2 [lat, lon] pairs");
  }
  std::vector<Coord> coords;
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw SchemaError(coords_path + ": coordinates must be [lat, lon] number pairs");
    }
    coords.push_back({p[0].get<double>(), p[1].get<double>()});
  }

  io::json instance;
  if (doc.is_object() && doc.contains("names")) {
    instance["names"] = doc["names"];
  } else {
    std::vector<std::string> names{"Capital"};
    for (std::size_t i = 1; i < coords.size(); ++i) {
      names.push_back("Township " + std::to_string(i));
    }
    instance["names"] = names;
  }
  if (doc.is_object() && doc.contains("yearly_untested_births")) {
    instance["yearly_untested_births"] = doc["yearly_untested_births"];
  } else if (doc.is_object() && doc.contains("demand")) {
    instance["demand"] = doc["demand"];
  } else {
    instance["demand"] = std::vector<Count>(coords.size(), 0);
  }

  const auto matrix = io::fetch_distance_matrix(endpoint, coords);
  io::json rows = io::json::array();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    const auto row = matrix.row(i);
    rows.push_back(std::vector<Minutes>(row.begin(), row.end()));
  }
  instance["dist_minutes"] = std::move(rows);
  instance["coords"] = pairs;

  // Round-trip through the loader so the written file is known to be valid.
  io::save_instance(io::instance_from_json(instance), output);
  out << "wrote " << output << ": " << coords.size() << "x" << coords.size()
      << " minute matrix\n";
  return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Routing and scheduling of mobile examination vans"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--config", common.config, "JSON file overriding exam_duration/max_day/working_days");
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  gen_cmd->add_option("--n", gen.n, "Number of townships")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--births", gen.births, "Yearly untested births range lo:hi");
  gen_cmd->add_option("--speed", gen.speed, "Driving minutes per degree");
  gen_cmd->add_option("-o,--output", gen.output, "Instance file to write")->required();

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute a schedule");
  solve_cmd->add_option("--algo", solve.algo)->check(CLI::IsMember({"heuristic", "genetic"}));
  solve_cmd->add_option("--time", solve.time, "Time limit in seconds");
  solve_cmd->add_option("--seed", solve.seed);
  solve_cmd->add_option("--strategy", solve.strategy)
    ->check(CLI::IsMember({"furthest", "closest", "relevant", "random"}));
  solve_cmd->add_option("--keep-percent", solve.keep_percent);
  solve_cmd->add_option("--score-mode", solve.score_mode)
    ->check(CLI::IsMember({"ratio", "difference"}));
  solve_cmd->add_option("--difference-factor", solve.difference_factor);
  solve_cmd->add_option("--min-exams", solve.min_exams, "Smallest worthwhile visit");
  solve_cmd->add_option("--mu", solve.mu);
  solve_cmd->add_option("--lambda", solve.lambda);
  solve_cmd->add_option("--cx-prob", solve.cx_prob);
  solve_cmd->add_option("--mut-prob", solve.mut_prob);
  solve_cmd->add_option("--generations",
                        solve.generations,
                        "Fixed GA generations or heuristic restarts; overrides --time");
  solve_cmd->add_option("--sa-runs", solve.sa_runs, "Annealing runs feeding the tour pool");
  solve_cmd->add_option("--sa-iterations", solve.sa_iterations, "Iterations per annealing run");
  solve_cmd->add_option("-i,--instance", solve.input)->required();
  solve_cmd->add_option("-o,--output", solve.output)->required();
  solve_cmd->add_option("--text", solve.text, "Also write the day-by-day text schedule");
  solve_cmd->add_option("--pool-out", solve.pool_output, "Write the heuristic tour pool as GeoJSON");

  std::string input;
  std::vector<std::string> schedules;
  std::string output;
  std::string format = "geojson";

  auto* validate_cmd = app.add_subcommand("validate", "Check a schedule against an instance");
  validate_cmd->add_option("-i,--instance", input)->required();
  validate_cmd->add_option("-s,--schedule", schedules)->required()->expected(1);

  auto* export_cmd = app.add_subcommand("export", "Export a schedule as GeoJSON, HTML or text");
  export_cmd->add_option("--format", format)->check(CLI::IsMember({"geojson", "html", "text"}));
  export_cmd->add_option("-i,--instance", input)->required();
  export_cmd->add_option("-s,--schedule", schedules)->required()->expected(1);
  export_cmd->add_option("-o,--output", output)->required();

  auto* compare_cmd = app.add_subcommand("compare", "Order two schedules by tours, then duration");
  compare_cmd->add_option("-i,--instance", input)->required();
  compare_cmd->add_option("-s,--schedule", schedules)->required()->expected(2);

  std::string endpoint;
  std::string coords_path;
  auto* fetch_cmd = app.add_subcommand("fetch-matrix", "Build an instance from a table service");
  fetch_cmd->add_option("--endpoint", endpoint, "e.g. http://localhost:5000/table/v1/driving")
    ->required();
  fetch_cmd->add_option("--coords", coords_path)->required();
  fetch_cmd->add_option("-o,--output", output)->required();

  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : usage_error;
  }

  try {
    if (gen_cmd->parsed()) {
      return cmd_gen(gen, common, out);
    }
    if (solve_cmd->parsed()) {
      return cmd_solve(solve, common, out);
    }
    if (validate_cmd->parsed()) {
      return cmd_validate(input, schedules[0], common, out);
    }
    if (export_cmd->parsed()) {
      return cmd_export(format, input, schedules[0], output, common, out);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(input, schedules, common, out);
    }
    if (fetch_cmd->parsed()) {
      return cmd_fetch(endpoint, coords_path, output, out);
    }
  } catch (const InfeasibleInstance& e) {
    err << "error: " << e.what() << "\n";
    return infeasible_instance;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return invalid_schedule;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return io_error;
  }
  return usage_error;
}

} // namespace vanplan::cli
