#include "sigcon/cli/runner.hpp"

#include "sigcon/cli/io.hpp"

#include <cstdlib>
#include <ostream>

namespace sigcon {
namespace fs = std::filesystem;
using nlohmann::json;

fs::path output_root_from_env() {
  if (const char* v = std::getenv(kOutputRootEnv); v && *v) return fs::path(v);
  return fs::current_path();
}

OutputOptions output_options(const Manifest& m, const fs::path& root) {
  static const json empty = json::object();
  JsonView top(m.root, "");
  const JsonView v = top.has("output") ? top.child("output") : JsonView(empty, "output");
  OutputOptions o;
  fs::path dir = v.text("directory", m.experiment());
  o.directory = dir.is_absolute() ? dir : root / dir;
  o.wall_clock = v.flag("wall_clock", false);
  o.snapshots = v.flag("snapshots", false);
  o.reference = v.flag("reference", false);
  o.reference_tol = v.real("reference_tol", o.reference_tol);
  o.reference_max_iters = v.count("reference_max_iters", o.reference_max_iters);
  return o;
}

void write_point(const fs::path& directory, const std::string& name, const SpacePoint& x) {
  io::write_vector_csv(directory / (name + ".csv"), x.values());
  const auto& shape = x.shape();
  for (std::size_t k = 0; k < shape.block_count(); ++k) {
    if (!shape.block(k).grid) continue;
    const auto file = shape.block_count() == 1 ? name + ".pgm"
                                               : name + "_" + std::to_string(k + 1) + ".pgm";
    io::write_pgm_block(directory / file, x, k);
  }
}

namespace {

json located(const Manifest& m, const std::function<json()>& f) {
  try {
    return f();
  } catch (const FieldError& e) {
    raise_located(m, e);
  }
}

} // namespace

RunReport run_experiment(const Manifest& m, const fs::path& output_root) {
  OutputOptions out;
  std::optional<Experiment> ex;
  located(m, [&] {
    out = output_options(m, output_root);
    ex.emplace(build_experiment(m));
    return json();
  });

  auto config = ex->config;
  config.keep_snapshots = out.snapshots;
  const auto result = solve(ex->problem, ex->schedule, config);

  fs::create_directories(out.directory);
  write_point(out.directory, "recovered", result.solution);
  if (ex->ground_truth) write_point(out.directory, "ground_truth", *ex->ground_truth);
  for (const auto& [name, point] : ex->observations) write_point(out.directory, name, point);
  io::write_trace_csv(out.directory / "trace.csv", result.trace, out.wall_clock);
  if (out.snapshots) io::write_iterates_csv(out.directory / "iterates.csv", result.trace, out.wall_clock);

  json summary{{"experiment", ex->kind},
               {"seed", m.seed()},
               {"status", to_string(result.status)},
               {"iterations", result.iterations},
               {"residual", result.residual},
               {"tol", config.tol},
               {"gamma", config.gamma},
               {"averaging", config.averaging == Averaging::balanced ? "balanced" : "literal"},
               {"schedule", ex->schedule.to_json()},
               {"inconsistency_bound",
                inconsistency_bound(ex->problem, result.solution, std::max(config.tol, 1e-12),
                                    config.theta)},
               {"parameters", ex->info}};
  json gaps = json::array();
  for (const auto& arm : ex->problem.prescriptions())
    gaps.push_back(prescription_residual(arm, result.solution).norm());
  summary["prescription_gaps"] = gaps;
  if (ex->ground_truth)
    summary["relative_error"] =
        relative_error(result.solution.values(), ex->ground_truth->values());

  if (out.reference) {
    auto ref_config = config;
    ref_config.tol = out.reference_tol;
    ref_config.max_iters = out.reference_max_iters;
    ref_config.keep_snapshots = false;
    ref_config.trace_every = std::max<std::size_t>(config.trace_every, 10);
    const auto ref = solve(ex->problem, full_schedule(ex->problem.size()), ref_config);
    io::write_vector_csv(out.directory / "xinf.csv", ref.solution.values());
    summary["reference"] = {{"status", to_string(ref.status)},
                            {"iterations", ref.iterations},
                            {"residual", ref.residual}};
    if (out.snapshots) {
      const auto series = relative_error_trace(result.trace, ref.solution);
      std::string csv = "n,seconds,relative_error_db\n";
      for (const auto& p : series)
        csv += std::to_string(p.n) + "," + (out.wall_clock ? io::format_double(p.seconds) : "nan") +
               "," + io::format_double(p.db) + "\n";
      io::write_text(out.directory / "relative_error.csv", csv);
    }
  }

  io::write_text(out.directory / "summary.json", summary.dump(2) + "\n");
  return {result.status == SolveStatus::converged ? exit_converged : exit_max_iters,
          out.directory, summary};
}

int run_manifest_file(const fs::path& path, const fs::path& output_root, std::ostream& out,
                      std::ostream& err) {
  try {
    const auto m = load_manifest(path);
    const auto report = run_experiment(m, output_root);
    out << report.summary.at("experiment").get<std::string>() << ": "
        << report.summary.at("status").get<std::string>() << " after "
        << report.summary.at("iterations") << " iterations, residual "
        << io::format_double(report.summary.at("residual").get<double>()) << " -> "
        << report.directory.string() << "\n";
    return report.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const json::exception& e) {
    err << "error: manifest: " << e.what() << "\n";
    return exit_config_error;
  }
}

void generate_files(const std::string& kind, std::uint64_t seed, const fs::path& directory) {
  auto manifest = default_manifest(kind, seed);
  manifest["output"]["directory"] = (directory / "run").string();
  const auto text = manifest.dump(2) + "\n";
  fs::create_directories(directory);
  io::write_text(directory / "manifest.json", text);
  const auto m = parse_manifest(text, directory / "manifest.json");
  Experiment ex = [&] {
    try {
      return build_experiment(m);
    } catch (const FieldError& e) {
      raise_located(m, e);
    }
  }();
  if (ex.ground_truth) write_point(directory, "ground_truth", *ex.ground_truth);
  for (const auto& [name, point] : ex.observations) write_point(directory, name, point);
  json info{{"experiment", kind},
            {"seed", seed},
            {"prescriptions", ex.problem.size()},
            {"schedule", ex.schedule.to_json()},
            {"parameters", ex.info}};
  io::write_text(directory / "problem.json", info.dump(2) + "\n");
}

std::vector<ErrorPoint> trace_plot(const fs::path& iterates_csv, const fs::path& xinf_csv) {
  if (!fs::exists(xinf_csv)) throw MissingReference("reference '" + xinf_csv.string() + "' not found");
  if (!fs::exists(iterates_csv))
    throw MissingReference("iterates '" + iterates_csv.string() +
                           "' not found; run with output.snapshots = true");
  const auto xinf = io::read_vector_csv(xinf_csv);
  const auto rows = io::read_iterates_csv(iterates_csv);
  std::vector<std::size_t> n;
  std::vector<double> s;
  std::vector<std::vector<double>> xs;
  for (const auto& r : rows) {
    if (r.x.size() != xinf.size())
      throw ShapeMismatch("iterate and reference sizes differ");
    n.push_back(r.n);
    s.push_back(r.seconds);
    xs.push_back(r.x);
  }
  return relative_error_trace(n, s, xs, xinf);
}

} // namespace sigcon
