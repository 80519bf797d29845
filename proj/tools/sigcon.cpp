// Command-line driver: run manifests, generate experiment data, and turn
// iterate snapshots into relative-error series.

#include "sigcon/cli/io.hpp"
#include "sigcon/cli/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace sigcon;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Signal construction from inconsistent nonlinear prescriptions"};
  app.require_subcommand(1);

  std::string manifest_path;
  auto* run = app.add_subcommand("run", "Solve the experiment described by a JSON manifest");
  run->add_option("manifest", manifest_path, "Manifest file")->required();

  std::string kind, gen_out;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("generate", "Write a manifest and synthetic data for an experiment");
  gen->add_option("kind", kind, "Experiment kind")
      ->required()
      ->check(CLI::IsMember(experiment_kinds()));
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", gen_out, "Output directory")->required();

  std::string trace_path, ref_path, iterates_path, plot_out;
  auto* plot = app.add_subcommand(
      "trace-plot", "Relative error 20 log10(|x_n - x_inf| / |x_0 - x_inf|) as CSV");
  plot->add_option("trace", trace_path, "trace.csv of a run made with output.snapshots")
      ->required();
  plot->add_option("--ref", ref_path, "Reference point x_inf (CSV)")->required();
  plot->add_option("--iterates", iterates_path, "Iterates CSV (default: next to the trace)");
  plot->add_option("--out", plot_out, "Output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  const fs::path root = output_root_from_env();
  if (*run) return run_manifest_file(manifest_path, root, std::cout, std::cerr);

  try {
    if (*gen) {
      fs::path dir = gen_out;
      if (dir.is_relative()) dir = root / dir;
      generate_files(kind, seed, dir);
      std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
      return 0;
    }
    if (*plot) {
      fs::path iterates = iterates_path.empty()
                              ? fs::path(trace_path).parent_path() / "iterates.csv"
                              : fs::path(iterates_path);
      const auto trace = io::read_trace_csv(trace_path);
      const auto series = trace_plot(iterates, ref_path);
      std::ofstream file;
      if (!plot_out.empty()) {
        file.open(plot_out);
        if (!file) throw IoError("cannot open '" + plot_out + "' for writing");
      }
      std::ostream& os = plot_out.empty() ? std::cout : file;
      os << "n,seconds,relative_error_db,residual\n";
      std::size_t t = 0;
      for (const auto& p : series) {
        while (t < trace.size() && trace[t].n < p.n) ++t;
        const double residual = t < trace.size() && trace[t].n == p.n ? trace[t].residual : 0.0;
        os << p.n << ',' << io::format_double(p.seconds) << ',' << io::format_double(p.db)
           << ',' << io::format_double(residual) << '\n';
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config_error;
  }
  return 0;
}
