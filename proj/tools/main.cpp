// subcool command-line front end.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "subcool/experiments.hpp"

namespace ex = subcool::experiments;

namespace {

enum Exit { kOk = 0, kValidation = 1, kOracleFailure = 2, kRuntime = 3 };

void summarize(const ex::RunOutputs& out) {
  std::cout << "wrote " << out.rows << " rows to " << out.csv.string() << "\n"
            << "manifest: " << out.manifest.string() << "\n";
  for (const auto& p : out.extra) std::cout << "extra: " << p.string() << "\n";
  if (out.extinctions > 0) {
    std::cout << out.extinctions << " grid point(s) went extinct (flagged rows)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-based subspace cooling of qudit chains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SUBCOOL_VERSION);

  std::string config_path, out_dir, preset_id, csv_path;
  int workers = 1;
  bool with_d5 = false, flip_reference = false;
  int jtau_points = 64, max_steps = 200;
  double threshold = 0.96;

  auto* run = app.add_subcommand("run", "Run the sweep described by a JSON config");
  run->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (default: config 'outputs')");
  run->add_option("--workers", workers, "parallel workers")->check(CLI::PositiveNumber);

  auto* preset = app.add_subcommand("preset", "Run a built-in figure preset");
  preset->add_option("id", preset_id, "preset id")->required()->check(
      CLI::IsMember(ex::preset_ids()));
  preset->add_option("--out", out_dir, "output directory")->required();
  preset->add_option("--workers", workers, "parallel workers")->check(CLI::PositiveNumber);
  preset->add_flag("--with-d5", with_d5, "fig4: add the d = 5 panel");
  preset->add_option("--jtau-points", jtau_points, "Jtau grid resolution")
      ->check(CLI::PositiveNumber);
  preset->add_option("--max-steps", max_steps, "largest N")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle-check", "Compare the engine with closed forms");
  oracle->add_flag("--flip-reference", flip_reference,
                   "score against the opposite-field reference (mutation check)");

  auto* spectrum = app.add_subcommand("spectrum", "Dump the Zeno-map spectrum as JSON");
  spectrum->add_option("--config", config_path, "config file")->required()->check(
      CLI::ExistingFile);

  auto* classify = app.add_subcommand("classify", "Find imperfect Jtau regions in a CSV");
  classify->add_option("--in", csv_path, "results CSV")->required()->check(CLI::ExistingFile);
  classify->add_option("--threshold", threshold, "fidelity threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (*run) {
      const auto spec = ex::load_sweep_spec(config_path);
      if (out_dir.empty()) out_dir = spec.outputs;
      if (out_dir.empty()) throw ex::ConfigError("outputs", "no --out given and config has none");
      const auto result = ex::run_sweep(spec, workers);
      summarize(ex::write_outputs(std::span<const ex::SweepSpec>(&spec, 1), result, out_dir));
    } else if (*preset) {
      ex::PresetOptions options;
      options.include_d5 = with_d5;
      options.jtau_points = jtau_points;
      options.max_steps = max_steps;
      summarize(ex::run_preset(preset_id, out_dir, workers, options));
    } else if (*oracle) {
      ex::OracleCheckOptions options;
      options.flip_reference = flip_reference;
      const auto report = ex::oracle_check(options);
      ex::print_report(std::cout, report);
      return report.passed() ? kOk : kOracleFailure;
    } else if (*spectrum) {
      const auto spec = ex::load_sweep_spec(config_path);
      const auto grid = ex::expand_grid(spec);
      if (grid.size() != 1) {
        throw ex::ConfigError("axes", "spectrum needs a single grid point");
      }
      const auto& c = grid.front().config;
      std::cout << ex::spectrum_json(c, subcool::zeno_spectrum(c));
    } else if (*classify) {
      std::ifstream in(csv_path, std::ios::binary);
      const auto rows = ex::read_csv(in);
      std::cout << ex::to_json(ex::classify_regions(rows, threshold));
    }
  } catch (const subcool::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
