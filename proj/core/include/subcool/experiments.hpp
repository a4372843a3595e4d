#pragma once

// Parameter sweeps over ProtocolConfig grids, figure presets, CSV/JSON
// output, region classification and the oracle cross-check.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "subcool/protocol.hpp"

namespace subcool::experiments {

/// Configuration file does not match the schema. The message starts with
/// the offending field path, e.g. "axes.Jtau: axis must be non-empty".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : InvalidArgument(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Grid axes. Empty axes are not swept. `steps` does not add grid points:
/// each point runs to the largest listed N and only those steps are
/// recorded.
struct SweepAxes {
  std::vector<int> d;
  std::vector<int> k;
  std::vector<double> delta;
  std::vector<double> theta;
  std::vector<double> jtau;
  std::vector<int> steps;
};

struct SweepSpec {
  std::string preset_id;
  ProtocolConfig base;
  SweepAxes axes;
  std::string outputs;  ///< default output directory; may be empty
};

struct GridPoint {
  std::size_t index = 0;
  ProtocolConfig config;
  std::vector<int> record_steps;  ///< ascending; empty means every step
};

/// Cartesian product in the order d, Delta, theta, Jtau, k (k fastest).
/// Throws ConfigError if a point is invalid.
std::vector<GridPoint> expand_grid(const SweepSpec& spec);

struct ResultRow {
  std::string preset_id;
  std::string topology;
  std::string model;
  int d = 0;
  int L = 0;
  int k = 0;
  double J = 0.0;
  double delta_or_theta = 0.0;
  double tau = 0.0;
  int step = 0;
  int site = 0;
  double fidelity = 0.0;
  double step_probability = 0.0;
  double cum_probability = 0.0;
  double log_cum_probability = 0.0;
  std::size_t grid_index = 0;
  bool extinct = false;
};

struct SweepResult {
  std::vector<GridPoint> grid;
  std::vector<ResultRow> rows;  ///< sorted by (grid index, step, site)
  std::size_t extinctions = 0;
  double max_trace_drift = 0.0;
};

/// Runs every grid point of every sweep on up to `workers` threads. Grid
/// indices continue across sweeps. Output does not depend on `workers`.
SweepResult run_sweeps(std::span<const SweepSpec> sweeps, int workers = 1);
SweepResult run_sweep(const SweepSpec& spec, int workers = 1);

// --- configuration ---------------------------------------------------------

SweepSpec parse_sweep_spec(const std::string& json_text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);
/// Fully resolved configuration (defaults filled in) as JSON text.
std::string resolved_config_json(const SweepSpec& spec);

// --- CSV -------------------------------------------------------------------

std::string csv_header();
std::string format_row(const ResultRow& row);
void write_csv(std::ostream& out, std::span<const ResultRow> rows);
/// Parses CSV written by write_csv. Throws InvalidArgument on missing
/// columns or malformed numbers.
std::vector<ResultRow> read_csv(std::istream& in);

// --- runs ------------------------------------------------------------------

struct RunOutputs {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> extra;
  std::size_t rows = 0;
  std::size_t extinctions = 0;
};

/// Writes results.csv and manifest.json into `out_dir` (created if needed).
RunOutputs write_outputs(std::span<const SweepSpec> sweeps, const SweepResult& result,
                         const std::filesystem::path& out_dir);

RunOutputs run_config(const std::filesystem::path& config,
                      const std::filesystem::path& out_dir, int workers = 1);

// --- presets ---------------------------------------------------------------

struct PresetOptions {
  bool include_d5 = false;  ///< fig4: add the d = 5 panel
  int jtau_points = 64;     ///< contour grids over Jtau in [0, 2 pi]
  int max_steps = 200;
};

struct Preset {
  std::string id;
  std::string description;
  std::vector<SweepSpec> sweeps;
  /// fig6: the k axis holds {1, 2}; a delta_p.csv is added.
  bool emits_delta_p = false;
};

std::vector<std::string> preset_ids();
Preset make_preset(const std::string& id, const PresetOptions& options = {});

struct DeltaPRow {
  int d = 0;
  int k = 0;
  int step = 0;
  double p_rank_k = 0.0;
  double p_rank_k_minus_1 = 0.0;
  double delta_p = 0.0;
};

/// Pairs rank-k and rank-(k-1) site-1 cumulative probabilities of rows
/// that share every other parameter.
std::vector<DeltaPRow> delta_p_table(const SweepResult& result);

RunOutputs run_preset(const std::string& id, const std::filesystem::path& out_dir,
                      int workers = 1, const PresetOptions& options = {});

// --- region classification -------------------------------------------------

struct JtauSummary {
  double jtau = 0.0;
  double max_fidelity = 0.0;
  int best_step = 0;
  bool imperfect = false;
};

struct SeriesRegions {
  std::string preset_id;
  std::string model;
  int d = 0;
  int L = 0;
  int k = 0;
  double delta_or_theta = 0.0;
  int site = 0;
  std::vector<JtauSummary> points;  ///< ascending Jtau
  std::vector<double> imperfect;    ///< {Jtau : max_N F <= threshold}
};

struct RegionSummary {
  double threshold = 0.96;
  std::vector<SeriesRegions> series;
};

/// Groups non-extinct rows into series and, per Jtau, takes the maximum
/// fidelity over the recorded steps. Throws InvalidArgument if the rows do
/// not form a (Jtau x N) grid.
RegionSummary classify_regions(std::span<const ResultRow> rows, double threshold = 0.96);
std::string to_json(const RegionSummary& summary);

// --- oracle cross-check ----------------------------------------------------

struct OracleGridReport {
  std::string model;
  int d = 0;
  std::size_t points = 0;
  double max_deviation = 0.0;
  double tolerance = 1e-8;
  bool passed() const { return max_deviation < tolerance; }
};

struct OracleReport {
  std::vector<OracleGridReport> grids;
  bool passed() const;
};

struct OracleCheckOptions {
  double tolerance = 1e-8;
  /// Mutation switch: score the engine against the reference state of the
  /// opposite field sign. Used to show the check catches basis mistakes.
  bool flip_reference = false;
};

/// XX rank-1 for d = 2..5 over Jtau in {0, 0.1, ..., 6.2} x N in 1..50, and
/// BBH rank-1 d = 3 over four theta values x Jtau = 1 x N in 1..100.
OracleReport oracle_check(const OracleCheckOptions& options = {});
void print_report(std::ostream& out, const OracleReport& report);

// --- spectrum --------------------------------------------------------------

std::string spectrum_json(const ProtocolConfig& config, const ZenoSpectrum& spectrum);

}  // namespace subcool::experiments
