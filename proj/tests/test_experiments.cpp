#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "subcool/experiments.hpp"
#include "subcool/oracles.hpp"

using namespace subcool;
using namespace subcool::experiments;

namespace {

const char* kMinimal = R"({
  "layout": {"topology": "chain", "L": 1, "d": 3},
  "model": {"type": "xxz", "J": 1.0, "Delta": 0.0, "h": 1.0},
  "protocol": {"Jtau": 1.2, "N": 10, "k": 1}
})";

const char* kContour = R"({
  "preset_id": "contour",
  "layout": {"topology": "chain", "L": 1, "d": 3},
  "model": {"type": "xxz", "J": 1.0, "Delta": 1.0, "h": 1.0},
  "protocol": {"k": 2},
  "axes": {"d": [3, 4], "Jtau": [0.0, 0.5, 1.0, 1.5, 2.0, 2.5], "N": [1, 5, 20]}
})";

std::string expect_config_error(const std::string& text) {
  try {
    parse_sweep_spec(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  ADD_FAILURE() << "no ConfigError for " << text;
  return {};
}

std::string csv_text(const SweepResult& r) {
  std::ostringstream out;
  write_csv(out, r.rows);
  return out.str();
}

}  // namespace

TEST(Config, MinimalRunMatchesClosedForm) {
  const auto result = run_sweep(parse_sweep_spec(kMinimal));
  ASSERT_EQ(result.rows.size(), 10u);
  for (const auto& row : result.rows) {
    EXPECT_EQ(row.site, 1);
    EXPECT_EQ(row.model, "xxz");
    EXPECT_NEAR(row.fidelity, oracles::fidelity_xx_rank1(3, row.step, 1.2), 1e-10);
  }
  EXPECT_EQ(result.extinctions, 0u);
}

TEST(Config, EmptyAxisNamesField) {
  EXPECT_EQ(expect_config_error(R"({
    "layout": {"d": 3}, "model": {"type": "xxz"}, "protocol": {"N": 5},
    "axes": {"Jtau": []}})"),
            "axes.Jtau");
}

TEST(Config, RejectsUnknownAndMalformedFields) {
  EXPECT_EQ(expect_config_error(R"({"layout": {"d": 3, "colour": 1}, "model": {"type": "xxz"}})"),
            "layout.colour");
  EXPECT_EQ(expect_config_error(R"({"layout": {"d": 3}, "model": {"type": "heisenberg"}})"),
            "model.type");
  EXPECT_FALSE(expect_config_error(R"({"layout": {"L": 1}, "model": {"type": "xxz"}})").empty());
  EXPECT_FALSE(
      expect_config_error(R"({"layout": {"d": 3}, "model": {"type": "xxz", "h": 0}})").empty());
  EXPECT_FALSE(expect_config_error(
                   R"({"layout": {"d": 3}, "model": {"type": "xxz"}, "protocol": {"tau": 1, "Jtau": 1}})")
                   .empty());
  EXPECT_THROW(parse_sweep_spec("{not json"), InvalidArgument);
}

TEST(Config, GridPointValidationNamesPoint) {
  // k = 4 is fine for d = 4 but not for d = 3.
  EXPECT_THROW(expand_grid(parse_sweep_spec(R"({
    "layout": {"d": 3}, "model": {"type": "xxz"}, "protocol": {"tau": 1},
    "axes": {"d": [3, 4], "k": [4]}})")),
               ConfigError);
}

TEST(Config, GridOrderAndSize) {
  const auto grid = expand_grid(parse_sweep_spec(kContour));
  ASSERT_EQ(grid.size(), 12u);
  EXPECT_EQ(grid.front().config.layout.d, 3);
  EXPECT_EQ(grid.back().config.layout.d, 4);
  EXPECT_EQ(grid[0].config.steps, 20);
  EXPECT_EQ(grid[0].record_steps, (std::vector<int>{1, 5, 20}));
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(grid[i].index, i);
}

TEST(Csv, RoundTrip) {
  const auto result = run_sweep(parse_sweep_spec(kContour));
  std::istringstream in(csv_text(result));
  const auto back = read_csv(in);
  ASSERT_EQ(back.size(), result.rows.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].d, result.rows[i].d);
    EXPECT_EQ(back[i].step, result.rows[i].step);
    EXPECT_EQ(back[i].fidelity, result.rows[i].fidelity);
    EXPECT_EQ(back[i].log_cum_probability, result.rows[i].log_cum_probability);
    EXPECT_EQ(back[i].preset_id, "contour");
  }
}

TEST(Sweep, DeterministicAndWorkerIndependent) {
  const auto spec = parse_sweep_spec(kContour);
  const std::string one = csv_text(run_sweep(spec, 1));
  EXPECT_EQ(one, csv_text(run_sweep(spec, 1)));
  EXPECT_EQ(one, csv_text(run_sweep(spec, 3)));
}

TEST(Sweep, WritesCsvAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "subcool_test_outputs";
  std::filesystem::remove_all(dir);
  const SweepSpec spec = parse_sweep_spec(kMinimal);
  const auto result = run_sweep(spec);
  const auto out = write_outputs(std::span<const SweepSpec>(&spec, 1), result, dir);
  EXPECT_TRUE(std::filesystem::exists(out.csv));
  EXPECT_TRUE(std::filesystem::exists(out.manifest));
  EXPECT_EQ(out.rows, 10u);
  std::ifstream csv(out.csv);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, csv_header());
  std::filesystem::remove_all(dir);
}

TEST(Regions, ThresholdZeroHasNoImperfectPoints) {
  const auto result = run_sweep(parse_sweep_spec(kContour));
  const auto none = classify_regions(result.rows, 0.0);
  for (const auto& s : none.series) {
    // Jtau = 0 keeps F = 1/d > 0.
    EXPECT_TRUE(s.imperfect.empty());
    EXPECT_EQ(s.points.size(), 6u);
  }
  const auto all = classify_regions(result.rows, 1.5);
  for (const auto& s : all.series) EXPECT_EQ(s.imperfect.size(), 6u);
}

TEST(Regions, ZeroJtauIsImperfect) {
  const auto result = run_sweep(parse_sweep_spec(kContour));
  const auto summary = classify_regions(result.rows);
  ASSERT_EQ(summary.series.size(), 2u);
  for (const auto& s : summary.series) {
    ASSERT_FALSE(s.imperfect.empty());
    EXPECT_DOUBLE_EQ(s.imperfect.front(), 0.0);
  }
}

TEST(Regions, RejectsNonGridRows) {
  auto rows = run_sweep(parse_sweep_spec(kContour)).rows;
  rows.pop_back();
  EXPECT_THROW(classify_regions(rows), InvalidArgument);
}

TEST(Presets, KnownIds) {
  const auto ids = preset_ids();
  for (const char* id :
       {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig_chain", "fig_star", "fig8"}) {
    EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
  }
  EXPECT_THROW(make_preset("fig99"), InvalidArgument);
}

TEST(Presets, QutritXXReachesGroundState) {
  const auto preset = make_preset("fig2");
  const auto result = run_sweeps(preset.sweeps);
  double best = 0.0;
  for (const auto& row : result.rows) {
    if (row.d == 3 && std::abs(row.J * row.tau - 1.2) < 1e-12) best = std::max(best, row.fidelity);
  }
  EXPECT_GT(best, 0.999);
}

TEST(Presets, DeltaPTableFromFig6) {
  const auto preset = make_preset("fig6");
  ASSERT_TRUE(preset.emits_delta_p);
  const auto table = delta_p_table(run_sweeps(preset.sweeps));
  bool found = false;
  for (const auto& r : table) {
    if (r.d == 4 && r.k == 2 && r.step == 50) {
      EXPECT_NEAR(r.delta_p, 0.14426828898288219, 1e-12);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(OracleCheck, PassesAndDetectsFlippedReference) {
  EXPECT_TRUE(oracle_check().passed());
  OracleCheckOptions flipped;
  flipped.flip_reference = true;
  EXPECT_FALSE(oracle_check(flipped).passed());
}
