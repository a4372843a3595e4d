#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "json_support.hpp"

#ifndef SUBCOOL_VERSION
#define SUBCOOL_VERSION "unknown"
#endif

namespace subcool::experiments {

namespace {

using detail::format_number;
using detail::Json;

constexpr const char* kColumns[] = {
    "preset_id",  "topology",        "model",          "d",
    "L",          "k",               "J",              "Delta_or_theta",
    "tau",        "N_step",          "site",           "fidelity",
    "step_probability", "cum_probability", "log_cum_probability", "grid_index",
    "extinct"};

struct Job {
  GridPoint point;
  const SweepSpec* sweep = nullptr;
};

bool same_dynamics(const ProtocolConfig& a, const ProtocolConfig& b) {
  if (a.layout.topology != b.layout.topology || a.layout.targets != b.layout.targets ||
      a.layout.d != b.layout.d || a.tau != b.tau) {
    return false;
  }
  if (a.hamiltonian.index() != b.hamiltonian.index() ||
      coupling(a.hamiltonian) != coupling(b.hamiltonian) ||
      local_field(a.hamiltonian) != local_field(b.hamiltonian) ||
      shape_parameter(a.hamiltonian) != shape_parameter(b.hamiltonian)) {
    return false;
  }
  if (a.bath.has_value() != b.bath.has_value()) return false;
  if (a.bath) {
    const auto &x = *a.bath, &y = *b.bath;
    if (x.temperature != y.temperature || x.gamma != y.gamma || x.omega != y.omega ||
        x.target_site != y.target_site) {
      return false;
    }
  }
  return true;
}

ResultRow row_template(const Job& job) {
  const ProtocolConfig& c = job.point.config;
  ResultRow r;
  r.preset_id = job.sweep->preset_id;
  r.topology = to_string(c.layout.topology);
  r.model = model_name(c.hamiltonian);
  r.d = c.layout.d;
  r.L = c.layout.targets;
  r.k = c.rank;
  r.J = coupling(c.hamiltonian);
  r.delta_or_theta = shape_parameter(c.hamiltonian);
  r.tau = c.tau;
  r.grid_index = job.point.index;
  return r;
}

bool recorded(const std::vector<int>& steps, int step) {
  return steps.empty() || std::binary_search(steps.begin(), steps.end(), step);
}

void append_trajectory(const Job& job, const TrajectoryRecord& t,
                       std::vector<ResultRow>& out) {
  const ResultRow base = row_template(job);
  for (const auto& s : t.steps) {
    if (!recorded(job.point.record_steps, s.step)) continue;
    for (std::size_t j = 0; j < s.fidelities.size(); ++j) {
      ResultRow r = base;
      r.step = s.step;
      r.site = static_cast<int>(j) + 1;
      r.fidelity = s.fidelities[j];
      r.step_probability = s.step_probability;
      r.cum_probability = s.cumulative_probability;
      r.log_cum_probability = s.log_cumulative_probability;
      out.push_back(std::move(r));
    }
  }
}

struct PointResult {
  std::vector<ResultRow> rows;
  bool extinct = false;
  double drift = 0.0;
};

PointResult run_point(const Job& job, const StepMap& map) {
  PointResult res;
  const ProtocolConfig& c = job.point.config;
  try {
    const auto t = zeno_run(c, map);
    append_trajectory(job, t, res.rows);
    res.drift = t.max_trace_drift;
  } catch (const ExtinctionError& e) {
    // Keep the steps that survived, then flag the step that died.
    res.extinct = true;
    if (e.step() > 1) {
      ProtocolConfig shorter = c;
      shorter.steps = e.step() - 1;
      const auto t = zeno_run(shorter, map);
      append_trajectory(job, t, res.rows);
      res.drift = t.max_trace_drift;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int j = 1; j <= c.layout.targets; ++j) {
      ResultRow r = row_template(job);
      r.step = e.step();
      r.site = j;
      r.fidelity = nan;
      r.step_probability = e.probability();
      r.cum_probability = nan;
      r.log_cum_probability = nan;
      r.extinct = true;
      res.rows.push_back(std::move(r));
    }
  }
  return res;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

double parse_double(const std::string& s, std::size_t line, const char* column) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("line " + std::to_string(line) + ": column " + column +
                        ": malformed number '" + s + "'");
}

long long parse_integer(const std::string& s, std::size_t line, const char* column) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("line " + std::to_string(line) + ": column " + column +
                        ": malformed integer '" + s + "'");
}

}  // namespace

SweepResult run_sweeps(std::span<const SweepSpec> sweeps, int workers) {
  std::vector<Job> jobs;
  for (const auto& sweep : sweeps) {
    for (auto& g : expand_grid(sweep)) {
      g.index = jobs.size();
      jobs.push_back({std::move(g), &sweep});
    }
  }

  // Consecutive points with identical dynamics share one diagonalization.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < jobs.size();) {
    std::size_t j = i + 1;
    while (j < jobs.size() && same_dynamics(jobs[i].point.config, jobs[j].point.config)) ++j;
    groups.emplace_back(i, j);
    i = j;
  }

  std::vector<PointResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(groups.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t g = next++; g < groups.size(); g = next++) {
      try {
        const auto [begin, end] = groups[g];
        const StepMap map = build_step_map(jobs[begin].point.config);
        for (std::size_t i = begin; i < end; ++i) results[i] = run_point(jobs[i], map);
      } catch (...) {
        errors[g] = std::current_exception();
      }
    }
  };

  const std::size_t n_threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                              std::max<std::size_t>(groups.size(), 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& r = results[i];
    if (r.extinct) ++out.extinctions;
    out.max_trace_drift = std::max(out.max_trace_drift, r.drift);
    out.rows.insert(out.rows.end(), std::make_move_iterator(r.rows.begin()),
                    std::make_move_iterator(r.rows.end()));
    out.grid.push_back(std::move(jobs[i].point));
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
  return run_sweeps(std::span<const SweepSpec>(&spec, 1), workers);
}

std::string csv_header() {
  std::string h;
  for (const char* c : kColumns) {
    if (!h.empty()) h += ',';
    h += c;
  }
  return h;
}

std::string format_row(const ResultRow& r) {
  std::string s = csv_field(r.preset_id);
  const auto put = [&](const std::string& field) {
    s += ',';
    s += field;
  };
  put(r.topology);
  put(r.model);
  put(format_number(r.d));
  put(format_number(r.L));
  put(format_number(r.k));
  put(format_number(r.J));
  put(format_number(r.delta_or_theta));
  put(format_number(r.tau));
  put(format_number(r.step));
  put(format_number(r.site));
  put(format_number(r.fidelity));
  put(format_number(r.step_probability));
  put(format_number(r.cum_probability));
  put(format_number(r.log_cum_probability));
  put(std::to_string(r.grid_index));
  put(r.extinct ? "1" : "0");
  return s;
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << csv_header() << '\n';
  for (const auto& r : rows) out << format_row(r) << '\n';
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* c : kColumns) {
    if (std::string(c) == "grid_index" || std::string(c) == "extinct") continue;
    if (!col.count(c)) throw InvalidArgument(std::string("CSV is missing column '") + c + "'");
  }

  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(f.size()));
    }
    const auto get = [&](const char* c) -> const std::string& { return f[col.at(c)]; };
    const auto num = [&](const char* c) { return parse_double(get(c), line_no, c); };
    const auto integer = [&](const char* c) {
      return static_cast<int>(parse_integer(get(c), line_no, c));
    };
    ResultRow r;
    r.preset_id = get("preset_id");
    r.topology = get("topology");
    r.model = get("model");
    r.d = integer("d");
    r.L = integer("L");
    r.k = integer("k");
    r.J = num("J");
    r.delta_or_theta = num("Delta_or_theta");
    r.tau = num("tau");
    r.step = integer("N_step");
    r.site = integer("site");
    r.fidelity = num("fidelity");
    r.step_probability = num("step_probability");
    r.cum_probability = num("cum_probability");
    r.log_cum_probability = num("log_cum_probability");
    if (col.count("grid_index")) {
      r.grid_index = static_cast<std::size_t>(parse_integer(get("grid_index"), line_no, "grid_index"));
    }
    if (col.count("extinct")) r.extinct = integer("extinct") != 0;
    rows.push_back(std::move(r));
  }
  return rows;
}

RunOutputs write_outputs(std::span<const SweepSpec> sweeps, const SweepResult& result,
                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunOutputs out;
  out.csv = out_dir / "results.csv";
  out.manifest = out_dir / "manifest.json";
  out.rows = result.rows.size();
  out.extinctions = result.extinctions;

  {
    std::ofstream f(out.csv, std::ios::binary);
    if (!f) throw Error("cannot write '" + out.csv.string() + "'");
    write_csv(f, result.rows);
  }

  Json m;
  m["engine"] = "subcool";
  m["version"] = SUBCOOL_VERSION;
  Json columns = Json::array();
  for (const char* c : kColumns) columns.push_back(c);
  m["columns"] = columns;
  Json specs = Json::array();
  for (const auto& s : sweeps) specs.push_back(detail::to_json(s));
  m["sweeps"] = specs;

  // Index ranges per sweep, then the full parameter set of every point.
  Json grid = Json::array();
  std::size_t sweep_index = 0;
  std::size_t remaining = sweeps.empty() ? 0 : expand_grid(sweeps[0]).size();
  for (const auto& g : result.grid) {
    while (remaining == 0 && sweep_index + 1 < sweeps.size()) {
      ++sweep_index;
      remaining = expand_grid(sweeps[sweep_index]).size();
    }
    --remaining;
    Json p = detail::to_json(g.config);
    Json entry;
    entry["index"] = g.index;
    entry["sweep"] = sweep_index;
    for (auto& [key, value] : p.items()) entry[key] = value;
    grid.push_back(entry);
  }
  m["grid"] = grid;
  m["row_count"] = result.rows.size();
  m["extinctions"] = result.extinctions;
  m["max_trace_drift"] = result.max_trace_drift;

  std::ofstream f(out.manifest, std::ios::binary);
  if (!f) throw Error("cannot write '" + out.manifest.string() + "'");
  f << detail::dump(m);
  return out;
}

RunOutputs run_config(const std::filesystem::path& config,
                      const std::filesystem::path& out_dir, int workers) {
  const SweepSpec spec = load_sweep_spec(config);
  const auto result = run_sweep(spec, workers);
  return write_outputs(std::span<const SweepSpec>(&spec, 1), result, out_dir);
}

}  // namespace subcool::experiments
