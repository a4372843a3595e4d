#include <algorithm>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <tuple>

#include "json_support.hpp"

namespace subcool::experiments {

namespace {

using std::numbers::pi;

std::vector<int> range(int lo, int hi) {
  std::vector<int> v(static_cast<std::size_t>(hi - lo + 1));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) {
    v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  }
  return v;
}

SweepSpec chain(const std::string& id, int L, int d, HamiltonianSpec h, int k) {
  SweepSpec s;
  s.preset_id = id;
  s.base.layout = {Topology::chain, L, d};
  s.base.hamiltonian = h;
  s.base.rank = k;
  return s;
}

Preset fig2(const PresetOptions& o) {
  Preset p{"fig2", "XX chain, rank-1, F vs N for d = 2..5 at Jtau = 1.2 and 4.5", {}, false};
  auto s = chain("fig2", 1, 2, XXZParams{1.0, 0.0, 1.0}, 1);
  s.axes.d = {2, 3, 4, 5};
  s.axes.jtau = {1.2, 4.5};
  s.axes.steps = range(1, o.max_steps);
  p.sweeps.push_back(s);
  return p;
}

Preset fig3(const PresetOptions& o) {
  Preset p{"fig3", "BBH chain, rank-1, F vs N for four theta values at Jtau = 1", {}, false};
  auto s = chain("fig3", 1, 3, BBHParams{1.0, 0.0, 1.0}, 1);
  s.axes.d = {3, 4};
  s.axes.theta = {pi / 2, -pi / 8, 3 * pi / 4, -5 * pi / 8};
  s.axes.jtau = {1.0};
  s.axes.steps = range(1, o.max_steps);
  p.sweeps.push_back(s);
  return p;
}

Preset fig4(const PresetOptions& o) {
  Preset p{"fig4", "XXZ Delta = 1, rank-2, F over the (Jtau, N) plane", {}, false};
  auto s = chain("fig4", 1, 2, XXZParams{1.0, 1.0, 1.0}, 2);
  s.axes.d = {2, 3, 4};
  if (o.include_d5) s.axes.d.push_back(5);
  s.axes.jtau = linspace(0.0, 2 * pi, o.jtau_points);
  s.axes.steps = range(1, o.max_steps);
  p.sweeps.push_back(s);
  return p;
}

Preset fig5(const PresetOptions& o) {
  Preset p{"fig5", "XXZ rank-2, F vs Jtau after N = 100 for Delta = 0 and 1", {}, false};
  auto s = chain("fig5", 1, 2, XXZParams{1.0, 1.0, 1.0}, 2);
  s.axes.d = {2, 3, 4, 5};
  s.axes.delta = {0.0, 1.0};
  s.axes.jtau = linspace(0.0, 2 * pi, o.jtau_points);
  s.axes.steps = {100};
  p.sweeps.push_back(s);
  return p;
}

Preset fig6(const PresetOptions&) {
  Preset p{"fig6", "XXZ Delta = 1, Delta p for ranks 2 and 1 vs d and N at Jtau = 1.2", {}, true};
  auto s = chain("fig6", 1, 3, XXZParams{1.0, 1.0, 1.0}, 1);
  s.axes.d = range(3, 10);
  s.axes.k = {1, 2};
  s.axes.jtau = {1.2};
  s.axes.steps = range(1, 100);
  p.sweeps.push_back(s);
  return p;
}

Preset fig7(const PresetOptions&) {
  Preset p{"fig7", "d = 31 XXZ Delta = 1, p and F vs rank k = 1..15 at Jtau = 3", {}, false};
  auto s = chain("fig7", 1, 31, XXZParams{1.0, 1.0, 1.0}, 1);
  s.axes.k = range(1, 15);
  s.axes.jtau = {3.0};
  s.axes.steps = range(1, 50);
  p.sweeps.push_back(s);
  return p;
}

Preset fig_chain(const PresetOptions& o) {
  Preset p{"fig_chain", "L = 4, d = 3, rank-2 chain: XXZ over (Jtau, N), BBH over (theta, N)",
           {}, false};
  auto xxz = chain("fig_chain", 4, 3, XXZParams{1.0, 1.0, 1.0}, 2);
  xxz.axes.jtau = linspace(0.0, 2 * pi, o.jtau_points);
  xxz.axes.steps = range(1, o.max_steps);
  p.sweeps.push_back(xxz);
  auto bbh = chain("fig_chain", 4, 3, BBHParams{1.0, 0.0, 1.0}, 2);
  bbh.axes.theta = linspace(-pi, pi, o.jtau_points);
  bbh.axes.jtau = {1.0};
  bbh.axes.steps = range(1, o.max_steps);
  p.sweeps.push_back(bbh);
  return p;
}

Preset fig_star(const PresetOptions& o) {
  Preset p{"fig_star", "spin star, L = 4, d = 3, rank-2, F over the (Jtau, N) plane", {}, false};
  SweepSpec s;
  s.preset_id = "fig_star";
  s.base.layout = {Topology::star, 4, 3};
  s.base.hamiltonian = SpinStarParams{1.0, 1.0};
  s.base.rank = 2;
  s.axes.jtau = linspace(0.0, 2 * pi, o.jtau_points);
  s.axes.steps = range(1, o.max_steps);
  p.sweeps.push_back(s);
  return p;
}

Preset fig8(const PresetOptions& o) {
  Preset p{"fig8", "XXZ Delta = 1, rank-2, last target coupled to a bath at T_E = 1", {}, false};
  auto s = chain("fig8", 1, 3, XXZParams{1.0, 1.0, 1.0}, 2);
  BathSpec bath;
  bath.temperature = 1.0;
  bath.gamma = 1e-3;
  bath.omega = 1.0;
  bath.target_site = 1;
  s.base.bath = bath;
  s.axes.d = {3, 4};
  s.axes.jtau = linspace(0.0, 2 * pi, o.jtau_points);
  s.axes.steps = range(1, o.max_steps);
  p.sweeps.push_back(s);
  return p;
}

using Factory = Preset (*)(const PresetOptions&);

const std::vector<std::pair<std::string, Factory>>& registry() {
  static const std::vector<std::pair<std::string, Factory>> r = {
      {"fig2", fig2}, {"fig3", fig3},           {"fig4", fig4},
      {"fig5", fig5}, {"fig6", fig6},           {"fig7", fig7},
      {"fig_chain", fig_chain}, {"fig_star", fig_star}, {"fig8", fig8}};
  return r;
}

}  // namespace

std::vector<std::string> preset_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, f] : registry()) ids.push_back(id);
  return ids;
}

Preset make_preset(const std::string& id, const PresetOptions& options) {
  if (options.jtau_points < 1) throw InvalidArgument("jtau_points must be >= 1");
  if (options.max_steps < 1) throw InvalidArgument("max_steps must be >= 1");
  for (const auto& [name, factory] : registry()) {
    if (name == id) return factory(options);
  }
  std::string known;
  for (const auto& name : preset_ids()) known += (known.empty() ? "" : ", ") + name;
  throw InvalidArgument("unknown preset '" + id + "' (known: " + known + ")");
}

std::vector<DeltaPRow> delta_p_table(const SweepResult& result) {
  using Key = std::tuple<std::string, std::string, std::string, int, int, double, double,
                         double, int>;
  std::map<Key, std::map<int, double>> by_rank;
  for (const auto& r : result.rows) {
    if (r.site != 1 || r.extinct) continue;
    by_rank[{r.preset_id, r.topology, r.model, r.d, r.L, r.J, r.delta_or_theta, r.tau,
             r.step}][r.k] = r.cum_probability;
  }
  std::vector<DeltaPRow> out;
  for (const auto& [key, ranks] : by_rank) {
    for (const auto& [k, p] : ranks) {
      const auto lower = ranks.find(k - 1);
      if (lower == ranks.end()) continue;
      DeltaPRow row;
      row.d = std::get<3>(key);
      row.k = k;
      row.step = std::get<8>(key);
      row.p_rank_k = p;
      row.p_rank_k_minus_1 = lower->second;
      row.delta_p = p - lower->second;
      out.push_back(row);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DeltaPRow& a, const DeltaPRow& b) {
    return std::tie(a.d, a.k, a.step) < std::tie(b.d, b.k, b.step);
  });
  return out;
}

RunOutputs run_preset(const std::string& id, const std::filesystem::path& out_dir,
                      int workers, const PresetOptions& options) {
  const Preset preset = make_preset(id, options);
  const auto result = run_sweeps(preset.sweeps, workers);
  RunOutputs out = write_outputs(preset.sweeps, result, out_dir);
  if (preset.emits_delta_p) {
    const auto path = out_dir / "delta_p.csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << "d,k,N_step,p_rank_k,p_rank_k_minus_1,delta_p\n";
    for (const auto& r : delta_p_table(result)) {
      f << r.d << ',' << r.k << ',' << r.step << ',' << detail::format_number(r.p_rank_k)
        << ',' << detail::format_number(r.p_rank_k_minus_1) << ','
        << detail::format_number(r.delta_p) << '\n';
    }
    out.extra.push_back(path);
  }
  return out;
}

}  // namespace subcool::experiments
