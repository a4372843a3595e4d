#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "json_support.hpp"

namespace subcool::experiments {

RegionSummary classify_regions(std::span<const ResultRow> rows, double threshold) {
  if (!std::isfinite(threshold)) throw InvalidArgument("threshold must be finite");

  using SeriesKey = std::tuple<std::string, std::string, std::string, int, int, int, double,
                               double, int>;
  struct Cell {
    std::set<int> steps;
    double best = -1.0;
    int best_step = 0;
  };
  std::map<SeriesKey, std::map<double, Cell>> series;

  std::size_t used = 0;
  for (const auto& r : rows) {
    if (r.extinct || std::isnan(r.fidelity)) continue;
    ++used;
    const SeriesKey key{r.preset_id, r.topology, r.model, r.d, r.L, r.k, r.J,
                        r.delta_or_theta, r.site};
    Cell& cell = series[key][r.J * r.tau];
    if (!cell.steps.insert(r.step).second) {
      throw InvalidArgument("not a (Jtau x N) grid: duplicate row for d=" +
                            std::to_string(r.d) + ", site " + std::to_string(r.site) +
                            ", Jtau=" + detail::format_number(r.J * r.tau) + ", N=" +
                            std::to_string(r.step));
    }
    if (r.fidelity > cell.best) {
      cell.best = r.fidelity;
      cell.best_step = r.step;
    }
  }
  if (used == 0) throw InvalidArgument("no usable rows to classify");

  RegionSummary out;
  out.threshold = threshold;
  for (const auto& [key, cells] : series) {
    const auto& steps = cells.begin()->second.steps;
    for (const auto& [jtau, cell] : cells) {
      if (cell.steps != steps) {
        throw InvalidArgument("not a (Jtau x N) grid: Jtau=" + detail::format_number(jtau) +
                              " has a different set of N than Jtau=" +
                              detail::format_number(cells.begin()->first) + " (d=" +
                              std::to_string(std::get<3>(key)) + ")");
      }
    }
    SeriesRegions s;
    s.preset_id = std::get<0>(key);
    s.model = std::get<2>(key);
    s.d = std::get<3>(key);
    s.L = std::get<4>(key);
    s.k = std::get<5>(key);
    s.delta_or_theta = std::get<7>(key);
    s.site = std::get<8>(key);
    for (const auto& [jtau, cell] : cells) {
      JtauSummary p;
      p.jtau = jtau;
      p.max_fidelity = cell.best;
      p.best_step = cell.best_step;
      p.imperfect = cell.best <= threshold;
      if (p.imperfect) s.imperfect.push_back(jtau);
      s.points.push_back(p);
    }
    out.series.push_back(std::move(s));
  }
  return out;
}

std::string to_json(const RegionSummary& summary) {
  detail::Json j;
  j["threshold"] = summary.threshold;
  detail::Json list = detail::Json::array();
  for (const auto& s : summary.series) {
    detail::Json e;
    e["preset_id"] = s.preset_id;
    e["model"] = s.model;
    e["d"] = s.d;
    e["L"] = s.L;
    e["k"] = s.k;
    e["Delta_or_theta"] = s.delta_or_theta;
    e["site"] = s.site;
    detail::Json points = detail::Json::array();
    for (const auto& p : s.points) {
      points.push_back({{"Jtau", p.jtau},
                        {"max_fidelity", p.max_fidelity},
                        {"best_N", p.best_step},
                        {"imperfect", p.imperfect}});
    }
    e["points"] = points;
    e["imperfect_Jtau"] = s.imperfect;
    list.push_back(e);
  }
  j["series"] = list;
  return detail::dump(j);
}

}  // namespace subcool::experiments
