#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>

#include "json_support.hpp"
#include "subcool/oracles.hpp"

namespace subcool::experiments {

namespace {

ProtocolConfig rank1_chain(int d, HamiltonianSpec h, double tau, int steps, bool flip) {
  ProtocolConfig c;
  c.layout = {Topology::chain, 1, d};
  c.hamiltonian = h;
  c.tau = tau;
  c.steps = steps;
  c.rank = 1;
  if (flip) c.reference_field = -local_field(h);
  return c;
}

double max_step_deviation(const ProtocolConfig& c, const std::function<double(int)>& oracle) {
  const auto t = zeno_run(c);
  double worst = 0.0;
  for (const auto& s : t.steps) {
    const double dev = std::abs(s.fidelities.front() - oracle(s.step));
    // NaN must never look like agreement.
    worst = std::isnan(dev) ? std::numeric_limits<double>::infinity() : std::max(worst, dev);
  }
  return worst;
}

}  // namespace

bool OracleReport::passed() const {
  return !grids.empty() &&
         std::all_of(grids.begin(), grids.end(), [](const auto& g) { return g.passed(); });
}

OracleReport oracle_check(const OracleCheckOptions& options) {
  OracleReport report;
  constexpr int kXXSteps = 50;
  for (int d = 2; d <= 5; ++d) {
    OracleGridReport g;
    g.model = "xx";
    g.d = d;
    g.tolerance = options.tolerance;
    const double J = oracles::coupling_scale(d);
    for (int i = 0; i <= 62; ++i) {
      const double jtau = 0.1 * i;
      const auto c = rank1_chain(d, XXZParams{J, 0.0, 1.0}, jtau, kXXSteps,
                                 options.flip_reference);
      g.max_deviation = std::max(
          g.max_deviation, max_step_deviation(c, [&](int n) {
            return oracles::fidelity_xx_rank1(d, n, jtau);
          }));
      g.points += kXXSteps;
    }
    report.grids.push_back(g);
  }

  constexpr int kBBHSteps = 100;
  using std::numbers::pi;
  OracleGridReport g;
  g.model = "bbh";
  g.d = 3;
  g.tolerance = options.tolerance;
  for (double theta : {-5 * pi / 8, -pi / 8, pi / 2, 3 * pi / 4}) {
    const auto c = rank1_chain(3, BBHParams{1.0, theta, 1.0}, 1.0, kBBHSteps,
                               options.flip_reference);
    g.max_deviation = std::max(g.max_deviation, max_step_deviation(c, [&](int n) {
                                 return oracles::fidelity_bbh_rank1_d3(n, theta, 1.0);
                               }));
    g.points += kBBHSteps;
  }
  report.grids.push_back(g);
  return report;
}

void print_report(std::ostream& out, const OracleReport& report) {
  for (const auto& g : report.grids) {
    char line[160];
    std::snprintf(line, sizeof line, "%-4s d=%d  points=%-5zu  max|dev|=%.3e  tol=%.1e  %s\n",
                  g.model.c_str(), g.d, g.points, g.max_deviation, g.tolerance,
                  g.passed() ? "PASS" : "FAIL");
    out << line;
  }
  out << (report.passed() ? "oracle check passed\n" : "oracle check FAILED\n");
}

std::string spectrum_json(const ProtocolConfig& config, const ZenoSpectrum& spectrum) {
  using detail::Json;
  const auto complex_list = [](const auto& values) {
    Json a = Json::array();
    for (const Complex z : values) a.push_back({z.real(), z.imag()});
    return a;
  };
  Json j;
  j["config"] = detail::to_json(config);
  j["eigenvalues"] = complex_list(spectrum.eigenvalues);
  Json moduli = Json::array();
  for (const auto& z : spectrum.eigenvalues) moduli.push_back(std::abs(z));
  j["moduli"] = moduli;
  j["dominant_simple"] = spectrum.dominant_simple;
  j["dominant_right"] = complex_list(spectrum.dominant_right);
  j["dominant_left"] = complex_list(spectrum.dominant_left);

  Json reduced = Json::array();
  if (spectrum.dominant_right.size() > 0) {
    for (int site = 1; site <= config.layout.targets; ++site) {
      const auto rho = dominant_reduced_state(spectrum, config.layout, site);
      Json m = Json::array();
      for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) {
          row.push_back({rho.matrix()(r, c).real(), rho.matrix()(r, c).imag()});
        }
        m.push_back(row);
      }
      reduced.push_back({{"site", site}, {"state", m}});
    }
  }
  j["dominant_reduced_states"] = reduced;
  return detail::dump(j);
}

}  // namespace subcool::experiments
