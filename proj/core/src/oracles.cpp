#include "subcool/oracles.hpp"

#include <cmath>
#include <string>

#include "subcool/types.hpp"

namespace subcool::oracles {

namespace {

double ipow(double base, int exponent) {
  return std::pow(base, static_cast<double>(exponent));
}

void require_steps(int N) {
  if (N < 0) throw InvalidArgument("number of measurements N must be >= 0");
}

}  // namespace

double fidelity_xx_rank1(int d, int N, double jtau) {
  require_steps(N);
  const double x = jtau;
  switch (d) {
    case 2:
      return 1.0 / (1.0 + ipow(std::cos(2.0 * x), 2 * N));
    case 3:
      return 1.0 / (1.0 + ipow(std::cos(x), 2 * N) +
                    ipow(std::cos(x / std::sqrt(2.0)), 4 * N));
    case 4: {
      const double r13 = std::sqrt(13.0);
      const double mixed = std::cos(x) * std::cos(r13 * x / 2.0) +
                           2.0 / r13 * std::sin(x) * std::sin(r13 * x / 2.0);
      return 1.0 / (1.0 + ipow(std::cos(1.5 * x), 2 * N) +
                    ipow(std::cos(std::sqrt(1.5) * x), 4 * N) + ipow(mixed, 2 * N));
    }
    case 5: {
      const double r22 = std::sqrt(22.0);
      const double r33 = std::sqrt(33.0);
      const double a = (9.0 + 11.0 * std::cos(2.0 * x) + 2.0 * std::cos(r22 * x)) / 22.0;
      const double b = ((11.0 + r33) * std::cos(0.5 * (3.0 - r33) * x) +
                        (11.0 - r33) * std::cos(0.5 * (3.0 + r33) * x)) /
                       22.0;
      return 1.0 / (1.0 + ipow(std::cos(2.0 * x), 2 * N) +
                    ipow(std::cos(std::sqrt(3.0) * x), 4 * N) + ipow(a, 2 * N) +
                    ipow(b, 2 * N));
    }
    default:
      throw InvalidArgument("no closed-form XX fidelity for d=" + std::to_string(d));
  }
}

double fidelity_bbh_rank1_d3(int N, double theta, double jtau) {
  require_steps(N);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double a10 = c;
  const double a13_minus = c - 3.0 * s;
  const double a11_minus = c - s;
  const double bracket = 7.0 + 3.0 * std::cos(2.0 * a10 * jtau) +
                         6.0 * std::cos(a13_minus * jtau) +
                         2.0 * std::cos(3.0 * a11_minus * jtau);
  return 1.0 / (1.0 + ipow(std::cos(a10 * jtau), 2 * N) + ipow(bracket / 18.0, N));
}

double coupling_scale(int d) { return d == 2 ? 4.0 : 1.0; }

}  // namespace subcool::oracles
