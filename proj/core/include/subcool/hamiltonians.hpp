#pragma once

#include <string>
#include <variant>
#include <vector>

#include "subcool/qudit.hpp"

namespace subcool {

enum class Topology { chain, star };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& name);

/// L target qudits plus one regulator, all of local dimension d.
///
/// The regulator is always site 0. On a chain it sits at the open boundary
/// next to target B_1 (site 1), with B_L farthest away at site L. On a star
/// it is the hub and sites 1..L form the ring.
struct SystemLayout {
  Topology topology = Topology::chain;
  int targets = 1;
  int d = 2;

  int sites() const noexcept { return targets + 1; }
  static constexpr int regulator_site() noexcept { return 0; }
  std::vector<int> dims() const { return std::vector<int>(sites(), d); }
  Eigen::Index dimension() const;
  void validate() const;
};

struct XXZParams {
  double J = 1.0;
  double delta = 0.0;
  double h = 1.0;
};

struct BBHParams {
  double J = 1.0;
  double theta = 0.0;  ///< radians
  double h = 1.0;
};

struct SpinStarParams {
  double J = 1.0;
  double h = 1.0;
};

using HamiltonianSpec = std::variant<XXZParams, BBHParams, SpinStarParams>;

/// "xxz", "bbh" or "star".
std::string model_name(const HamiltonianSpec& spec);
double coupling(const HamiltonianSpec& spec);
double local_field(const HamiltonianSpec& spec);
/// Delta for XXZ, theta for BBH, 0 for the spin star.
double shape_parameter(const HamiltonianSpec& spec);

/// sum_j J [SxSx + SySy + Delta SzSz]_{j,j+1} + h sum_j Sz_j on the open
/// chain; the regulator takes part in both sums.
Matrix build_xxz(const SystemLayout& layout, double J, double delta, double h);

/// J sum_j [cos(theta) S_j.S_{j+1} + sin(theta) (S_j.S_{j+1})^2] + h sum_j Sz_j.
Matrix build_bbh(const SystemLayout& layout, double J, double theta, double h);

/// h Sz_R + J sum_i (Sx_R Sx_i + Sy_R Sy_i); ring sites carry no field.
Matrix build_spin_star(int targets, int d, double J, double h);

Matrix build_hamiltonian(const SystemLayout& layout, const HamiltonianSpec& spec);

/// sum_j Sz_j over all sites (diagonal).
Matrix total_sz(const SystemLayout& layout);

}  // namespace subcool
