#pragma once

// Property battery shared by the unit tests and the acceptance runner.
// Each check returns the worst violation it saw over its seeded inputs.

#include <string>
#include <vector>

namespace subcool::testing {

struct PropertyResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  int cases = 0;
  bool ok() const { return worst <= tolerance; }
};

PropertyResult spin_commutators();
PropertyResult spin_casimir();
PropertyResult hamiltonian_hermiticity(unsigned seed);
PropertyResult hamiltonian_sz_conservation(unsigned seed);
PropertyResult propagator_unitarity(unsigned seed);
PropertyResult propagator_group_law(unsigned seed);
PropertyResult fidelity_bounds(unsigned seed);
PropertyResult fidelity_symmetry(unsigned seed);
PropertyResult fidelity_pure_state(unsigned seed);
PropertyResult partial_trace_recovery(unsigned seed);
/// Cumulative probability and fidelities of zeno_run against a dense
/// evaluation of Tr[(PU)^N rho(0) (U^+ P)^N] for N <= 5.
PropertyResult direct_trace_equivalence(unsigned seed);
PropertyResult zeno_modulus_bound(unsigned seed);
/// Eigen-equation residuals of the dominant left/right pair and <L|R> = 1.
PropertyResult dominant_eigenvector_consistency(unsigned seed);
/// 1 - F between zeno_run at N = 500 and the dominant right eigenvector's
/// reduced state, on configs with a simple dominant eigenvalue.
PropertyResult asymptotic_dominant_state();

std::vector<PropertyResult> run_property_suite(unsigned seed = 20240611u);

}  // namespace subcool::testing
