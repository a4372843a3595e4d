#pragma once

// Closed-form rank-1 fidelities of the target qudit for a single regulator
// plus one maximally mixed target (L = 1), used to validate the engine.

namespace subcool::oracles {

/// XX chain (Delta = 0), rank-1 projector, d in {2, 3, 4, 5}.
///
/// For d = 3, 4, 5 the expressions hold for spin-s matrices with coupling
/// J(SxSx + SySy). The d = 2 expression (1 + cos^{2N}(2 J tau))^{-1} is
/// written for the Pauli-normalized coupling J(sx sx + sy sy), i.e.
/// 4 J (SxSx + SySy); see coupling_scale().
double fidelity_xx_rank1(int d, int N, double jtau);

/// BBH chain, d = 3, rank-1 projector.
double fidelity_bbh_rank1_d3(int N, double theta, double jtau);

/// Factor to multiply J by when simulating the model that
/// fidelity_xx_rank1(d, ...) describes: 4 for d = 2, 1 otherwise.
double coupling_scale(int d);

}  // namespace subcool::oracles
