#pragma once

// Zeno-like cooling: alternate evolution for tau with a post-selected rank-k
// projective measurement on the regulator, N times, and track how close each
// target qudit gets to the low-lying mixture the regulator was prepared in.

#include <optional>
#include <variant>
#include <vector>

#include "subcool/evolution.hpp"
#include "subcool/hamiltonians.hpp"
#include "subcool/qudit.hpp"

namespace subcool {

/// Outcome probabilities below this are treated as an extinct branch.
inline constexpr double kExtinctionThreshold = 1e-14;

struct ProtocolConfig {
  SystemLayout layout;
  HamiltonianSpec hamiltonian = XXZParams{};
  double tau = 1.0;
  int steps = 1;  ///< N
  int rank = 1;   ///< k of the post-selected projector P_1^(k)
  /// Rank of the regulator's initial low-lying mixture; defaults to `rank`.
  std::optional<int> regulator_prep;
  /// Inverse temperature per target qudit; empty means all zero.
  std::vector<double> target_betas;
  /// Present for open-system runs.
  std::optional<BathSpec> bath;
  /// Field whose S^z ordering defines the fidelity reference state. Defaults
  /// to the Hamiltonian's field; only diagnostics override it.
  std::optional<double> reference_field;

  int prep_rank() const { return regulator_prep.value_or(rank); }
  /// Field that orders the local eigenbasis (projector, preparations).
  double basis_field() const { return local_field(hamiltonian); }
  double beta(int target) const;
  void validate() const;
};

struct StepRecord {
  int step = 0;
  std::vector<double> fidelities;  ///< one per target, B_1 first
  double step_probability = 1.0;
  double cumulative_probability = 1.0;
  double log_cumulative_probability = 0.0;
};

struct TrajectoryRecord {
  std::vector<double> initial_fidelities;
  std::vector<StepRecord> steps;
  /// Reduced states of the targets after the last step.
  std::vector<DensityMatrix> final_states;
  /// Largest |Tr E(rho) - 1| seen across open-system steps (0 when closed).
  double max_trace_drift = 0.0;

  double cumulative_probability() const;
  double log_cumulative_probability() const;
  const std::vector<double>& final_fidelities() const;
};

struct MeasurementOutcome {
  DensityMatrix state;
  double probability;
};

/// ((P (x) I) rho (P (x) I) / p, p). Throws ExtinctionError (step 0) when
/// p < kExtinctionThreshold.
MeasurementOutcome apply_measurement(const DensityMatrix& rho, const Projector& proj);

/// Evolution between measurements: exp(-iH tau) or an LME solution map.
using StepMap = std::variant<Matrix, LindbladPropagator>;

/// Builds the evolution map for `config` (unitary unless a bath is set).
StepMap build_step_map(const ProtocolConfig& config);

TrajectoryRecord zeno_run(const ProtocolConfig& config);

/// Runs with a precomputed evolution map. Lets sweeps share one
/// diagonalization across configs that differ only in rank or preparation.
TrajectoryRecord zeno_run(const ProtocolConfig& config, const StepMap& map);

struct ZenoSpectrum {
  /// Eigenvalues of M = (P (x) I) U(tau), by descending modulus.
  std::vector<Complex> eigenvalues;
  Vector dominant_right;  ///< unit norm
  Vector dominant_left;   ///< scaled so <L|R> = 1 when nonzero
  /// False when the two leading moduli agree within 1e-9.
  bool dominant_simple = true;
};

ZenoSpectrum zeno_spectrum(const ProtocolConfig& config);

/// Reduced state of target `site` in the normalized |R_max><R_max|.
DensityMatrix dominant_reduced_state(const ZenoSpectrum& spectrum,
                                     const SystemLayout& layout, int site);

enum class RegulatorPolicy {
  matched,  ///< each rank's run prepares its own rank mixture
  fixed,    ///< both runs keep the configured regulator preparation
};

struct DeltaP {
  double p_rank_k = 0.0;
  double p_rank_k_minus_1 = 0.0;
  double delta = 0.0;
};

/// p_1^(k)(N) - p_1^(k-1)(N).
DeltaP delta_p(const ProtocolConfig& config, int k,
               RegulatorPolicy policy = RegulatorPolicy::matched);

}  // namespace subcool
