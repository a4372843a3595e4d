#pragma once

#include <vector>

#include "subcool/qudit.hpp"

namespace subcool {

/// Max-entry deviation |H - H^dagger|; throws InvalidArgument above `tol`.
void require_hermitian(const Matrix& H, double tol, const char* what);

/// Eigendecomposition H = V diag(E) V^dagger, reusable for many evolution
/// times.
class HermitianSpectrum {
 public:
  explicit HermitianSpectrum(const Matrix& H);

  const RealVector& energies() const noexcept { return energies_; }
  const Matrix& eigenvectors() const noexcept { return vectors_; }

  /// exp(-i H tau).
  Matrix unitary(double tau) const;

 private:
  RealVector energies_;
  Matrix vectors_;
};

struct Propagator {
  Matrix unitary;
  double tau = 0.0;
};

Propagator propagator(const Matrix& H, double tau);

/// Single-channel local master-equation bath acting on one qudit through
/// the Lindblad operator A = S^- / 2.
struct BathSpec {
  double temperature = 1.0;  ///< T_E, k_B = 1
  double gamma = 1e-3;       ///< system-bath coupling
  double omega = 1.0;        ///< channel frequency (the S^z ladder gap h)
  int target_site = 1;

  /// Bose occupation 1/(exp(omega/T_E) - 1).
  double occupancy() const;
  void validate(int sites) const;
};

/// gamma [(1+n)(A rho A^+ - {A^+A, rho}/2) + n (A^+ rho A - {AA^+, rho}/2)].
Matrix dissipator(const DensityMatrix& rho, const BathSpec& bath,
                  const SpinOperatorSet& ops);

/// Fixed-duration solution map of drho/dt = -i[H, rho] + L(rho).
///
/// Small systems exponentiate the Liouvillian on column-stacked rho once;
/// larger ones fall back to fixed-step RK4.
class LindbladPropagator {
 public:
  static constexpr Eigen::Index kMaxSuperoperatorDim = 32;

  LindbladPropagator(const Matrix& H, const BathSpec& bath,
                     std::vector<int> dims, double tau);

  Matrix apply(const Matrix& rho) const;

  double tau() const noexcept { return tau_; }
  bool uses_superoperator() const noexcept { return superop_.size() != 0; }
  int rk4_steps() const noexcept { return rk4_steps_; }

 private:
  Matrix rhs(const Matrix& rho) const;

  Matrix H_;
  Matrix A_;
  Matrix AdA_;
  Matrix AAd_;
  double down_rate_ = 0.0;
  double up_rate_ = 0.0;
  double tau_ = 0.0;
  Matrix superop_;
  int rk4_steps_ = 0;
};

/// Evolves rho for time tau; throws IntegrationError if trace drifts by more
/// than 1e-8 or an eigenvalue drops below -1e-8.
DensityMatrix lindblad_evolve(const DensityMatrix& rho, const Matrix& H,
                              const BathSpec& bath, double tau);

}  // namespace subcool
