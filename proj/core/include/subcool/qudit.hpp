#pragma once

// Spin-s operator algebra, state construction, tensor embedding, partial
// trace and Uhlmann fidelity. Units: hbar = k_B = 1.

#include <span>
#include <utility>
#include <vector>

#include "subcool/types.hpp"

namespace subcool {

/// Spin-s angular momentum matrices in the S^z eigenbasis, ordered
/// m = s, s-1, ..., -s (row/column index i carries m = s - i).
struct SpinOperatorSet {
  int d = 0;
  double s = 0.0;
  Matrix sx, sy, sz, splus, sminus;
};

SpinOperatorSet spin_operators(int d);

/// Indices into the S^z basis, sorted by ascending energy of h * S^z.
/// Element 0 is the local ground state (m = -s for h > 0).
std::vector<int> energy_order(int d, double h);

/// The same ordering as unit vectors.
std::vector<Vector> local_energy_eigenbasis(int d, double h);

/// Hermitian, unit-trace, positive semidefinite matrix together with the
/// dimensions of the subsystems it acts on.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigenTol = 1e-10;

  /// Validates all invariants; throws InvalidArgument on violation.
  DensityMatrix(std::vector<int> dims, Matrix data);

  /// Skips the eigenvalue check. For results of operations that preserve
  /// positivity (tensor products, partial traces, projections).
  static DensityMatrix adopt(std::vector<int> dims, Matrix data);

  const std::vector<int>& dims() const noexcept { return dims_; }
  const Matrix& matrix() const noexcept { return data_; }
  Eigen::Index dimension() const noexcept { return data_.rows(); }
  double trace() const { return data_.trace().real(); }

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, std::vector<int> dims, Matrix data);

  std::vector<int> dims_;
  Matrix data_;
};

/// Rank-k projector on the k lowest local-energy eigenstates of h * S^z,
/// acting on one site.
struct Projector {
  int site = 0;
  int rank = 1;
  Matrix local;              ///< d x d, diagonal in the S^z basis
  std::vector<int> support;  ///< S^z basis indices spanned, ascending energy

  static Projector low_energy(int d, int rank, int site, double h = 1.0);
};

/// Gibbs state exp(-beta h S^z)/Z. beta may be +infinity (ground projector).
DensityMatrix thermal_state(int d, double h, double beta);

/// (1/k) sum_{i<k} |i><i| over the k lowest local-energy eigenstates.
DensityMatrix low_lying_mixture(int d, int k, double h = 1.0);

Matrix kron(const Matrix& a, const Matrix& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Product of the total dimensions; throws if it would exceed `limit`.
Eigen::Index total_dimension(std::span<const int> dims,
                             Eigen::Index limit = 1 << 14);

/// I (x) ... (x) op (x) ... (x) I with `op` in slot `site`.
Matrix embed_operator(const Matrix& op, int site, std::span<const int> dims);

/// Operator acting on the consecutive sites first, first+1, ...; its
/// dimension must equal the product of those sites' dimensions.
Matrix embed_block(const Matrix& op, int first_site, std::span<const int> dims);

/// Tensor product of single-site operators at distinct sites, identity
/// elsewhere.
Matrix embed_product(std::span<const std::pair<int, Matrix>> factors,
                     std::span<const int> dims);

/// Reduced operator on `keep` (distinct, in range). Kept sites appear in
/// ascending order.
Matrix partial_trace(const Matrix& op, std::span<const int> dims,
                     std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2, clamped to [0, 1].
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower is
/// rejected.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace subcool
