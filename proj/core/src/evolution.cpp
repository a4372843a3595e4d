#include "subcool/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace subcool {

namespace {

constexpr double kHermitianInputTol = 1e-10;
constexpr double kTraceDriftTol = 1e-8;
constexpr double kPositivityTol = 1e-8;

// vec(X) stacks columns, so vec(A X B) = (B^T (x) A) vec(X).
Matrix left_right(const Matrix& left, const Matrix& right) {
  return kron(right.transpose(), left);
}

}  // namespace

void require_hermitian(const Matrix& H, double tol, const char* what) {
  if (H.rows() != H.cols()) {
    throw InvalidArgument(std::string(what) + " must be square");
  }
  const double dev = H.size() == 0 ? 0.0 : (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw InvalidArgument(std::string(what) + " is not Hermitian (deviation " +
                          std::to_string(dev) + ")");
  }
}

HermitianSpectrum::HermitianSpectrum(const Matrix& H) {
  require_hermitian(H, kHermitianInputTol, "Hamiltonian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) {
    throw Error("Hermitian eigendecomposition failed");
  }
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

Matrix HermitianSpectrum::unitary(double tau) const {
  Vector phases(energies_.size());
  for (Eigen::Index i = 0; i < energies_.size(); ++i) {
    phases(i) = std::polar(1.0, -energies_(i) * tau);
  }
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Propagator propagator(const Matrix& H, double tau) {
  if (!std::isfinite(tau)) throw InvalidArgument("evolution time must be finite");
  return Propagator{HermitianSpectrum(H).unitary(tau), tau};
}

double BathSpec::occupancy() const {
  if (omega == 0.0) {
    throw InvalidArgument("bath channel frequency must be nonzero");
  }
  if (!(temperature > 0.0)) {
    throw InvalidArgument("bath temperature must be positive for omega > 0");
  }
  return 1.0 / std::expm1(omega / temperature);
}

void BathSpec::validate(int sites) const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("bath coupling gamma must be finite and >= 0");
  }
  if (target_site < 0 || target_site >= sites) {
    throw InvalidArgument("bath target site " + std::to_string(target_site) +
                          " out of range");
  }
  occupancy();
}

Matrix dissipator(const DensityMatrix& rho, const BathSpec& bath,
                  const SpinOperatorSet& ops) {
  const auto& dims = rho.dims();
  bath.validate(static_cast<int>(dims.size()));
  if (bath.gamma == 0.0) return Matrix::Zero(rho.dimension(), rho.dimension());
  const double n = bath.occupancy();
  const Matrix A = embed_operator(0.5 * ops.sminus, bath.target_site, dims);
  const Matrix Ad = A.adjoint();
  const Matrix AdA = Ad * A;
  const Matrix AAd = A * Ad;
  const Matrix& r = rho.matrix();
  return bath.gamma *
         ((1.0 + n) * (A * r * Ad - 0.5 * (AdA * r + r * AdA)) +
          n * (Ad * r * A - 0.5 * (AAd * r + r * AAd)));
}

LindbladPropagator::LindbladPropagator(const Matrix& H, const BathSpec& bath,
                                       std::vector<int> dims, double tau)
    : H_(H), tau_(tau) {
  require_hermitian(H, kHermitianInputTol, "Hamiltonian");
  const Eigen::Index D = total_dimension(dims);
  if (H.rows() != D) {
    throw InvalidArgument("Hamiltonian size does not match subsystem dims");
  }
  if (!std::isfinite(tau) || tau < 0) {
    throw InvalidArgument("evolution time must be finite and >= 0");
  }
  bath.validate(static_cast<int>(dims.size()));
  const double n = bath.occupancy();
  down_rate_ = bath.gamma * (1.0 + n);
  up_rate_ = bath.gamma * n;

  const auto ops = spin_operators(dims[bath.target_site]);
  A_ = embed_operator(0.5 * ops.sminus, bath.target_site, dims);
  AdA_ = A_.adjoint() * A_;
  AAd_ = A_ * A_.adjoint();

  if (D <= kMaxSuperoperatorDim) {
    const Matrix I = Matrix::Identity(D, D);
    const Matrix Ad = A_.adjoint();
    Matrix L = Complex(0.0, -1.0) * (left_right(H, I) - left_right(I, H));
    L += down_rate_ * (left_right(A_, Ad) - 0.5 * left_right(AdA_, I) -
                       0.5 * left_right(I, AdA_));
    L += up_rate_ * (left_right(Ad, A_) - 0.5 * left_right(AAd_, I) -
                     0.5 * left_right(I, AAd_));
    superop_ = (L * tau).exp();
    return;
  }

  // Crude bound on the generator norm; RK4 at dt * norm <= 0.05 keeps the
  // local error far below the trace tolerance.
  const double norm = 2.0 * H.cwiseAbs().rowwise().sum().maxCoeff() +
                      2.0 * (down_rate_ + up_rate_) *
                          std::max(AdA_.cwiseAbs().rowwise().sum().maxCoeff(),
                                   AAd_.cwiseAbs().rowwise().sum().maxCoeff());
  rk4_steps_ = std::max(1, static_cast<int>(std::ceil(tau * norm / 0.05)));
}

Matrix LindbladPropagator::rhs(const Matrix& rho) const {
  const Complex minus_i(0.0, -1.0);
  Matrix out = minus_i * (H_ * rho - rho * H_);
  if (down_rate_ != 0.0) {
    out += down_rate_ * (A_ * rho * A_.adjoint() - 0.5 * (AdA_ * rho + rho * AdA_));
  }
  if (up_rate_ != 0.0) {
    out += up_rate_ * (A_.adjoint() * rho * A_ - 0.5 * (AAd_ * rho + rho * AAd_));
  }
  return out;
}

Matrix LindbladPropagator::apply(const Matrix& rho) const {
  const Eigen::Index D = H_.rows();
  if (rho.rows() != D || rho.cols() != D) {
    throw InvalidArgument("state size does not match the propagator");
  }
  if (uses_superoperator()) {
    const Vector v = superop_ * rho.reshaped();
    return v.reshaped(D, D);
  }
  const double dt = tau_ / rk4_steps_;
  Matrix x = rho;
  for (int s = 0; s < rk4_steps_; ++s) {
    const Matrix k1 = rhs(x);
    const Matrix k2 = rhs(x + 0.5 * dt * k1);
    const Matrix k3 = rhs(x + 0.5 * dt * k2);
    const Matrix k4 = rhs(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

DensityMatrix lindblad_evolve(const DensityMatrix& rho, const Matrix& H,
                              const BathSpec& bath, double tau) {
  const LindbladPropagator prop(H, bath, rho.dims(), tau);
  Matrix out = prop.apply(rho.matrix());
  out = 0.5 * (out + out.adjoint()).eval();

  const double drift = std::abs(out.trace().real() - rho.trace());
  if (drift > kTraceDriftTol) {
    throw IntegrationError("Lindblad evolution trace drift " + std::to_string(drift) +
                           " exceeds tolerance (tau=" + std::to_string(tau) +
                           ", rk4 steps=" + std::to_string(prop.rk4_steps()) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(out, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPositivityTol) {
    throw IntegrationError("Lindblad evolution lost positivity (eigenvalue " +
                           std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  return DensityMatrix::adopt(rho.dims(), std::move(out));
}

}  // namespace subcool
