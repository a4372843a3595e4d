#include "subcool/qudit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

namespace subcool {

namespace {

void require_dimension(int d) {
  if (d < 2) {
    throw InvalidArgument("invalid local dimension d=" + std::to_string(d) +
                          " (need d >= 2)");
  }
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Eigenvalues this far below the largest are roundoff; their square roots
// would otherwise leak ~1e-8 into fidelities of (near-)pure states.
constexpr double kRoundoff = 1e-13;

Matrix hermitian_sqrt(const Matrix& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  RealVector w = es.eigenvalues();
  const double floor = kRoundoff * w.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < -DensityMatrix::kEigenTol) {
      throw InvalidArgument(std::string(what) +
                            " is not positive semidefinite (eigenvalue " +
                            std::to_string(w(i)) + ")");
    }
    w(i) = w(i) > floor ? std::sqrt(w(i)) : 0.0;
  }
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

SpinOperatorSet spin_operators(int d) {
  require_dimension(d);
  SpinOperatorSet ops;
  ops.d = d;
  ops.s = 0.5 * (d - 1);
  const double s = ops.s;

  ops.sz = Matrix::Zero(d, d);
  ops.splus = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = s - i;
    ops.sz(i, i) = m;
    if (i > 0) {
      // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> sits at index i-1.
      ops.splus(i - 1, i) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
  }
  ops.sminus = ops.splus.adjoint();
  ops.sx = 0.5 * (ops.splus + ops.sminus);
  ops.sy = Complex(0.0, -0.5) * (ops.splus - ops.sminus);
  return ops;
}

std::vector<int> energy_order(int d, double h) {
  require_dimension(d);
  if (h == 0.0 || !std::isfinite(h)) {
    throw InvalidArgument(
        "degenerate local Hamiltonian: field h must be finite and nonzero to "
        "order the local eigenbasis");
  }
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  // Energy of index i is h * (s - i): ascending for h < 0, descending for h > 0.
  if (h > 0) std::reverse(order.begin(), order.end());
  return order;
}

std::vector<Vector> local_energy_eigenbasis(int d, double h) {
  std::vector<Vector> basis;
  for (int idx : energy_order(d, h)) {
    Vector v = Vector::Zero(d);
    v(idx) = 1.0;
    basis.push_back(std::move(v));
  }
  return basis;
}

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(Unchecked, std::vector<int> dims, Matrix data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  if (data_.rows() != data_.cols()) {
    throw InvalidArgument("density matrix must be square");
  }
  if (data_.rows() != total_dimension(dims_)) {
    throw InvalidArgument("density matrix size does not match subsystem dims");
  }
}

DensityMatrix DensityMatrix::adopt(std::vector<int> dims, Matrix data) {
  return DensityMatrix(Unchecked{}, std::move(dims), std::move(data));
}

DensityMatrix::DensityMatrix(std::vector<int> dims, Matrix data)
    : DensityMatrix(Unchecked{}, std::move(dims), std::move(data)) {
  const double herm = max_abs(data_ - data_.adjoint());
  if (herm > kHermitianTol) {
    throw InvalidArgument("density matrix is not Hermitian (deviation " +
                          std::to_string(herm) + ")");
  }
  const double tr = trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw InvalidArgument("density matrix trace " + std::to_string(tr) +
                          " differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigenTol) {
    throw InvalidArgument("density matrix has negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  }
}

// --- states and projectors --------------------------------------------------

Projector Projector::low_energy(int d, int rank, int site, double h) {
  if (rank < 1 || rank > d) {
    throw InvalidArgument("projector rank " + std::to_string(rank) +
                          " outside [1, " + std::to_string(d) + "]");
  }
  if (site < 0) throw InvalidArgument("projector site must be non-negative");
  const auto order = energy_order(d, h);
  Projector p;
  p.site = site;
  p.rank = rank;
  p.local = Matrix::Zero(d, d);
  p.support.assign(order.begin(), order.begin() + rank);
  for (int idx : p.support) p.local(idx, idx) = 1.0;
  return p;
}

DensityMatrix thermal_state(int d, double h, double beta) {
  require_dimension(d);
  if (std::isnan(beta) || beta < 0) {
    throw InvalidArgument("inverse temperature must be non-negative");
  }
  Matrix rho = Matrix::Zero(d, d);
  if (beta == 0.0) {
    rho.diagonal().setConstant(1.0 / d);
    return DensityMatrix::adopt({d}, std::move(rho));
  }
  const auto order = energy_order(d, h);
  if (std::isinf(beta)) {
    rho(order.front(), order.front()) = 1.0;
    return DensityMatrix::adopt({d}, std::move(rho));
  }
  const double s = 0.5 * (d - 1);
  // Shift by the ground energy so the largest Boltzmann weight is 1.
  const double e0 = h * (s - order.front());
  double z = 0.0;
  for (int i = 0; i < d; ++i) {
    const double w = std::exp(-beta * (h * (s - i) - e0));
    rho(i, i) = w;
    z += w;
  }
  rho /= z;
  return DensityMatrix::adopt({d}, std::move(rho));
}

DensityMatrix low_lying_mixture(int d, int k, double h) {
  const Projector p = Projector::low_energy(d, k, 0, h);
  return DensityMatrix::adopt({d}, p.local / static_cast<double>(k));
}

// --- tensor structure -------------------------------------------------------

Eigen::Index total_dimension(std::span<const int> dims, Eigen::Index limit) {
  if (dims.empty()) throw InvalidArgument("empty subsystem dimension list");
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d < 1) throw InvalidArgument("subsystem dimension must be positive");
    total *= d;
    if (total > limit) {
      throw InvalidArgument("total Hilbert-space dimension exceeds " +
                            std::to_string(limit));
    }
  }
  return total;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::adopt(std::move(dims), kron(a.matrix(), b.matrix()));
}

Matrix embed_block(const Matrix& op, int first_site, std::span<const int> dims) {
  const Eigen::Index total = total_dimension(dims);
  const int n = static_cast<int>(dims.size());
  if (first_site < 0 || first_site >= n) {
    throw InvalidArgument("site index " + std::to_string(first_site) +
                          " out of range");
  }
  if (op.rows() != op.cols()) throw InvalidArgument("operator must be square");

  Eigen::Index block = 1;
  int last = first_site;
  while (block < op.rows() && last < n) block *= dims[last++];
  if (block != op.rows()) {
    throw InvalidArgument("operator dimension " + std::to_string(op.rows()) +
                          " does not match the subsystem dimensions at site " +
                          std::to_string(first_site));
  }
  Eigen::Index left = 1;
  for (int i = 0; i < first_site; ++i) left *= dims[i];
  const Eigen::Index right = total / (left * block);

  Matrix out = Matrix::Zero(total, total);
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index a = 0; a < block; ++a) {
      for (Eigen::Index b = 0; b < block; ++b) {
        const Complex v = op(a, b);
        if (v == Complex(0.0)) continue;
        const Eigen::Index row = (l * block + a) * right;
        const Eigen::Index col = (l * block + b) * right;
        for (Eigen::Index r = 0; r < right; ++r) out(row + r, col + r) = v;
      }
    }
  }
  return out;
}

Matrix embed_operator(const Matrix& op, int site, std::span<const int> dims) {
  if (site < 0 || site >= static_cast<int>(dims.size())) {
    throw InvalidArgument("site index " + std::to_string(site) + " out of range");
  }
  if (op.rows() != dims[site] || op.cols() != dims[site]) {
    throw InvalidArgument("operator dimension does not match dims[" +
                          std::to_string(site) + "]");
  }
  return embed_block(op, site, dims);
}

Matrix embed_product(std::span<const std::pair<int, Matrix>> factors,
                     std::span<const int> dims) {
  total_dimension(dims);
  const int n = static_cast<int>(dims.size());
  std::vector<const Matrix*> slot(n, nullptr);
  for (const auto& [site, op] : factors) {
    if (site < 0 || site >= n) {
      throw InvalidArgument("site index " + std::to_string(site) + " out of range");
    }
    if (slot[site]) throw InvalidArgument("repeated site in operator product");
    if (op.rows() != dims[site] || op.cols() != dims[site]) {
      throw InvalidArgument("operator dimension does not match dims[" +
                            std::to_string(site) + "]");
    }
    slot[site] = &op;
  }
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    out = slot[i] ? kron(out, *slot[i])
                  : kron(out, Matrix::Identity(dims[i], dims[i]));
  }
  return out;
}

Matrix partial_trace(const Matrix& op, std::span<const int> dims,
                     std::span<const int> keep) {
  const Eigen::Index total = total_dimension(dims);
  if (op.rows() != total || op.cols() != total) {
    throw InvalidArgument("operator size does not match subsystem dims");
  }
  if (keep.empty()) throw InvalidArgument("partial trace needs a non-empty keep set");
  const int n = static_cast<int>(dims.size());
  std::set<int> kept;
  for (int k : keep) {
    if (k < 0 || k >= n) {
      throw InvalidArgument("kept site " + std::to_string(k) + " out of range");
    }
    if (!kept.insert(k).second) throw InvalidArgument("repeated kept site");
  }

  // Row-major strides of the full index.
  std::vector<Eigen::Index> stride(n);
  Eigen::Index acc = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[i] = acc;
    acc *= dims[i];
  }

  // Offsets into the full index contributed by kept and traced digits.
  auto offsets = [&](bool want_kept) {
    std::vector<Eigen::Index> offs{0};
    for (int i = 0; i < n; ++i) {
      if (kept.count(i) != static_cast<std::size_t>(want_kept)) continue;
      std::vector<Eigen::Index> next;
      next.reserve(offs.size() * dims[i]);
      for (Eigen::Index o : offs) {
        for (int a = 0; a < dims[i]; ++a) next.push_back(o + a * stride[i]);
      }
      offs = std::move(next);
    }
    return offs;
  };
  const auto kept_off = offsets(true);
  const auto traced_off = offsets(false);

  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex sum = 0.0;
      for (Eigen::Index t : traced_off) sum += op(kept_off[a] + t, kept_off[b] + t);
      out(a, b) = sum;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  Matrix reduced = partial_trace(rho.matrix(), rho.dims(), sorted);
  std::vector<int> dims;
  for (int k : sorted) dims.push_back(rho.dims()[k]);
  return DensityMatrix::adopt(std::move(dims), std::move(reduced));
}

// --- fidelity ---------------------------------------------------------------

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dimension() != sigma.dimension()) {
    throw InvalidArgument("fidelity arguments have different dimensions");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> check(rho.matrix(), Eigen::EigenvaluesOnly);
  if (check.eigenvalues().minCoeff() < -DensityMatrix::kEigenTol) {
    throw InvalidArgument("fidelity argument is not positive semidefinite");
  }
  const Matrix root = hermitian_sqrt(sigma.matrix(), "fidelity argument");
  Matrix inner = root * rho.matrix() * root;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
  const double floor = kRoundoff * es.eigenvalues().cwiseAbs().maxCoeff();
  double tr = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > floor) tr += std::sqrt(es.eigenvalues()(i));
  }
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace subcool
