#include "subcool/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace subcool {

namespace {

// Maps rows of the full Hilbert space to (local digit, rest-of-system index)
// for one site, so reduced states can be read off a column factor.
struct SiteSplit {
  Eigen::Index stride = 1;
  int d = 2;

  int digit(Eigen::Index x) const { return static_cast<int>((x / stride) % d); }
  Eigen::Index rest(Eigen::Index x) const {
    return (x / (stride * d)) * stride + x % stride;
  }
};

SiteSplit split_for(const std::vector<int>& dims, int site) {
  Eigen::Index stride = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i > site; --i) stride *= dims[i];
  return SiteSplit{stride, dims[site]};
}

// rho_site = Tr_rest(K K^dagger), where row i of K is basis state rows[i].
Matrix reduced_from_factor(const Matrix& K, const std::vector<Eigen::Index>& rows,
                           const SiteSplit& split, Eigen::Index total) {
  const Eigen::Index r = K.cols();
  const Eigen::Index rest_dim = total / split.d;
  Matrix M = Matrix::Zero(split.d, rest_dim * r);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Eigen::Index x = rows[i];
    M.row(split.digit(x)).segment(split.rest(x) * r, r) = K.row(static_cast<Eigen::Index>(i));
  }
  Matrix rho = M * M.adjoint();
  return 0.5 * (rho + rho.adjoint());
}

// Diagonal of rho(0) = rho_R (x) rho_B1 (x) ... in the S^z product basis.
RealVector initial_weights(const ProtocolConfig& c) {
  const int d = c.layout.d;
  const double h = c.basis_field();
  std::vector<RealVector> local;
  local.push_back(low_lying_mixture(d, c.prep_rank(), h).matrix().diagonal().real());
  for (int j = 1; j <= c.layout.targets; ++j) {
    local.push_back(thermal_state(d, h, c.beta(j)).matrix().diagonal().real());
  }
  RealVector w = RealVector::Ones(1);
  for (const auto& l : local) {
    RealVector next(w.size() * l.size());
    for (Eigen::Index a = 0; a < w.size(); ++a) {
      next.segment(a * l.size(), l.size()) = w(a) * l;
    }
    w = std::move(next);
  }
  return w;
}

// Full-space rows inside the projector support on the regulator (site 0).
std::vector<Eigen::Index> projector_rows(const ProtocolConfig& c, const Projector& p) {
  const Eigen::Index block = c.layout.dimension() / c.layout.d;
  std::vector<Eigen::Index> rows;
  std::vector<int> local = p.support;
  std::sort(local.begin(), local.end());
  for (int a : local) {
    for (Eigen::Index r = 0; r < block; ++r) rows.push_back(a * block + r);
  }
  return rows;
}

DensityMatrix reference_state(const ProtocolConfig& c) {
  return low_lying_mixture(c.layout.d, c.prep_rank(),
                           c.reference_field.value_or(c.basis_field()));
}

void record_step(TrajectoryRecord& out, int step, double p,
                 std::vector<double> fidelities) {
  StepRecord rec;
  rec.step = step;
  rec.fidelities = std::move(fidelities);
  rec.step_probability = p;
  const double prev_cum = out.steps.empty() ? 1.0 : out.steps.back().cumulative_probability;
  const double prev_log = out.steps.empty() ? 0.0 : out.steps.back().log_cumulative_probability;
  rec.cumulative_probability = prev_cum * p;
  rec.log_cumulative_probability = prev_log + std::log(p);
  out.steps.push_back(std::move(rec));
}

TrajectoryRecord run_closed(const ProtocolConfig& c, const Matrix& U) {
  const int d = c.layout.d;
  const auto dims = c.layout.dims();
  const Eigen::Index D = c.layout.dimension();
  if (U.rows() != D || U.cols() != D) {
    throw InvalidArgument("propagator size does not match the layout");
  }
  const Projector proj = Projector::low_energy(d, c.rank, 0, c.basis_field());
  const DensityMatrix reference = reference_state(c);
  const auto sel = projector_rows(c, proj);

  const RealVector w = initial_weights(c);
  std::vector<Eigen::Index> init;
  for (Eigen::Index x = 0; x < D; ++x) {
    if (w(x) > 0.0) init.push_back(x);
  }

  TrajectoryRecord out;
  for (int j = 1; j <= c.layout.targets; ++j) {
    out.initial_fidelities.push_back(
        uhlmann_fidelity(thermal_state(d, c.basis_field(), c.beta(j)), reference));
  }

  if (c.steps == 0) {
    for (int j = 1; j <= c.layout.targets; ++j) {
      out.final_states.push_back(thermal_state(d, c.basis_field(), c.beta(j)));
    }
    return out;
  }

  // rho = K K^dagger restricted to the projector support. The first step
  // maps the initial columns through P U; later steps only need P U P.
  Matrix K = U(sel, init);
  for (std::size_t col = 0; col < init.size(); ++col) {
    K.col(static_cast<Eigen::Index>(col)) *= std::sqrt(w(init[col]));
  }
  const Matrix U_sel = U(sel, sel);

  std::vector<SiteSplit> splits;
  for (int j = 1; j <= c.layout.targets; ++j) splits.push_back(split_for(dims, j));

  for (int step = 1; step <= c.steps; ++step) {
    if (step > 1) K = U_sel * K;
    const double p = K.squaredNorm();
    if (!(p >= kExtinctionThreshold)) throw ExtinctionError(step, p);
    K /= std::sqrt(p);

    const bool last = step == c.steps;
    std::vector<double> fids;
    for (const auto& split : splits) {
      auto reduced = DensityMatrix::adopt({d}, reduced_from_factor(K, sel, split, D));
      fids.push_back(uhlmann_fidelity(reduced, reference));
      if (last) out.final_states.push_back(std::move(reduced));
    }
    record_step(out, step, p, std::move(fids));
  }
  return out;
}

TrajectoryRecord run_open(const ProtocolConfig& c, const LindbladPropagator& map) {
  const int d = c.layout.d;
  const auto dims = c.layout.dims();
  const Eigen::Index D = c.layout.dimension();
  const Projector proj = Projector::low_energy(d, c.rank, 0, c.basis_field());
  const DensityMatrix reference = reference_state(c);
  const auto sel = projector_rows(c, proj);

  TrajectoryRecord out;
  Matrix rho = initial_weights(c).cast<Complex>().asDiagonal();
  const auto reduced_fidelities = [&](const Matrix& state, bool keep) {
    std::vector<double> fids;
    for (int j = 1; j <= c.layout.targets; ++j) {
      const int keep_site[] = {j};
      auto reduced = DensityMatrix::adopt({d}, partial_trace(state, dims, keep_site));
      fids.push_back(uhlmann_fidelity(reduced, reference));
      if (keep) out.final_states.push_back(std::move(reduced));
    }
    return fids;
  };
  out.initial_fidelities = reduced_fidelities(rho, c.steps == 0);

  for (int step = 1; step <= c.steps; ++step) {
    Matrix evolved = map.apply(rho);
    const double drift = std::abs(evolved.trace().real() - 1.0);
    out.max_trace_drift = std::max(out.max_trace_drift, drift);
    if (drift > 1e-8) {
      throw IntegrationError("trace drift " + std::to_string(drift) + " at step " +
                             std::to_string(step));
    }
    Matrix projected = Matrix::Zero(D, D);
    projected(sel, sel) = evolved(sel, sel);
    const double p = projected.trace().real();
    if (!(p >= kExtinctionThreshold)) throw ExtinctionError(step, p);
    rho = projected / p;
    rho = 0.5 * (rho + rho.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) {
      throw IntegrationError("state lost positivity at step " + std::to_string(step));
    }
    record_step(out, step, p, reduced_fidelities(rho, step == c.steps));
  }
  return out;
}

}  // namespace

// --- ProtocolConfig ---------------------------------------------------------

double ProtocolConfig::beta(int target) const {
  if (target_betas.empty()) return 0.0;
  return target_betas.at(static_cast<std::size_t>(target - 1));
}

void ProtocolConfig::validate() const {
  layout.validate();
  const bool star_model = std::holds_alternative<SpinStarParams>(hamiltonian);
  if (star_model != (layout.topology == Topology::star)) {
    throw InvalidArgument("model '" + model_name(hamiltonian) +
                          "' is incompatible with topology '" +
                          to_string(layout.topology) + "'");
  }
  if (!std::isfinite(tau)) throw InvalidArgument("tau must be finite");
  if (steps < 0) throw InvalidArgument("number of steps N must be >= 0");
  if (rank < 1 || rank > layout.d) {
    throw InvalidArgument("projector rank k=" + std::to_string(rank) +
                          " outside [1, d]");
  }
  if (prep_rank() < 1 || prep_rank() > layout.d) {
    throw InvalidArgument("regulator preparation rank outside [1, d]");
  }
  if (!target_betas.empty() &&
      static_cast<int>(target_betas.size()) != layout.targets) {
    throw InvalidArgument("target_betas must have one entry per target qudit");
  }
  for (double b : target_betas) {
    if (std::isnan(b) || b < 0) throw InvalidArgument("target beta must be >= 0");
  }
  energy_order(layout.d, basis_field());
  if (reference_field) energy_order(layout.d, *reference_field);
  if (bath) {
    if (tau < 0) throw InvalidArgument("open-system evolution needs tau >= 0");
    bath->validate(layout.sites());
  }
}

double TrajectoryRecord::cumulative_probability() const {
  return steps.empty() ? 1.0 : steps.back().cumulative_probability;
}

double TrajectoryRecord::log_cumulative_probability() const {
  return steps.empty() ? 0.0 : steps.back().log_cumulative_probability;
}

const std::vector<double>& TrajectoryRecord::final_fidelities() const {
  return steps.empty() ? initial_fidelities : steps.back().fidelities;
}

// --- operations -------------------------------------------------------------

MeasurementOutcome apply_measurement(const DensityMatrix& rho, const Projector& proj) {
  const Matrix P = embed_operator(proj.local, proj.site, rho.dims());
  Matrix projected = P * rho.matrix() * P;
  const double p = projected.trace().real();
  if (!(p >= kExtinctionThreshold)) throw ExtinctionError(0, p);
  projected /= p;
  projected = 0.5 * (projected + projected.adjoint()).eval();
  return {DensityMatrix::adopt(rho.dims(), std::move(projected)), p};
}

StepMap build_step_map(const ProtocolConfig& config) {
  config.validate();
  const Matrix H = build_hamiltonian(config.layout, config.hamiltonian);
  if (config.bath) {
    return LindbladPropagator(H, *config.bath, config.layout.dims(), config.tau);
  }
  return HermitianSpectrum(H).unitary(config.tau);
}

TrajectoryRecord zeno_run(const ProtocolConfig& config) {
  return zeno_run(config, build_step_map(config));
}

TrajectoryRecord zeno_run(const ProtocolConfig& config, const StepMap& map) {
  config.validate();
  if (const auto* U = std::get_if<Matrix>(&map)) {
    if (config.bath) {
      throw InvalidArgument("open-system config needs a Lindblad step map");
    }
    return run_closed(config, *U);
  }
  if (!config.bath) {
    throw InvalidArgument("closed-system config needs a unitary step map");
  }
  return run_open(config, std::get<LindbladPropagator>(map));
}

ZenoSpectrum zeno_spectrum(const ProtocolConfig& config) {
  config.validate();
  if (config.bath) {
    throw InvalidArgument("Zeno spectrum is defined for closed-system configs only");
  }
  const Matrix H = build_hamiltonian(config.layout, config.hamiltonian);
  const Matrix U = HermitianSpectrum(H).unitary(config.tau);
  const Projector proj =
      Projector::low_energy(config.layout.d, config.rank, 0, config.basis_field());
  const auto sel = projector_rows(config, proj);
  const Eigen::Index D = U.rows();
  Matrix M = Matrix::Zero(D, D);
  M(sel, Eigen::all) = U(sel, Eigen::all);

  Eigen::ComplexEigenSolver<Matrix> es(M);
  if (es.info() != Eigen::Success) throw Error("Zeno map eigendecomposition failed");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(D));
  for (Eigen::Index i = 0; i < D; ++i) order[static_cast<std::size_t>(i)] = i;
  const auto& vals = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(vals(a)) > std::abs(vals(b));
  });

  ZenoSpectrum out;
  for (Eigen::Index i : order) out.eigenvalues.push_back(vals(i));
  out.dominant_right = es.eigenvectors().col(order.front()).normalized();
  if (D > 1) {
    out.dominant_simple =
        std::abs(out.eigenvalues[0]) - std::abs(out.eigenvalues[1]) > 1e-9;
  }

  // <L| solves <L| M = alpha <L|, i.e. M^dagger |L> = conj(alpha) |L>.
  Eigen::ComplexEigenSolver<Matrix> adj(M.adjoint());
  const Complex target = std::conj(out.eigenvalues.front());
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < D; ++i) {
    if (std::abs(adj.eigenvalues()(i) - target) <
        std::abs(adj.eigenvalues()(best) - target)) {
      best = i;
    }
  }
  Vector left = adj.eigenvectors().col(best).normalized();
  const Complex overlap = left.dot(out.dominant_right);
  if (std::abs(overlap) > 1e-12) left /= std::conj(overlap);
  out.dominant_left = std::move(left);
  return out;
}

DensityMatrix dominant_reduced_state(const ZenoSpectrum& spectrum,
                                     const SystemLayout& layout, int site) {
  const auto dims = layout.dims();
  if (spectrum.dominant_right.size() != layout.dimension()) {
    throw InvalidArgument("spectrum does not belong to this layout");
  }
  const Vector& r = spectrum.dominant_right;
  const Matrix rho = r * r.adjoint() / r.squaredNorm();
  const int keep[] = {site};
  return DensityMatrix::adopt({layout.d}, partial_trace(rho, dims, keep));
}

DeltaP delta_p(const ProtocolConfig& config, int k, RegulatorPolicy policy) {
  if (k < 2 || k > config.layout.d) {
    throw InvalidArgument("delta_p needs 2 <= k <= d");
  }
  ProtocolConfig high = config;
  ProtocolConfig low = config;
  high.rank = k;
  low.rank = k - 1;
  if (policy == RegulatorPolicy::matched) {
    high.regulator_prep = k;
    low.regulator_prep = k - 1;
  } else {
    high.regulator_prep = config.prep_rank();
    low.regulator_prep = config.prep_rank();
  }
  const StepMap map = build_step_map(high);
  DeltaP out;
  out.p_rank_k = zeno_run(high, map).cumulative_probability();
  out.p_rank_k_minus_1 = zeno_run(low, map).cumulative_probability();
  out.delta = out.p_rank_k - out.p_rank_k_minus_1;
  return out;
}

}  // namespace subcool
