#include "subcool/hamiltonians.hpp"

#include <cmath>

namespace subcool {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidArgument(std::string("Hamiltonian parameter ") + name +
                          " must be finite");
  }
}

void require_chain(const SystemLayout& layout, const char* model) {
  layout.validate();
  if (layout.topology != Topology::chain) {
    throw InvalidArgument(std::string(model) + " model requires a chain layout");
  }
}

// Adds h * sum_j m_j on the diagonal.
void add_field(Matrix& H, const SystemLayout& layout, double h) {
  if (h == 0.0) return;
  const auto dims = layout.dims();
  const Matrix sz = spin_operators(layout.d).sz;
  for (int j = 0; j < layout.sites(); ++j) H += h * embed_operator(sz, j, dims);
}

Matrix spin_dot(const SpinOperatorSet& ops) {
  return kron(ops.sx, ops.sx) + kron(ops.sy, ops.sy) + kron(ops.sz, ops.sz);
}

Matrix chain_from_bond(const SystemLayout& layout, const Matrix& bond) {
  const auto dims = layout.dims();
  const Eigen::Index D = layout.dimension();
  Matrix H = Matrix::Zero(D, D);
  for (int j = 0; j + 1 < layout.sites(); ++j) H += embed_block(bond, j, dims);
  return H;
}

}  // namespace

std::string to_string(Topology t) {
  return t == Topology::chain ? "chain" : "star";
}

Topology topology_from_string(const std::string& name) {
  if (name == "chain") return Topology::chain;
  if (name == "star") return Topology::star;
  throw InvalidArgument("unknown topology '" + name + "'");
}

Eigen::Index SystemLayout::dimension() const {
  const auto ds = dims();
  return total_dimension(ds);
}

void SystemLayout::validate() const {
  if (d < 2) throw InvalidArgument("local dimension d must be >= 2");
  if (targets < 1) throw InvalidArgument("layout needs at least one target qudit");
  dimension();
}

std::string model_name(const HamiltonianSpec& spec) {
  switch (spec.index()) {
    case 0: return "xxz";
    case 1: return "bbh";
    default: return "star";
  }
}

double coupling(const HamiltonianSpec& spec) {
  return std::visit([](const auto& p) { return p.J; }, spec);
}

double local_field(const HamiltonianSpec& spec) {
  return std::visit([](const auto& p) { return p.h; }, spec);
}

double shape_parameter(const HamiltonianSpec& spec) {
  if (const auto* x = std::get_if<XXZParams>(&spec)) return x->delta;
  if (const auto* b = std::get_if<BBHParams>(&spec)) return b->theta;
  return 0.0;
}

Matrix build_xxz(const SystemLayout& layout, double J, double delta, double h) {
  require_chain(layout, "XXZ");
  require_finite(J, "J");
  require_finite(delta, "Delta");
  require_finite(h, "h");
  const auto ops = spin_operators(layout.d);
  const Matrix bond =
      J * (kron(ops.sx, ops.sx) + kron(ops.sy, ops.sy) + delta * kron(ops.sz, ops.sz));
  Matrix H = chain_from_bond(layout, bond);
  add_field(H, layout, h);
  return H;
}

Matrix build_bbh(const SystemLayout& layout, double J, double theta, double h) {
  require_chain(layout, "BBH");
  require_finite(J, "J");
  require_finite(theta, "theta");
  require_finite(h, "h");
  const auto ops = spin_operators(layout.d);
  const Matrix dot = spin_dot(ops);
  const Matrix bond = J * (std::cos(theta) * dot + std::sin(theta) * (dot * dot));
  Matrix H = chain_from_bond(layout, bond);
  add_field(H, layout, h);
  return H;
}

Matrix build_spin_star(int targets, int d, double J, double h) {
  const SystemLayout layout{Topology::star, targets, d};
  layout.validate();
  require_finite(J, "J");
  require_finite(h, "h");
  const auto ops = spin_operators(d);
  const auto dims = layout.dims();

  Matrix H = h * embed_operator(ops.sz, SystemLayout::regulator_site(), dims);
  if (J != 0.0) {
    for (int i = 1; i <= targets; ++i) {
      const std::pair<int, Matrix> xx[] = {{0, ops.sx}, {i, ops.sx}};
      const std::pair<int, Matrix> yy[] = {{0, ops.sy}, {i, ops.sy}};
      H += J * (embed_product(xx, dims) + embed_product(yy, dims));
    }
  }
  return H;
}

Matrix build_hamiltonian(const SystemLayout& layout, const HamiltonianSpec& spec) {
  if (const auto* x = std::get_if<XXZParams>(&spec)) {
    return build_xxz(layout, x->J, x->delta, x->h);
  }
  if (const auto* b = std::get_if<BBHParams>(&spec)) {
    return build_bbh(layout, b->J, b->theta, b->h);
  }
  const auto& s = std::get<SpinStarParams>(spec);
  if (layout.topology != Topology::star) {
    throw InvalidArgument("spin-star model requires a star layout");
  }
  return build_spin_star(layout.targets, layout.d, s.J, s.h);
}

Matrix total_sz(const SystemLayout& layout) {
  layout.validate();
  const Eigen::Index D = layout.dimension();
  Matrix H = Matrix::Zero(D, D);
  add_field(H, layout, 1.0);
  return H;
}

}  // namespace subcool
