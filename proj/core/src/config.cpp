#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json_support.hpp"

namespace subcool::experiments {

namespace detail {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_number(int x) { return std::to_string(x); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const BathSpec& bath) {
  Json j;
  j["T_E"] = bath.temperature;
  j["gamma"] = bath.gamma;
  j["omega"] = bath.omega;
  j["target_site"] = bath.target_site;
  return j;
}

Json to_json(const ProtocolConfig& c) {
  Json j;
  j["layout"] = {{"topology", to_string(c.layout.topology)},
                 {"L", c.layout.targets},
                 {"d", c.layout.d}};
  Json model;
  model["type"] = model_name(c.hamiltonian);
  model["J"] = coupling(c.hamiltonian);
  if (const auto* x = std::get_if<XXZParams>(&c.hamiltonian)) model["Delta"] = x->delta;
  if (const auto* b = std::get_if<BBHParams>(&c.hamiltonian)) model["theta"] = b->theta;
  model["h"] = local_field(c.hamiltonian);
  j["model"] = model;

  Json proto;
  proto["tau"] = c.tau;
  proto["N"] = c.steps;
  proto["k"] = c.rank;
  if (c.regulator_prep) proto["regulator_prep"] = *c.regulator_prep;
  if (!c.target_betas.empty()) {
    Json betas = Json::array();
    for (double b : c.target_betas) {
      if (std::isinf(b)) {
        betas.push_back("inf");
      } else {
        betas.push_back(b);
      }
    }
    proto["target_betas"] = betas;
  }
  if (c.reference_field) proto["reference_field"] = *c.reference_field;
  j["protocol"] = proto;
  if (c.bath) j["bath"] = to_json(*c.bath);
  return j;
}

Json to_json(const SweepSpec& spec) {
  Json j;
  if (!spec.preset_id.empty()) j["preset_id"] = spec.preset_id;
  const Json base = to_json(spec.base);
  for (const auto& [key, value] : base.items()) j[key] = value;
  Json axes = Json::object();
  const auto& a = spec.axes;
  if (!a.d.empty()) axes["d"] = a.d;
  if (!a.k.empty()) axes["k"] = a.k;
  if (!a.delta.empty()) axes["Delta"] = a.delta;
  if (!a.theta.empty()) axes["theta"] = a.theta;
  if (!a.jtau.empty()) axes["Jtau"] = a.jtau;
  if (!a.steps.empty()) axes["N"] = a.steps;
  if (!axes.empty()) j["axes"] = axes;
  if (!spec.outputs.empty()) j["outputs"] = spec.outputs;
  return j;
}

}  // namespace detail

namespace {

using detail::Json;

// Read-only view of a JSON value that knows its own path.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_, what); }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& item : j_.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char* k) { return item.key() == k; });
      if (!known) child_path_fail(item.key(), "unknown field");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.contains(key)) child_path_fail(key, "required field missing");
    return Node(j_.at(key), join(key));
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double x = j_.get<double>();
    if (!std::isfinite(x)) fail("expected a finite number");
    return x;
  }

  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    const auto v = j_.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      fail("integer out of range");
    }
    return static_cast<int>(v);
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  std::vector<Node> elements() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_.size(); ++i) {
      out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& e : elements()) out.push_back(e.number());
    return out;
  }

  std::vector<int> integers() const {
    std::vector<int> out;
    for (const auto& e : elements()) out.push_back(e.integer());
    return out;
  }

  /// Number, or the strings "inf" / "infinity".
  double extended_number() const {
    if (j_.is_string()) {
      const auto s = j_.get<std::string>();
      if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
      fail("expected a number or \"inf\"");
    }
    return number();
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  [[noreturn]] void child_path_fail(const std::string& key, const std::string& what) const {
    throw ConfigError(join(key), what);
  }

  const Json& j_;
  std::string path_;
};

template <class T>
void require_nonempty_unique(const Node& n, const std::vector<T>& values) {
  if (values.empty()) n.fail("axis must be non-empty");
  std::set<T> seen(values.begin(), values.end());
  if (seen.size() != values.size()) n.fail("axis values must be distinct");
}

SweepSpec parse(const Json& root) {
  const Node r(root, "");
  if (!root.is_object()) throw ConfigError("(root)", "expected an object");
  r.expect_object({"preset_id", "layout", "model", "protocol", "bath", "axes", "outputs"});

  SweepSpec spec;
  if (r.has("preset_id")) spec.preset_id = r.at("preset_id").string();
  if (r.has("outputs")) spec.outputs = r.at("outputs").string();
  ProtocolConfig& c = spec.base;

  const Node layout = r.at("layout");
  layout.expect_object({"topology", "L", "d"});
  if (layout.has("topology")) {
    const Node t = layout.at("topology");
    try {
      c.layout.topology = topology_from_string(t.string());
    } catch (const InvalidArgument& e) {
      t.fail(e.what());
    }
  }
  if (layout.has("L")) c.layout.targets = layout.at("L").integer();
  if (c.layout.targets < 1) layout.at("L").fail("must be >= 1");
  c.layout.d = layout.at("d").integer();
  if (c.layout.d < 2) layout.at("d").fail("must be >= 2");

  const Node model = r.at("model");
  const Node type = model.at("type");
  const std::string name = type.string();
  const auto num_or = [&](const char* key, double fallback) {
    return model.has(key) ? model.at(key).number() : fallback;
  };
  if (name == "xxz") {
    model.expect_object({"type", "J", "Delta", "h"});
    c.hamiltonian = XXZParams{num_or("J", 1.0), num_or("Delta", 0.0), num_or("h", 1.0)};
  } else if (name == "bbh") {
    model.expect_object({"type", "J", "theta", "h"});
    c.hamiltonian = BBHParams{num_or("J", 1.0), num_or("theta", 0.0), num_or("h", 1.0)};
  } else if (name == "star") {
    model.expect_object({"type", "J", "h"});
    c.hamiltonian = SpinStarParams{num_or("J", 1.0), num_or("h", 1.0)};
  } else {
    type.fail("unknown model '" + name + "' (expected xxz, bbh or star)");
  }
  const double J = coupling(c.hamiltonian);
  if (local_field(c.hamiltonian) == 0.0) {
    model.at("h").fail("field h must be nonzero (it fixes the energy ordering)");
  }
  if ((name == "star") != (c.layout.topology == Topology::star)) {
    model.at("type").fail("model '" + name + "' does not match topology '" +
                          to_string(c.layout.topology) + "'");
  }

  const bool has_axes = r.has("axes");
  const Json empty_object = Json::object();
  const Node axes = has_axes ? r.at("axes") : Node(empty_object, "axes");
  axes.expect_object({"d", "k", "Delta", "theta", "Jtau", "N"});

  const Node proto = r.at("protocol");
  proto.expect_object({"tau", "Jtau", "N", "k", "regulator_prep", "target_betas",
                       "reference_field"});
  if (proto.has("tau") && proto.has("Jtau")) proto.fail("give either tau or Jtau, not both");
  if (proto.has("tau")) {
    c.tau = proto.at("tau").number();
  } else if (proto.has("Jtau")) {
    if (J == 0.0) proto.at("Jtau").fail("Jtau needs a nonzero coupling J");
    c.tau = proto.at("Jtau").number() / J;
  } else if (!axes.has("Jtau")) {
    proto.fail("one of tau, Jtau (or axes.Jtau) is required");
  }
  if (proto.has("N")) {
    c.steps = proto.at("N").integer();
    if (c.steps < 0) proto.at("N").fail("must be >= 0");
  } else if (!axes.has("N")) {
    proto.fail("N (or axes.N) is required");
  }
  if (proto.has("k")) c.rank = proto.at("k").integer();
  if (proto.has("regulator_prep")) c.regulator_prep = proto.at("regulator_prep").integer();
  if (proto.has("target_betas")) {
    const Node betas = proto.at("target_betas");
    for (const auto& e : betas.elements()) {
      const double b = e.extended_number();
      if (b < 0) e.fail("inverse temperature must be >= 0");
      c.target_betas.push_back(b);
    }
    if (static_cast<int>(c.target_betas.size()) != c.layout.targets) {
      betas.fail("needs one entry per target qudit (L = " +
                 std::to_string(c.layout.targets) + ")");
    }
  }
  if (proto.has("reference_field")) c.reference_field = proto.at("reference_field").number();

  if (r.has("bath")) {
    const Node bath = r.at("bath");
    bath.expect_object({"T_E", "gamma", "omega", "target_site"});
    BathSpec b;
    b.omega = std::abs(local_field(c.hamiltonian));
    b.target_site = c.layout.targets;
    if (bath.has("T_E")) b.temperature = bath.at("T_E").number();
    if (bath.has("gamma")) b.gamma = bath.at("gamma").number();
    if (bath.has("omega")) b.omega = bath.at("omega").number();
    if (bath.has("target_site")) b.target_site = bath.at("target_site").integer();
    try {
      b.validate(c.layout.sites());
    } catch (const InvalidArgument& e) {
      bath.fail(e.what());
    }
    c.bath = b;
  }

  auto& a = spec.axes;
  if (axes.has("d")) {
    const Node n = axes.at("d");
    a.d = n.integers();
    require_nonempty_unique(n, a.d);
    for (int d : a.d) {
      if (d < 2) n.fail("every d must be >= 2");
    }
  }
  if (axes.has("k")) {
    const Node n = axes.at("k");
    a.k = n.integers();
    require_nonempty_unique(n, a.k);
  }
  if (axes.has("Delta")) {
    const Node n = axes.at("Delta");
    if (name != "xxz") n.fail("Delta axis needs model xxz");
    a.delta = n.numbers();
    require_nonempty_unique(n, a.delta);
  }
  if (axes.has("theta")) {
    const Node n = axes.at("theta");
    if (name != "bbh") n.fail("theta axis needs model bbh");
    a.theta = n.numbers();
    require_nonempty_unique(n, a.theta);
  }
  if (axes.has("Jtau")) {
    const Node n = axes.at("Jtau");
    if (J == 0.0) n.fail("Jtau axis needs a nonzero coupling J");
    a.jtau = n.numbers();
    require_nonempty_unique(n, a.jtau);
    c.tau = a.jtau.front() / J;
  }
  if (axes.has("N")) {
    const Node n = axes.at("N");
    a.steps = n.integers();
    require_nonempty_unique(n, a.steps);
    for (int s : a.steps) {
      if (s < 1) n.fail("every N must be >= 1");
    }
    const int top = *std::max_element(a.steps.begin(), a.steps.end());
    if (proto.has("N") && c.steps != top) {
      proto.at("N").fail("must equal max(axes.N) when both are given");
    }
    c.steps = top;
  }

  // Field-level checks passed; anything left is a cross-field problem of a
  // particular grid point.
  expand_grid(spec);
  return spec;
}

}  // namespace

std::vector<GridPoint> expand_grid(const SweepSpec& spec) {
  const auto& a = spec.axes;
  const ProtocolConfig& base = spec.base;
  const double J = coupling(base.hamiltonian);

  const std::vector<int> ds = a.d.empty() ? std::vector<int>{base.layout.d} : a.d;
  const std::vector<int> ks = a.k.empty() ? std::vector<int>{base.rank} : a.k;
  const std::vector<double> deltas =
      a.delta.empty() ? std::vector<double>{shape_parameter(base.hamiltonian)} : a.delta;
  const std::vector<double> thetas =
      a.theta.empty() ? std::vector<double>{shape_parameter(base.hamiltonian)} : a.theta;
  std::vector<double> taus;
  if (a.jtau.empty()) {
    taus.push_back(base.tau);
  } else {
    if (J == 0.0) throw ConfigError("axes.Jtau", "Jtau axis needs a nonzero coupling J");
    for (double x : a.jtau) taus.push_back(x / J);
  }
  std::vector<int> record(a.steps);
  std::sort(record.begin(), record.end());

  const bool xxz = std::holds_alternative<XXZParams>(base.hamiltonian);
  const bool bbh = std::holds_alternative<BBHParams>(base.hamiltonian);
  const std::size_t n_delta = xxz ? deltas.size() : 1;
  const std::size_t n_theta = bbh ? thetas.size() : 1;

  std::vector<GridPoint> grid;
  for (int d : ds) {
    for (std::size_t i = 0; i < n_delta; ++i) {
      for (std::size_t t = 0; t < n_theta; ++t) {
        for (double tau : taus) {
          for (int k : ks) {
            GridPoint g;
            g.index = grid.size();
            g.config = base;
            g.config.layout.d = d;
            g.config.rank = k;
            g.config.tau = tau;
            if (auto* x = std::get_if<XXZParams>(&g.config.hamiltonian)) {
              x->delta = deltas[i];
            }
            if (auto* b = std::get_if<BBHParams>(&g.config.hamiltonian)) {
              b->theta = thetas[t];
            }
            g.record_steps = record;
            if (!record.empty()) g.config.steps = record.back();
            try {
              g.config.validate();
            } catch (const ConfigError&) {
              throw;
            } catch (const InvalidArgument& e) {
              throw ConfigError("grid point " + std::to_string(g.index) + " (d=" +
                                    std::to_string(d) + ", k=" + std::to_string(k) + ")",
                                e.what());
            }
            grid.push_back(std::move(g));
          }
        }
      }
    }
  }
  if (grid.empty()) throw ConfigError("axes", "grid is empty");
  return grid;
}

SweepSpec parse_sweep_spec(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("(root)", std::string("malformed JSON: ") + e.what());
  }
  return parse(root);
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_sweep_spec(text.str());
}

std::string resolved_config_json(const SweepSpec& spec) {
  return detail::dump(detail::to_json(spec));
}

}  // namespace subcool::experiments
