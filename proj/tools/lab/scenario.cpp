#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "backflow/error.hpp"
#include "csv.hpp"

namespace lab {

using backflow::ConfigError;
using nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const std::vector<ScenarioInfo> kCatalogue = {
    {ScenarioKind::Fig1a, "fig1a", 1, "J_-(0,T) of the Bracken-Melloy state under Milburn evolution, Lambda^-1 = 0..0.02"},
    {ScenarioKind::Fig1b, "fig1b", 1, "J_-(0,T) of the complex-damped state under Milburn evolution, Lambda^-1 = 0..0.02"},
    {ScenarioKind::Fig2, "fig2", 2, "J(0,T) of the two-Gaussian superposition under Milburn evolution"},
    {ScenarioKind::Fig3, "fig3", 3, "J_-(0,T) of the superposition, plus first-interval amount and duration vs Lambda^-1"},
    {ScenarioKind::Fig4, "fig4", 4, "Pr(P<0,T) and Pr(X<0,T) of a Gaussian under L = x, P0 = 3, kappa = 5, 15"},
    {ScenarioKind::Fig5, "fig5", 5, "largest backflow eigenvalue vs u0 for eps = 1, 0.5, 0.1, 0.01 and the classical limit"},
    {ScenarioKind::Fig6, "fig6", 6, "scaled current and Pr(X<0,T) of the Bracken-Melloy state, eps = 1, 0.5, 0.1"},
    {ScenarioKind::Fig7, "fig7", 7, "Pr(X<0,T) of the superposition for eps = 1, 0.5, 0.1, 0, with a zoom near T = 0"},
    {ScenarioKind::Fig8a, "fig8a", 8, "J_-(0,T) of the Bracken-Melloy state under Caldirola-Kanai damping, Gamma = 0, 5, 10, 15"},
    {ScenarioKind::Fig8b, "fig8b", 8, "J_-(0,T) under Caldirola-Kanai damping at Gamma = 8 for eps = 1, 0.5, 0.1"},
    {ScenarioKind::Custom, "custom", 0, "state, law and grid read from --config"},
};

// ---------------------------------------------------------------------------
// Tree access with field paths in every message.

class Table {
 public:
  Table(const ordered_json& node, std::string path) : node_(node), path_(std::move(path)) {}

  std::string key(const std::string& name) const { return path_.empty() ? name : path_ + "." + name; }
  bool has(const std::string& name) const { return node_.contains(name); }

  const ordered_json& require(const std::string& name) const {
    if (!has(name)) throw ConfigError("missing required key " + key(name));
    return node_.at(name);
  }

  double number(const std::string& name) const {
    const ordered_json& v = require(name);
    if (!v.is_number()) throw ConfigError(key(name) + " must be a number");
    return v.get<double>();
  }

  int integer(const std::string& name) const {
    const ordered_json& v = require(name);
    if (!v.is_number_integer()) throw ConfigError(key(name) + " must be an integer");
    const auto x = v.get<long long>();
    if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(key(name) + " is out of range");
    return static_cast<int>(x);
  }

  std::string string(const std::string& name) const {
    const ordered_json& v = require(name);
    if (!v.is_string()) throw ConfigError(key(name) + " must be a string");
    return v.get<std::string>();
  }

  Table table(const std::string& name) const {
    const ordered_json& v = require(name);
    if (!v.is_object()) throw ConfigError(key(name) + " must be a table");
    return Table(v, key(name));
  }

  void only(std::initializer_list<const char*> allowed) const {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : node_.items())
      if (!ok.count(k)) throw ConfigError("unknown key " + key(k));
  }

 private:
  const ordered_json& node_;
  std::string path_;
};

backflow::StateKind parse_state(const Table& t) {
  const std::string kind = t.string("kind");
  if (kind == "bracken_melloy") {
    t.only({"kind", "epsilon"});
    return backflow::BrackenMelloy{t.number("epsilon")};
  }
  if (kind == "complex_damped") {
    t.only({"kind"});
    return backflow::ComplexDamped{};
  }
  if (kind == "exponential") {
    t.only({"kind"});
    return backflow::Exponential{};
  }
  if (kind == "gaussian_superposition") {
    t.only({"kind", "p0a", "p0b", "alpha", "theta", "epsilon"});
    return backflow::GaussianSuperposition{t.number("p0a"), t.number("p0b"), t.number("alpha"),
                                           t.number("theta"), t.number("epsilon")};
  }
  if (kind == "single_gaussian") {
    t.only({"kind", "p0"});
    return backflow::SingleGaussian{t.number("p0")};
  }
  throw ConfigError(t.key("kind") + ": unknown state '" + kind +
                    "' (bracken_melloy, complex_damped, exponential, gaussian_superposition, single_gaussian)");
}

backflow::EvolutionModel parse_model(const Table& t) {
  using namespace backflow;
  const std::string kind = t.string("kind");
  if (kind == "von_neumann") {
    t.only({"kind"});
    return VonNeumann{};
  }
  if (kind == "milburn") {
    t.only({"kind", "lambda_inv"});
    return Milburn{t.number("lambda_inv")};
  }
  if (kind == "lindblad_p" || kind == "lindblad_p2") {
    t.only({"kind", "kappa"});
    return LindbladF{kind == "lindblad_p" ? LindbladFunction::Momentum : LindbladFunction::MomentumSquared,
                     t.number("kappa")};
  }
  if (kind == "scaled_free") {
    t.only({"kind", "epsilon"});
    return ScaledFree{t.number("epsilon")};
  }
  if (kind == "caldirola_kanai") {
    t.only({"kind", "epsilon", "gamma"});
    return ScaledCK{t.number("epsilon"), t.number("gamma")};
  }
  throw ConfigError(t.key("kind") + ": unknown law '" + kind +
                    "' (von_neumann, milburn, lindblad_p, lindblad_p2, scaled_free, caldirola_kanai)");
}

ordered_json state_json(const backflow::StateKind& s) {
  return std::visit(overloaded{
                        [](const backflow::BrackenMelloy& b) -> ordered_json {
                          return {{"kind", "bracken_melloy"}, {"epsilon", b.epsilon}};
                        },
                        [](const backflow::ComplexDamped&) -> ordered_json { return {{"kind", "complex_damped"}}; },
                        [](const backflow::Exponential&) -> ordered_json { return {{"kind", "exponential"}}; },
                        [](const backflow::GaussianSuperposition& g) -> ordered_json {
                          return {{"kind", "gaussian_superposition"}, {"p0a", g.p0a}, {"p0b", g.p0b},
                                  {"alpha", g.alpha},   {"theta", g.theta}, {"epsilon", g.epsilon}};
                        },
                        [](const backflow::SingleGaussian& g) -> ordered_json {
                          return {{"kind", "single_gaussian"}, {"p0", g.p0}};
                        },
                    },
                    s);
}

ordered_json model_json(const backflow::EvolutionModel& m) {
  using namespace backflow;
  return std::visit(overloaded{
                        [](const VonNeumann&) -> ordered_json { return {{"kind", "von_neumann"}}; },
                        [](const Milburn& x) -> ordered_json {
                          return {{"kind", "milburn"}, {"lambda_inv", x.lambda_inv}};
                        },
                        [](const LindbladF& x) -> ordered_json {
                          return {{"kind", x.f == LindbladFunction::Momentum ? "lindblad_p" : "lindblad_p2"},
                                  {"kappa", x.kappa}};
                        },
                        [](const ScaledFree& x) -> ordered_json {
                          return {{"kind", "scaled_free"}, {"epsilon", x.epsilon}};
                        },
                        [](const ScaledCK& x) -> ordered_json {
                          return {{"kind", "caldirola_kanai"}, {"epsilon", x.epsilon}, {"gamma", x.gamma}};
                        },
                    },
                    m);
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalogue() { return kCatalogue; }

const ScenarioInfo& scenario_info(ScenarioKind kind) {
  for (const auto& s : kCatalogue)
    if (s.kind == kind) return s;
  throw backflow::ContractViolation("unknown scenario kind");
}

ScenarioKind parse_scenario_name(const std::string& name) {
  std::string known;
  for (const auto& s : kCatalogue) {
    if (name == s.name) return s.kind;
    known += (known.empty() ? "" : ", ") + std::string(s.name);
  }
  throw ConfigError("unknown scenario '" + name + "' (" + known + ")");
}

ScenarioConfig default_config(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  c.name = scenario_info(kind).name;
  switch (kind) {
    case ScenarioKind::Fig1a:
    case ScenarioKind::Fig1b:
      c.t_max = 0.1;
      c.n_samples = 201;
      break;
    case ScenarioKind::Fig2:
    case ScenarioKind::Fig3:
      c.t_max = 0.2;
      c.n_samples = 801;
      break;
    case ScenarioKind::Fig4:
    case ScenarioKind::Fig7:
      c.t_max = 3.0;
      c.n_samples = 601;
      break;
    case ScenarioKind::Fig5:
      break;
    case ScenarioKind::Fig6:
      c.t_max = 5.0;
      c.n_samples = 2049;
      break;
    case ScenarioKind::Fig8a:
    case ScenarioKind::Fig8b:
      c.t_max = 0.1;
      c.n_samples = 1001;
      break;
    case ScenarioKind::Custom:
      break;
  }
  return c;
}

ScenarioConfig config_from_tree(const ordered_json& tree) {
  const Table root(tree, "");
  root.only({"scenario", "state", "model", "grid", "quadrature", "output"});
  const ScenarioKind kind = parse_scenario_name(root.string("scenario"));
  ScenarioConfig c = default_config(kind);
  const bool custom = kind == ScenarioKind::Custom;
  if (custom) {
    c.state = parse_state(root.table("state"));
    c.model = parse_model(root.table("model"));
  } else {
    for (const char* pinned : {"state", "model"})
      if (root.has(pinned))
        throw ConfigError(std::string(pinned) + ": scenario " + c.name + " pins its " + pinned +
                          "; use scenario = \"custom\"");
  }
  if (custom || root.has("grid")) {
    const Table grid = root.table("grid");
    grid.only({"t_max", "n_samples"});
    if (custom || grid.has("t_max")) c.t_max = grid.number("t_max");
    if (custom || grid.has("n_samples")) c.n_samples = grid.integer("n_samples");
  }
  if (root.has("quadrature")) {
    const Table q = root.table("quadrature");
    q.only({"nodes"});
    c.nodes = q.integer("nodes");
  }
  if (root.has("output")) {
    const Table out = root.table("output");
    out.only({"dir", "name"});
    if (out.has("dir")) c.out_dir = out.string("dir");
    if (out.has("name")) c.name = out.string("name");
  }
  validate(c);
  return c;
}

void apply_overrides(ScenarioConfig& c, const Overrides& o) {
  if (o.t_max) c.t_max = *o.t_max;
  if (o.nodes) c.nodes = *o.nodes;
  if (o.threads) c.threads = *o.threads;
  if (o.out_dir) c.out_dir = *o.out_dir;
  validate(c);
}

void validate(const ScenarioConfig& c) {
  const bool timeless = c.kind == ScenarioKind::Fig5;
  if (!timeless) {
    if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw ConfigError("grid.t_max must be finite and > 0");
    if (c.n_samples < 5) throw ConfigError("grid.n_samples must be >= 5");
    if (c.n_samples > 1000000) throw ConfigError("grid.n_samples must be <= 1000000");
  }
  if (c.nodes != 0 && timeless && c.nodes < 50) throw ConfigError("quadrature.nodes must be >= 50 for fig5");
  if (c.nodes != 0 && !timeless && (c.nodes < 4 || c.nodes > 128))
    throw ConfigError("quadrature.nodes must lie in [4, 128]");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.name.empty() || c.name.find('/') != std::string::npos)
    throw ConfigError("output.name must be a plain file stem");
  if (c.kind == ScenarioKind::Custom) {
    if (!c.state) throw ConfigError("missing required key state.kind");
    if (!c.model) throw ConfigError("missing required key model.kind");
    try {
      backflow::validate(*c.model);
      (void)backflow::MomentumState(*c.state);
    } catch (const backflow::Error& e) {
      throw ConfigError(std::string("state/model: ") + e.what());
    }
  }
}

ordered_json to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["scenario"] = scenario_info(c.kind).name;
  if (c.state) j["state"] = state_json(*c.state);
  if (c.model) j["model"] = model_json(*c.model);
  if (c.kind != ScenarioKind::Fig5) j["grid"] = {{"t_max", c.t_max}, {"n_samples", c.n_samples}};
  j["quadrature"] = {{"nodes", c.nodes}};
  j["output"] = {{"dir", c.out_dir}, {"name", c.name}};
  return j;
}

std::string describe_state(const backflow::StateKind& state) {
  return backflow::MomentumState(state).describe();
}

}  // namespace lab
