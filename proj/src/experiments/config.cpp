#include "knlb/experiments/config.hpp"

#include <cmath>
#include <fstream>

namespace knlb::experiments {

namespace {

const std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::gegenbauer_scaling, "gegenbauer-scaling"},
    {ExperimentKind::hermite_scaling, "hermite-scaling"},
    {ExperimentKind::approx_decay, "approx-decay"},
    {ExperimentKind::bound_terms, "bound-terms"},
    {ExperimentKind::decoupling, "decoupling"},
    {ExperimentKind::krr_bias, "krr-bias"},
};

template <class T>
T field(const nlohmann::json& j, const std::string& name, const std::string& path) {
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + name, e.what());
  }
}

Rational parse_q(const nlohmann::json& v, const std::string& path) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number()) return Rational::parse(v.dump());
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected a rational such as \"4/3\"");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

ExperimentKind kind_from_string(const std::string& s) {
  for (const auto& [k, name] : kKindNames)
    if (s == name) return k;
  throw ConfigError("kind", "unknown experiment kind '" + s + "'");
}

CovarianceSpec CovarianceConfig::build(std::size_t d) const {
  if (type == "identity") return CovarianceSpec::identity(d);
  if (type == "power") return CovarianceSpec::power_law(d, exponent);
  if (type == "diag") {
    if (eigenvalues.size() != d) throw ConfigError("covariance.eigenvalues", "length must equal d");
    return CovarianceSpec(eigenvalues);
  }
  throw ConfigError("covariance.type", "unknown covariance type '" + type + "'");
}

nlohmann::json CovarianceConfig::to_json() const {
  nlohmann::json j{{"type", type}};
  if (type == "power") j["exponent"] = exponent;
  if (type == "diag") j["eigenvalues"] = eigenvalues;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  ExperimentConfig c;
  c.schema = j.contains("schema") ? field<int>(j, "schema", "") : 1;
  if (c.schema != 1) throw ConfigError("schema", "unsupported schema version " + std::to_string(c.schema));
  c.kind = kind_from_string(field<std::string>(j, "kind", ""));

  if (!j.contains("grid") || !j["grid"].is_array() || j["grid"].empty())
    throw ConfigError("grid", "must be a non-empty array");
  for (std::size_t i = 0; i < j["grid"].size(); ++i) {
    const auto& e = j["grid"][i];
    const std::string path = "grid[" + std::to_string(i) + "].";
    GridEntry g;
    g.d = field<std::size_t>(e, "d", path);
    if (e.contains("n")) g.n = field<std::size_t>(e, "n", path);
    if (e.contains("q")) g.q = parse_q(e["q"], path + "q");
    if (g.n && g.q) throw ConfigError(path + "n", "give either n or q, not both");
    c.grid.push_back(g);
  }
  if (j.contains("trials")) c.trials = field<std::size_t>(j, "trials", "");
  if (c.trials < 2) throw ConfigError("trials", "must be at least 2");
  if (j.contains("seed")) c.seed = field<std::uint64_t>(j, "seed", "");
  if (j.contains("degree")) c.degree = field<int>(j, "degree", "");
  if (c.degree < 0) throw ConfigError("degree", "must be non-negative");
  if (j.contains("kernel")) {
    if (!j["kernel"].is_object() || !j["kernel"].contains("type"))
      throw ConfigError("kernel", "expected an object with a \"type\"");
    c.kernel = j["kernel"];
  }
  if (j.contains("covariance")) {
    const auto& cv = j["covariance"];
    c.covariance.type = field<std::string>(cv, "type", "covariance.");
    if (c.covariance.type == "power") c.covariance.exponent = field<double>(cv, "exponent", "covariance.");
    if (c.covariance.type == "diag")
      c.covariance.eigenvalues = field<std::vector<double>>(cv, "eigenvalues", "covariance.");
    if (c.covariance.type != "identity" && c.covariance.type != "power" && c.covariance.type != "diag")
      throw ConfigError("covariance.type", "unknown covariance type '" + c.covariance.type + "'");
  }
  if (j.contains("q")) c.q = parse_q(j["q"], "q");
  if (j.contains("approx")) c.approx = field<std::string>(j, "approx", "");
  if (c.approx != "aniso" && c.approx != "iso") throw ConfigError("approx", "must be \"aniso\" or \"iso\"");
  if (j.contains("target")) c.target = j["target"];
  if (j.contains("lambda")) c.lambda = field<double>(j, "lambda", "");
  if (c.lambda < 0) throw ConfigError("lambda", "must be non-negative");
  if (j.contains("mc_samples")) c.mc_samples = field<std::size_t>(j, "mc_samples", "");
  if (j.contains("tolerances")) c.tolerances = field<std::map<std::string, double>>(j, "tolerances", "");
  if (j.contains("allow_large")) c.allow_large = field<bool>(j, "allow_large", "");

  // Kind-specific requirements.
  const bool needs_kernel = c.kind == ExperimentKind::approx_decay || c.kind == ExperimentKind::krr_bias;
  if (needs_kernel && c.kernel.is_null()) throw ConfigError("kernel", "required for " + to_string(c.kind));
  if (c.kind == ExperimentKind::krr_bias && c.target.is_null()) throw ConfigError("target", "required for krr-bias");
  if (c.kind == ExperimentKind::krr_bias && c.mc_samples < 1000) throw ConfigError("mc_samples", "must be >= 1000");
  if (c.kind == ExperimentKind::decoupling && c.trials < 10) throw ConfigError("trials", "decoupling needs >= 10");
  if (c.kind == ExperimentKind::approx_decay || c.kind == ExperimentKind::krr_bias) {
    for (std::size_t i = 0; i < c.grid.size(); ++i)
      if (!c.grid[i].q && !c.q)
        throw ConfigError("q", "required (globally or per grid point) for " + to_string(c.kind));
  }
  if (c.kind == ExperimentKind::gegenbauer_scaling && c.covariance.type != "identity")
    throw ConfigError("covariance", "gegenbauer-scaling uses sphere data; covariance must be identity");
  c.resolve_grid();  // validates sizes
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("<file>", "cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json grid_j = nlohmann::json::array();
  for (const auto& g : grid) {
    nlohmann::json e{{"d", g.d}};
    if (g.n) e["n"] = *g.n;
    if (g.q) e["q"] = g.q->str();
    grid_j.push_back(e);
  }
  nlohmann::json j{{"schema", schema},
                   {"kind", to_string(kind)},
                   {"grid", grid_j},
                   {"trials", trials},
                   {"seed", seed},
                   {"degree", degree},
                   {"covariance", covariance.to_json()},
                   {"approx", approx},
                   {"lambda", lambda},
                   {"mc_samples", mc_samples},
                   {"tolerances", tolerances},
                   {"allow_large", allow_large}};
  if (!kernel.is_null()) j["kernel"] = kernel;
  if (!target.is_null()) j["target"] = target;
  if (q) j["q"] = q->str();
  return j;
}

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

std::vector<ResolvedPoint> ExperimentConfig::resolve_grid() const {
  std::vector<ResolvedPoint> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& g = grid[i];
    const std::string path = "grid[" + std::to_string(i) + "]";
    if (g.d < 2) throw ConfigError(path + ".d", "must be at least 2");
    ResolvedPoint p{i, 0, g.d, g.q ? g.q : q};
    if (g.n) {
      p.n = *g.n;
    } else if (p.q) {
      const double tau1 = covariance.build(g.d).tau(1);
      p.n = std::size_t(std::llround(std::pow(tau1, p.q->value())));
    } else {
      throw ConfigError(path, "needs n or q");
    }
    if (p.n < 2) throw ConfigError(path + ".n", "must be at least 2");
    if (!allow_large && (p.n > kDeskScaleLimit || p.d > kDeskScaleLimit))
      throw ConfigError(path, "n or d exceeds " + std::to_string(kDeskScaleLimit) + " (set allow_large to override)");
    out.push_back(p);
  }
  return out;
}

}  // namespace knlb::experiments
