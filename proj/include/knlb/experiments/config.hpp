#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "knlb/sampling/covariance.hpp"
#include "knlb/util/rational.hpp"

namespace knlb::experiments {

// Malformed or out-of-range configuration; names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ExperimentKind { gegenbauer_scaling, hermite_scaling, approx_decay, bound_terms, decoupling, krr_bias };

std::string to_string(ExperimentKind kind);
ExperimentKind kind_from_string(const std::string& s);

struct CovarianceConfig {
  std::string type = "identity";  // identity | power | diag
  double exponent = 0.0;          // power: lambda_i proportional to i^exponent, ||Sigma|| = 1
  std::vector<double> eigenvalues;  // diag: used verbatim (length must equal d)

  CovarianceSpec build(std::size_t d) const;
  nlohmann::json to_json() const;
};

// A grid entry as written: explicit n, or n = round(tau1^q) with q from the entry or the config.
struct GridEntry {
  std::size_t d = 0;
  std::optional<std::size_t> n;
  std::optional<Rational> q;
};

struct ResolvedPoint {
  std::size_t index;
  std::size_t n, d;
  std::optional<Rational> q;  // scaling exponent the point is run at, if any
};

inline constexpr std::size_t kDeskScaleLimit = 4000;

struct ExperimentConfig {
  int schema = 1;
  ExperimentKind kind = ExperimentKind::hermite_scaling;
  std::vector<GridEntry> grid;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  int degree = 2;                  // polynomial degree for the Delta / Hermite kernels
  nlohmann::json kernel;           // kernel spec (see RowKernel::from_json)
  CovarianceConfig covariance;
  std::optional<Rational> q;       // default exponent when grid entries give n
  std::string approx = "aniso";    // approx-decay: aniso | iso
  nlohmann::json target;           // krr-bias target spec
  double lambda = 1e-3;
  std::size_t mc_samples = 20000;  // krr-bias M/V draws; bound-terms G draws
  std::map<std::string, double> tolerances;  // rel_tol, ...
  bool allow_large = false;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  nlohmann::json to_json() const;

  double tolerance(const std::string& key, double fallback) const;
  std::vector<ResolvedPoint> resolve_grid() const;
};

}  // namespace knlb::experiments
