#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "knlb/experiments/config.hpp"
#include "knlb/experiments/identities.hpp"
#include "knlb/experiments/run.hpp"
#include "knlb/kernelmat/approximation.hpp"
#include "knlb/kernelmat/builders.hpp"
#include "knlb/kernelmat/correlation.hpp"
#include "knlb/orthopoly/coeff_table.hpp"
#include "knlb/sampling/binary_io.hpp"
#include "knlb/sampling/rng.hpp"
#include "knlb/simd/kernels.hpp"
#include "knlb/util/parallel.hpp"

namespace ex = knlb::experiments;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTestFailure = 1;
constexpr int kExitConfig = 2;

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t workers = knlb::default_workers();
  std::vector<std::string> tol;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config, "experiment config (JSON)")->required();
  cmd->add_option("--out", a.out, "output directory for records.csv and summary.json");
  cmd->add_option("--seed", a.seed, "master seed (overrides the config and KNLB_SEED)");
  cmd->add_option("--workers", a.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", a.tol, "tolerance override KEY=VALUE (repeatable)");
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("KNLB_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ex::ConfigError("KNLB_SEED", std::string("not an unsigned integer: ") + s);
  }
}

int run_experiment(const RunArgs& a, std::vector<ex::ExperimentKind> accepted, const std::string& command) {
  std::ifstream is(a.config);
  if (!is) throw ex::ConfigError("--config", "cannot open " + a.config);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ex::ConfigError("--config", std::string("malformed JSON: ") + e.what());
  }
  // Seed precedence: --seed, then the config's own "seed", then KNLB_SEED.
  if (a.seed)
    j["seed"] = *a.seed;
  else if (j.is_object() && !j.contains("seed"))
    if (const auto s = env_seed()) j["seed"] = *s;
  for (const auto& kv : a.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ex::ConfigError("--tol", "expected KEY=VALUE, got '" + kv + "'");
    try {
      j["tolerances"][kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ex::ConfigError("--tol", "bad value in '" + kv + "'");
    }
  }
  const auto config = ex::ExperimentConfig::from_json(j);
  if (std::find(accepted.begin(), accepted.end(), config.kind) == accepted.end())
    throw ex::ConfigError("kind", "'" + ex::to_string(config.kind) + "' cannot be run by '" + command + "'");

  ex::RunOptions opts;
  opts.workers = a.workers;
  opts.progress = [](const std::string& msg) { std::cerr << msg << '\n'; };
  std::cerr << "knlb " << command << ": " << ex::to_string(config.kind) << ", simd=" << knlb::simd::isa_name(knlb::simd::active().isa)
            << ", workers=" << a.workers << '\n';
  const auto result = ex::run(config, opts);
  const std::string out = a.out.empty() ? "runs/" + ex::to_string(config.kind) : a.out;
  ex::write_outputs(result, out);
  std::cout << out << "/summary.json\n";
  const auto& fit = result.summary["fit"];
  if (fit.contains("slope"))
    std::cerr << "fit " << fit["statistic"].get<std::string>() << ": slope " << fit["slope"].get<double>() << " +- "
              << fit["stderr_slope"].get<double>() << '\n';
  for (const auto& p : result.summary["points"])
    if (!p["failures"].empty()) {
      std::cerr << "point " << p["point"] << " had " << p["failures"].size() << " failed trials\n";
    }
  return kExitOk;
}

knlb::Sampler sampler_for(const std::string& dist, std::size_t d, const std::string& covariance, double exponent) {
  if (dist == "sphere") return knlb::Sampler::sphere(d);
  if (dist != "gaussian") throw ex::ConfigError("--dist", "expected gaussian or sphere");
  ex::CovarianceConfig cc;
  cc.type = covariance;
  cc.exponent = exponent;
  return knlb::Sampler::gaussian(cc.build(d));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knlb: random kernel matrix experiments"};
  app.require_subcommand(1);

  bool quick = false;
  std::optional<std::uint64_t> id_seed;
  auto* ids = app.add_subcommand("check-identities", "run the exact and Monte Carlo identity suites");
  ids->add_flag("--quick", quick, "reduced sample sizes");
  ids->add_option("--seed", id_seed, "seed for the Monte Carlo suites");

  RunArgs scaling_a, approx_a, bounds_a, decouple_a, krr_a;
  auto* scaling = app.add_subcommand("scaling", "gegenbauer-scaling / hermite-scaling sweeps");
  add_run_options(scaling, scaling_a);
  auto* approx = app.add_subcommand("approx", "approximation-decay sweeps");
  add_run_options(approx, approx_a);
  auto* bounds = app.add_subcommand("bounds", "upper and lower bound term sweeps");
  add_run_options(bounds, bounds_a);
  auto* decouple = app.add_subcommand("decouple", "decoupling-ratio sweeps");
  add_run_options(decouple, decouple_a);
  auto* krr = app.add_subcommand("krr-bias", "KRR bias sweeps");
  add_run_options(krr, krr_a);

  auto* exp = app.add_subcommand("export", "coefficient tables, data batches and matrices");
  exp->require_subcommand(1);

  std::string coeff_kind = "monomial-to-hermite", out_path;
  int degree = 6, dim = 20, max_j = -1;
  double gamma = 2.0;
  auto* coeffs = exp->add_subcommand("coeffs", "coefficient table as JSON");
  coeffs->add_option("--kind", coeff_kind, "monomial-to-hermite | hermite-mult | gegenbauer-projection");
  coeffs->add_option("--degree", degree, "maximum degree");
  coeffs->add_option("--d", dim, "dimension (gegenbauer-projection)");
  coeffs->add_option("--gamma", gamma, "scale (hermite-mult)");
  coeffs->add_option("--max-j", max_j, "largest Gegenbauer index (default: degree)");
  coeffs->add_option("--out", out_path, "output file (default: stdout)");

  std::string dist = "gaussian", covariance = "identity", what = "K", format = "bin", kernel_json, q_text = "1";
  double exponent = -0.5;
  std::size_t n = 100, d = 100;
  std::uint64_t seed = 0, stream = 0;
  auto* data = exp->add_subcommand("data", "binary dump of a sample batch");
  auto* matrix = exp->add_subcommand("matrix", "binary or CSV dump of a matrix");
  for (auto* c : {data, matrix}) {
    c->add_option("--dist", dist, "gaussian | sphere");
    c->add_option("--covariance", covariance, "identity | power");
    c->add_option("--exponent", exponent, "power-law exponent");
    c->add_option("--n", n, "rows");
    c->add_option("--d", d, "dimension");
    c->add_option("--seed", seed, "master seed");
    c->add_option("--stream", stream, "stream id");
    c->add_option("--out", out_path, "output file")->required();
  }
  matrix->add_option("--what", what, "K | Delta | G | K_bar | K_bar_iso");
  matrix->add_option("--kernel", kernel_json, "kernel spec as JSON, e.g. {\"type\":\"hermite\",\"degree\":2}");
  matrix->add_option("--q", q_text, "scaling exponent for K_bar");
  matrix->add_option("--format", format, "bin | csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*ids) {
      ex::IdentityOptions o;
      o.quick = quick;
      if (id_seed) o.seed = *id_seed;
      else if (const auto s = env_seed()) o.seed = *s;
      const auto checks = ex::run_identity_suites(o);
      ex::print_identity_table(std::cout, checks);
      for (const auto& c : checks)
        if (!c.passed) return kExitTestFailure;
      return kExitOk;
    }
    using K = ex::ExperimentKind;
    if (*scaling) return run_experiment(scaling_a, {K::gegenbauer_scaling, K::hermite_scaling}, "scaling");
    if (*approx) return run_experiment(approx_a, {K::approx_decay}, "approx");
    if (*bounds) return run_experiment(bounds_a, {K::bound_terms}, "bounds");
    if (*decouple) return run_experiment(decouple_a, {K::decoupling}, "decouple");
    if (*krr) return run_experiment(krr_a, {K::krr_bias}, "krr-bias");

    if (*coeffs) {
      knlb::orthopoly::CoeffTable t;
      switch (knlb::orthopoly::coeff_kind_from_string(coeff_kind)) {
        case knlb::orthopoly::CoeffKind::monomial_to_hermite:
          t = knlb::orthopoly::monomial_hermite_table(degree);
          break;
        case knlb::orthopoly::CoeffKind::hermite_mult:
          t = knlb::orthopoly::hermite_mult_table(degree, gamma);
          break;
        case knlb::orthopoly::CoeffKind::gegenbauer_projection:
          t = knlb::orthopoly::gegenbauer_projection_table(dim, degree, max_j < 0 ? degree : max_j);
          break;
      }
      const std::string text = t.to_json().dump(2);
      if (out_path.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot write " + out_path);
        os << text << '\n';
      }
      return kExitOk;
    }
    if (*data || *matrix) {
      const knlb::Sampler sampler = sampler_for(dist, d, covariance, exponent);
      const knlb::DataMatrix x = sampler.draw(n, seed, stream);
      if (*data) {
        knlb::io::write_data_matrix_file(out_path, x);
        return kExitOk;
      }
      nlohmann::json kj = kernel_json.empty() ? nlohmann::json{{"type", "exp"}} : nlohmann::json::parse(kernel_json);
      knlb::SymMatrix m;
      if (what == "K" || what == "Delta") {
        m = knlb::build_kernel_matrix(x, knlb::RowKernel::from_json(kj, sampler), what == "Delta");
      } else if (what == "G") {
        m = knlb::correlation_G_closed(x, knlb::RowKernel::from_json(kj, sampler), sampler);
      } else if (what == "K_bar" || what == "K_bar_iso") {
        const auto f = knlb::KernelFunction::from_json(kj);
        const auto q = knlb::Rational::parse(q_text);
        m = what == "K_bar" ? knlb::build_K_bar_aniso(x, f, q, sampler.spec()) : knlb::build_K_bar_iso(x, f, q);
      } else {
        throw ex::ConfigError("--what", "unknown matrix '" + what + "'");
      }
      if (format == "csv") {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot write " + out_path);
        knlb::io::write_sym_matrix_csv(os, m);
      } else if (format == "bin") {
        knlb::io::write_sym_matrix_file(out_path, m, seed);
      } else {
        throw ex::ConfigError("--format", "expected bin or csv");
      }
      return kExitOk;
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTestFailure;
  }
  return kExitOk;
}
