#include "knlb/experiments/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>

#include "knlb/bounds/bounds.hpp"
#include "knlb/experiments/fit.hpp"
#include "knlb/kernelmat/approximation.hpp"
#include "knlb/kernelmat/builders.hpp"
#include "knlb/kernelmat/correlation.hpp"
#include "knlb/krr/krr.hpp"
#include "knlb/sampling/rng.hpp"
#include "knlb/spectral/spectral.hpp"
#include "knlb/util/parallel.hpp"
#include "knlb/util/stats.hpp"

namespace knlb::experiments {

namespace {

using Stats = std::vector<std::pair<std::string, double>>;

struct Unit {
  std::size_t point, trial;
  Stats stats;
  double wall_time = 0.0;
  std::string error;
};

nlohmann::json kernel_spec(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::gegenbauer_scaling:
      return {{"type", "gegenbauer"}, {"degree", c.degree}};
    case ExperimentKind::hermite_scaling:
      return {{"type", "hermite"}, {"degree", c.degree}};
    default:
      return c.kernel.is_null() ? nlohmann::json{{"type", "hermite"}, {"degree", c.degree}} : c.kernel;
  }
}

Sampler make_sampler(const ExperimentConfig& c, std::size_t d) {
  if (kernel_spec(c).at("type") == "gegenbauer") return Sampler::sphere(d);
  return Sampler::gaussian(c.covariance.build(d));
}

Stats run_unit(const ExperimentConfig& c, const ResolvedPoint& p, std::size_t trial) {
  const Sampler sampler = make_sampler(c, p.d);
  const double rel_tol = c.tolerance("rel_tol", spectral::kDefaultRelTol);
  const std::uint64_t seed = c.seed;
  Stats s;
  switch (c.kind) {
    case ExperimentKind::gegenbauer_scaling:
    case ExperimentKind::hermite_scaling: {
      const RowKernel k = RowKernel::from_json(kernel_spec(c), sampler);
      const DataMatrix x = sampler.draw(p.n, seed, stream_id(p.index, trial, role::data));
      s.emplace_back("op_norm_delta", spectral::op_norm(build_kernel_matrix(x, k, true), rel_tol));
      break;
    }
    case ExperimentKind::approx_decay: {
      const KernelFunction f = KernelFunction::from_json(c.kernel);
      const Rational q = *p.q;
      const DataMatrix x = sampler.draw(p.n, seed, stream_id(p.index, trial, role::data));
      const SymMatrix g = gram(x);
      const SymMatrix k = build_K_from_gram(g, f, sampler.spec().tau(1));
      const SymMatrix kbar = c.approx == "iso" ? build_K_bar_iso_from_gram(g, p.d, f, q)
                                               : build_K_bar_aniso_from_gram(g, f, q, sampler.spec());
      s.emplace_back("op_norm_error", spectral::op_norm(k - kbar, rel_tol));
      s.emplace_back("op_norm_K", spectral::op_norm(k, rel_tol));
      break;
    }
    case ExperimentKind::bound_terms: {
      const RowKernel k = RowKernel::from_json(kernel_spec(c), sampler);
      BoundOptions opts;
      opts.rel_tol = rel_tol;
      opts.point = p.index;
      opts.z_samples = c.mc_samples;
      const TrialTerms t = thm1_trial(sampler, k, p.n, seed, trial, opts);
      s = {{"max_diag", t.max_diag},         {"mean_sq", t.mean_sq},
           {"norm_G", t.norm_G},             {"max_dev_sq", t.max_dev_sq},
           {"sqrt_n_norm_G", t.sqrt_n_norm_G}, {"sqrt_sum_Gii", t.sqrt_sum_Gii},
           {"norm_K", t.norm_K},             {"norm_offdiag_K", t.norm_offdiag_K},
           {"budget_exhausted", t.budget_exhausted ? 1.0 : 0.0}};
      break;
    }
    case ExperimentKind::decoupling: {
      const RowKernel k = RowKernel::from_json(kernel_spec(c), sampler);
      const DataMatrix x = sampler.draw(p.n, seed, stream_id(p.index, trial, role::data));
      const DataMatrix xt = sampler.draw(p.n, seed, stream_id(p.index, trial, role::decoupled));
      s.emplace_back("norm_delta", spectral::op_norm(build_kernel_matrix(x, k, true), rel_tol));
      s.emplace_back("norm_delta_tilde", spectral::op_norm(build_decoupled_delta(x, xt, k), rel_tol));
      break;
    }
    case ExperimentKind::krr_bias: {
      const RowKernel k = RowKernel::from_json(c.kernel, sampler);
      const TargetFunction g = TargetFunction::from_json(c.target, p.d);
      const CovarianceSpec& spec = sampler.spec();
      const DataMatrix x = sampler.draw(p.n, seed, stream_id(p.index, trial, role::data));
      const SymMatrix kmat = build_kernel_matrix(x, k);
      const std::vector<double> gv = target_eval(g, x, spec);
      const MVEstimate mv = estimate_M_V(x, k, g, spec, c.mc_samples, seed, stream_id(p.index, trial, role::z_samples));
      const BiasResult b = krr_bias(kmat, gv, mv, target_norm_and_tail(g, 0).norm2, c.lambda);
      s = {{"bias", b.bias},   {"bias_stderr", b.std_error}, {"cross", b.cross},
           {"quad", b.quad},   {"min_eig", b.min_eig},       {"jitter_used", b.jitter_used ? 1.0 : 0.0}};
      break;
    }
  }
  return s;
}

nlohmann::json point_extras(const ExperimentConfig& c, const ResolvedPoint& p,
                            const std::map<std::string, std::vector<double>>& cols) {
  nlohmann::json e = nlohmann::json::object();
  auto col = [&](const std::string& name) {
    const auto it = cols.find(name);
    return it == cols.end() ? std::vector<double>{} : it->second;
  };
  switch (c.kind) {
    case ExperimentKind::bound_terms: {
      const auto md = col("max_diag"), ms = col("mean_sq"), ng = col("norm_G"), mx = col("max_dev_sq"),
                 lc = col("sqrt_n_norm_G"), ld = col("sqrt_sum_Gii"), nk = col("norm_K"), no = col("norm_offdiag_K"),
                 be = col("budget_exhausted");
      std::vector<TrialTerms> per(md.size());
      for (std::size_t t = 0; t < per.size(); ++t)
        per[t] = {md[t], ms[t], ng[t], mx[t], lc[t], ld[t], nk[t], no[t], be[t] != 0.0};
      if (per.size() >= 2) {
        const Sampler sampler = make_sampler(c, p.d);
        const RowKernel k = RowKernel::from_json(kernel_spec(c), sampler);
        e["bound_report"] =
            aggregate_bound_terms(per, p.n, p.d, k.describe(), has_closed_form_G(k, sampler)).to_json();
      }
      break;
    }
    case ExperimentKind::decoupling: {
      auto a = col("norm_delta"), b = col("norm_delta_tilde");
      if (a.size() >= 2) e["decoupling"] = aggregate_decoupling(std::move(a), std::move(b), p.n, p.d).to_json();
      break;
    }
    case ExperimentKind::krr_bias: {
      const TargetFunction g = TargetFunction::from_json(c.target, p.d);
      const int barrier = int(p.q->floor_four_thirds_q());
      e["norm2"] = target_norm_and_tail(g, 0).norm2;
      e["barrier_degree"] = barrier;
      e["tail_at_barrier"] = target_norm_and_tail(g, barrier).tail;
      e["tail_at_floor_q"] = target_norm_and_tail(g, int(p.q->floor_q())).tail;
      break;
    }
    default:
      break;
  }
  return e;
}

}  // namespace

std::string primary_statistic(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::gegenbauer_scaling:
    case ExperimentKind::hermite_scaling:
      return "op_norm_delta";
    case ExperimentKind::approx_decay:
      return "op_norm_error";
    case ExperimentKind::bound_terms:
      return "norm_K";
    case ExperimentKind::decoupling:
      return "norm_delta";
    case ExperimentKind::krr_bias:
      return "bias";
  }
  return "";
}

RunResult run(const ExperimentConfig& c, const RunOptions& opts) {
  const auto points = c.resolve_grid();
  std::vector<Unit> units;
  for (const auto& p : points)
    for (std::size_t t = 0; t < c.trials; ++t) units.push_back({p.index, t, {}, 0.0, {}});

  std::mutex progress_mutex;
  std::size_t done = 0;
  parallel_for(units.size(), opts.workers, [&](std::size_t u) {
    Unit& unit = units[u];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      unit.stats = run_unit(c, points[unit.point], unit.trial);
      for (const auto& [name, v] : unit.stats)
        if (!std::isfinite(v)) throw std::runtime_error("non-finite " + name);
    } catch (const std::exception& e) {
      unit.stats.clear();
      unit.error = e.what();
    }
    unit.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opts.progress) {
      std::lock_guard lock(progress_mutex);
      ++done;
      const auto& p = points[unit.point];
      opts.progress("[" + std::to_string(done) + "/" + std::to_string(units.size()) + "] point " +
                    std::to_string(unit.point) + " (n=" + std::to_string(p.n) + ", d=" + std::to_string(p.d) +
                    ") trial " + std::to_string(unit.trial) + (unit.error.empty() ? "" : " FAILED: " + unit.error));
    }
  });

  RunResult result;
  nlohmann::json pts = nlohmann::json::array();
  const std::string primary = primary_statistic(c.kind);
  std::vector<std::pair<double, double>> fit_points;
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& p : points) {
    std::map<std::string, std::vector<double>> cols;
    std::vector<std::string> order;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& u : units) {
      if (u.point != p.index) continue;
      if (!u.error.empty()) {
        failures.push_back({{"trial", u.trial}, {"error", u.error}});
        continue;
      }
      for (const auto& [name, v] : u.stats) {
        if (!cols.count(name)) order.push_back(name);
        cols[name].push_back(v);
        result.records.push_back({p.index, p.n, p.d, u.trial, name, v, u.wall_time});
      }
    }
    nlohmann::json stats = nlohmann::json::object();
    for (const auto& name : order) {
      const auto ms = mean_stderr(cols[name]);
      stats[name] = {{"mean", ms.mean},
                     {"stderr", ms.std_error},
                     {"count", ms.count},
                     {"lag1_autocorr", lag1_autocorrelation(cols[name])}};
    }
    nlohmann::json pj{{"point", p.index}, {"n", p.n}, {"d", p.d}, {"statistics", stats}, {"failures", failures}};
    if (p.q) pj["q"] = p.q->str();
    const nlohmann::json extras = point_extras(c, p, cols);
    for (auto it = extras.begin(); it != extras.end(); ++it) pj[it.key()] = it.value();
    pts.push_back(pj);
    if (cols.count(primary) && !cols[primary].empty()) {
      const double mean = mean_stderr(cols[primary]).mean;
      if (mean > 0)
        fit_points.emplace_back(double(p.d), mean);
      else
        excluded.push_back({{"point", p.index}, {"reason", "non-positive mean"}});
    } else {
      excluded.push_back({{"point", p.index}, {"reason", "no successful trials"}});
    }
  }

  nlohmann::json fit;
  try {
    fit = fit_loglog(fit_points).to_json();
    fit["statistic"] = primary;
  } catch (const std::exception& e) {
    fit = {{"statistic", primary}, {"error", e.what()}};
  }
  fit["excluded"] = excluded;
  result.summary = {{"schema", 1},
                    {"kind", to_string(c.kind)},
                    {"config", c.to_json()},
                    {"log_base", "e"},
                    {"points", pts},
                    {"fit", fit}};
  return result;
}

void write_records_csv(std::ostream& os, std::span<const ScalingRecord> records) {
  os << "point,n,d,trial,statistic,value,wall_time\n";
  os << std::setprecision(17);
  for (const auto& r : records)
    os << r.point << ',' << r.n << ',' << r.d << ',' << r.trial << ',' << r.statistic << ',' << r.value << ','
       << r.wall_time << '\n';
}

void write_outputs(const RunResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  {
    std::ofstream os(base / "records.csv");
    if (!os) throw std::runtime_error("cannot write " + (base / "records.csv").string());
    write_records_csv(os, result.records);
  }
  std::ofstream os(base / "summary.json");
  if (!os) throw std::runtime_error("cannot write " + (base / "summary.json").string());
  os << result.summary.dump(2) << '\n';
}

}  // namespace knlb::experiments
