#include "knlb/krr/target.hpp"

#include <cmath>
#include <stdexcept>

#include "knlb/orthopoly/hermite.hpp"

namespace knlb {

TargetFunction::TargetFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.direction.size() != terms_.front().direction.size())
      throw std::invalid_argument("target directions differ in dimension");
    double s = 0.0;
    for (double v : t.direction) s += v * v;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-12) throw std::invalid_argument("target direction is not a unit vector");
  }
}

TargetFunction TargetFunction::single_hermite(std::size_t d, int degree, std::vector<double> direction) {
  if (direction.empty()) {
    direction.assign(d, 0.0);
    direction[0] = 1.0;
  }
  std::vector<double> alpha(std::size_t(degree) + 1, 0.0);
  alpha[degree] = 1.0;
  return TargetFunction({Term{1.0, std::move(direction), std::move(alpha)}});
}

TargetFunction TargetFunction::from_json(const nlohmann::json& j, std::size_t d) {
  std::vector<Term> terms;
  for (const auto& t : j.at("terms")) {
    Term term{t.value("weight", 1.0), {}, t.at("hermite").get<std::vector<double>>()};
    const auto& dir = t.contains("direction") ? t.at("direction") : nlohmann::json("e1");
    if (dir.is_string()) {
      const std::string s = dir.get<std::string>();
      if (s == "e1") {
        term.direction.assign(d, 0.0);
        term.direction[0] = 1.0;
      } else if (s == "e2") {
        if (d < 2) throw std::invalid_argument("direction e2 needs d >= 2");
        term.direction.assign(d, 0.0);
        term.direction[1] = 1.0;
      } else if (s == "uniform") {
        term.direction.assign(d, 1.0 / std::sqrt(double(d)));
      } else {
        throw std::invalid_argument("unknown target direction '" + s + "'");
      }
    } else {
      term.direction = dir.get<std::vector<double>>();
      if (term.direction.size() != d) throw std::invalid_argument("target direction has wrong dimension");
    }
    terms.push_back(std::move(term));
  }
  return TargetFunction(std::move(terms));
}

nlohmann::json TargetFunction::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms_) arr.push_back({{"weight", t.weight}, {"direction", t.direction}, {"hermite", t.hermite}});
  return {{"terms", arr}};
}

int TargetFunction::max_degree() const {
  int m = 0;
  for (const auto& t : terms_)
    for (std::size_t j = 0; j < t.hermite.size(); ++j)
      if (t.hermite[j] != 0.0) m = std::max(m, int(j));
  return m;
}

double TargetFunction::operator()(std::span<const double> x, const CovarianceSpec& spec) const {
  if (x.size() != dim()) throw std::invalid_argument("target: dimension mismatch");
  if (!spec.invertible()) throw std::domain_error("target evaluation needs an invertible covariance");
  const auto& se = spec.sqrt_eigenvalues();
  double out = 0.0;
  std::vector<double> he;
  for (const auto& t : terms_) {
    double proj = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) proj += x[i] / se[i] * t.direction[i];
    if (t.hermite.empty()) continue;
    he.resize(t.hermite.size());
    orthopoly::hermite_eval_all(int(t.hermite.size()) - 1, proj, he);
    double gk = 0.0;
    for (std::size_t j = 0; j < t.hermite.size(); ++j) gk += t.hermite[j] * he[j];
    out += t.weight * gk;
  }
  return out;
}

std::vector<double> target_eval(const TargetFunction& g, const DataMatrix& x, const CovarianceSpec& spec) {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = g(x.row(i), spec);
  return out;
}

NormAndTail target_norm_and_tail(const TargetFunction& g, int degree) {
  const auto& terms = g.terms();
  double norm2 = 0.0, tail = 0.0;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = 0; b < terms.size(); ++b) {
      double ip = 0.0;
      for (std::size_t i = 0; i < terms[a].direction.size(); ++i) ip += terms[a].direction[i] * terms[b].direction[i];
      const std::size_t jmax = std::min(terms[a].hermite.size(), terms[b].hermite.size());
      double fact = 1.0, ipj = 1.0;
      for (std::size_t j = 0; j < jmax; ++j) {
        if (j > 0) {
          fact *= double(j);
          ipj *= ip;
        }
        const double v = terms[a].weight * terms[b].weight * terms[a].hermite[j] * terms[b].hermite[j] * fact * ipj;
        norm2 += v;
        if (int(j) > degree) tail += v;
      }
    }
  }
  return {norm2, tail};
}

}  // namespace knlb
