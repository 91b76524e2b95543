#include "knlb/orthopoly/coeff_table.hpp"

#include <algorithm>
#include <stdexcept>

#include "knlb/orthopoly/gegenbauer.hpp"
#include "knlb/orthopoly/hermite.hpp"

namespace knlb::orthopoly {

std::string to_string(CoeffKind kind) {
  switch (kind) {
    case CoeffKind::monomial_to_hermite:
      return "monomial-to-hermite";
    case CoeffKind::hermite_mult:
      return "hermite-mult";
    case CoeffKind::gegenbauer_projection:
      return "gegenbauer-projection";
  }
  return "unknown";
}

CoeffKind coeff_kind_from_string(const std::string& s) {
  if (s == "monomial-to-hermite") return CoeffKind::monomial_to_hermite;
  if (s == "hermite-mult") return CoeffKind::hermite_mult;
  if (s == "gegenbauer-projection") return CoeffKind::gegenbauer_projection;
  throw std::invalid_argument("unknown coefficient table kind '" + s + "'");
}

nlohmann::json CoeffTable::to_json() const {
  nlohmann::json entries_json = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json row = nlohmann::json::array();
    for (int i : e.indices) row.push_back(i);
    row.push_back(e.value);
    entries_json.push_back(std::move(row));
  }
  return {{"kind", to_string(kind)}, {"params", params}, {"entries", std::move(entries_json)}};
}

CoeffTable CoeffTable::from_json(const nlohmann::json& j) {
  CoeffTable t{coeff_kind_from_string(j.at("kind").get<std::string>())};
  t.params = j.at("params");
  for (const auto& row : j.at("entries")) {
    if (!row.is_array() || row.size() < 2) throw std::invalid_argument("malformed coefficient entry");
    CoeffEntry e;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) e.indices.push_back(row[i].get<int>());
    e.value = row.back().get<double>();
    t.entries.push_back(std::move(e));
  }
  return t;
}

CoeffTable monomial_hermite_table(int max_degree) {
  CoeffTable t{CoeffKind::monomial_to_hermite};
  t.params = {{"max_degree", max_degree}};
  for (int l = 0; l <= max_degree; ++l) {
    const auto c = monomial_hermite_coeffs(l);
    for (int k = 0; k <= l; ++k)
      if (c[k] != 0.0) t.entries.push_back({{k, l}, c[k]});
  }
  return t;
}

CoeffTable hermite_mult_table(int max_degree, double gamma) {
  CoeffTable t{CoeffKind::hermite_mult};
  t.params = {{"max_degree", max_degree}, {"gamma", gamma}};
  for (int l = 0; l <= max_degree; ++l)
    for (const auto& term : hermite_mult_coeffs(l, gamma)) t.entries.push_back({{l, term.degree}, term.coeff});
  return t;
}

CoeffTable gegenbauer_projection_table(int d, int max_degree, int max_j) {
  CoeffTable t{CoeffKind::gegenbauer_projection};
  t.params = {{"d", d}, {"max_degree", max_degree}, {"max_j", max_j}};
  for (int l = 0; l <= max_degree; ++l) {
    const auto c = gegenbauer_proj_coeffs(d, l, std::min(l, max_j));
    for (int j = 0; j < int(c.coeffs.size()); ++j)
      if (c.coeffs[j] != 0.0) t.entries.push_back({{j, l}, c.coeffs[j]});
  }
  return t;
}

}  // namespace knlb::orthopoly
