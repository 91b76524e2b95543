#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace knlb::orthopoly {

enum class CoeffKind { monomial_to_hermite, hermite_mult, gegenbauer_projection };

std::string to_string(CoeffKind kind);
CoeffKind coeff_kind_from_string(const std::string& s);

struct CoeffEntry {
  std::vector<int> indices;
  double value;
};

// Flat, self-describing coefficient table for cross-implementation diffing.
// JSON layout: {"kind": ..., "params": {...}, "entries": [[i, j, value], ...]}.
struct CoeffTable {
  CoeffKind kind;
  nlohmann::json params = nlohmann::json::object();
  std::vector<CoeffEntry> entries = {};

  nlohmann::json to_json() const;
  static CoeffTable from_json(const nlohmann::json& j);
};

// Entries (k, l) -> c_{k,l} for l = 0..max_degree, zeros omitted.
CoeffTable monomial_hermite_table(int max_degree);

// Entries (l, l - 2k) -> multiplication coefficient for He_l(gamma x).
CoeffTable hermite_mult_table(int max_degree, double gamma);

// Entries (j, l) -> c_{j,l}^{(d)} for l = 0..max_degree, j = 0..min(l, max_j).
CoeffTable gegenbauer_projection_table(int d, int max_degree, int max_j);

}  // namespace knlb::orthopoly
