#ifndef MORSE2D_JSON_HPP
#define MORSE2D_JSON_HPP

#include <json.hpp>

#include "algebra.hpp"
#include "dgvf.hpp"
#include "morse_boundary.hpp"

namespace morse2d {

// Integers are written as JSON numbers when they fit in 64 bits, as decimal
// strings otherwise.
inline nlohmann::json to_json_value(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

inline nlohmann::json to_json(const AbelianGroup& g) {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& x : g.torsion) t.push_back(to_json_value(x));
  return {{"free_rank", g.free_rank}, {"torsion", t}, {"text", g.to_string()}};
}

inline nlohmann::json to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json_value(m(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.row_ids}, {"cols", m.col_ids}, {"data", rows}};
}

inline nlohmann::json to_json(const MorseBoundaryOperator& op) {
  return {{"delta1", to_json(op.delta1)}, {"delta2", to_json(op.delta2)}};
}

inline nlohmann::json to_json(const MorseCounts& k) {
  return {{"c", k.c}, {"critical", k.critical}, {"upsilon", k.total()}};
}

inline nlohmann::json to_json(const HomologyResult& h) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : h.groups) groups.push_back(to_json(g));
  return {{"coefficients", h.coefficients.to_string()}, {"betti", h.betti}, {"groups", groups}};
}

inline nlohmann::json to_json(const MorseMatching& m) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto x = static_cast<CellId>(i);
    if (m.pair(x) != NIL) pairs.push_back({x, m.pair(x)});
  }
  return pairs;
}

}  // namespace morse2d

#endif  // MORSE2D_JSON_HPP
