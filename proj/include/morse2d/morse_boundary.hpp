#ifndef MORSE2D_MORSE_BOUNDARY_HPP
#define MORSE2D_MORSE_BOUNDARY_HPP

#include <algorithm>
#include <array>
#include <unordered_map>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "common.hpp"
#include "complex.hpp"
#include "dgvf.hpp"

namespace morse2d {

// Sparse integer combination of critical cells, kept sorted by cell id with no
// zero coefficients.
class FormalSum {
 public:
  using Term = std::pair<CellId, Integer>;

  FormalSum() = default;
  static FormalSum unit(CellId c) {
    FormalSum s;
    s.terms_.emplace_back(c, 1);
    return s;
  }

  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  Integer coefficient(CellId c) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), c,
                               [](const Term& t, CellId key) { return t.first < key; });
    return (it != terms_.end() && it->first == c) ? it->second : Integer(0);
  }

  // *this += k * other
  void add_scaled(const FormalSum& other, int k, OpCounter* ops = nullptr) {
    if (k == 0 || other.empty()) return;
    if (ops) ops->sum_terms += terms_.size() + other.terms_.size();
    std::vector<Term> out;
    out.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
      if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        out.push_back(std::move(*a++));
      } else if (a == terms_.end() || b->first < a->first) {
        out.emplace_back(b->first, b->second * k);
        ++b;
      } else {
        Integer v = a->second + b->second * k;
        if (v != 0) out.emplace_back(a->first, std::move(v));
        ++a;
        ++b;
      }
    }
    terms_ = std::move(out);
  }

  void scale(int k) {
    if (k == 0) {
      terms_.clear();
      return;
    }
    for (auto& t : terms_) t.second *= k;
  }

  bool operator==(const FormalSum&) const = default;

 private:
  std::vector<Term> terms_;
};

struct MorseBoundaryOperator {
  std::array<std::vector<CellId>, 3> critical;  // registries, ascending ids
  IntMatrix delta1;                             // c0 x c1
  IntMatrix delta2;                             // c1 x c2

  std::size_t index_of(int dim, CellId c) const {
    const auto& v = critical[static_cast<std::size_t>(dim)];
    auto it = std::lower_bound(v.begin(), v.end(), c);
    if (it == v.end() || *it != c) throw Error("cell " + std::to_string(c) + " is not critical");
    return static_cast<std::size_t>(it - v.begin());
  }

  // Entry <Delta beta, alpha> for critical beta of dimension q and alpha of q-1.
  const Integer& entry(CellId beta, int q, CellId alpha) const {
    const IntMatrix& d = q == 1 ? delta1 : delta2;
    return d(index_of(q - 1, alpha), index_of(q, beta));
  }

  bool operator==(const MorseBoundaryOperator&) const = default;
};

namespace detail {

inline MorseBoundaryOperator empty_operator(const MorseCounts& k) {
  MorseBoundaryOperator op;
  op.critical = k.critical;
  op.delta1 = IntMatrix(k.c[0], k.c[1]);
  op.delta2 = IntMatrix(k.c[1], k.c[2]);
  op.delta1.row_ids = k.critical[0];
  op.delta1.col_ids = k.critical[1];
  op.delta2.row_ids = k.critical[1];
  op.delta2.col_ids = k.critical[2];
  return op;
}

}  // namespace detail

// Dynamic program over the ascending topological order. For every cell the
// memo holds one of two sums:
//   critical or matched downward: the flow through its faces, i.e. the sum over
//     faces tau (other than its own pair) of <d sigma, tau> * flow(tau);
//   matched upward with beta: its own flow, -<d beta, sigma> times the face sum
//     of beta.
// A critical face contributes itself and a face matched downward contributes
// nothing. Vertices have an empty face sum.
inline MorseBoundaryOperator calc_bdry_op(const OrientedComplex2& c, const MorseMatching& m,
                                          OpCounter* ops = nullptr) {
  const auto order = topological_sort_cells(m, c, ops);
  const auto counts = critical_cells(m, c);
  auto op = detail::empty_operator(counts);

  std::vector<FormalSum> memo(c.num_cells());
  std::vector<char> done(c.num_cells(), 0);

  auto flow_of = [&](CellId tau) -> const FormalSum* {
    static const FormalSum none;
    if (m.rev_pair(tau) != NIL) return &none;
    if (!done[static_cast<std::size_t>(tau)]) throw InternalError("topological order corrupted at " + std::to_string(tau));
    return &memo[static_cast<std::size_t>(tau)];
  };

  for (CellId sigma : order) {
    if (ops) ++ops->hasse_visits;
    const auto s = static_cast<std::size_t>(sigma);
    const CellId beta = m.pair(sigma);
    if (beta != NIL) {
      if (!done[static_cast<std::size_t>(beta)])
        throw InternalError("topological order corrupted at " + std::to_string(sigma));
      memo[s] = memo[static_cast<std::size_t>(beta)];
      memo[s].scale(-c.incidence(beta, sigma));
      if (ops) ops->sum_terms += memo[s].size();
    } else {
      FormalSum sum;
      const CellId own = m.rev_pair(sigma);
      const auto faces = c.faces(sigma);
      for (std::size_t i = 0; i < faces.size(); ++i) {
        const CellId tau = faces[i];
        if (ops) ++ops->hasse_visits;
        if (tau == own) continue;
        const int sign = OrientedComplex2::face_sign(i);
        if (m.is_critical(tau))
          sum.add_scaled(FormalSum::unit(tau), sign, ops);
        else
          sum.add_scaled(*flow_of(tau), sign, ops);
      }
      memo[s] = std::move(sum);
    }
    done[s] = 1;
  }

  for (int q = 1; q <= 2; ++q) {
    IntMatrix& d = q == 1 ? op.delta1 : op.delta2;
    const auto& cols = counts.critical[static_cast<std::size_t>(q)];
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (const auto& [alpha, k] : memo[static_cast<std::size_t>(cols[j])].terms())
        d(op.index_of(q - 1, alpha), j) = k;
  }
  return op;
}

// Signed count of gradient paths from the faces of critical beta to critical
// alpha, by exhaustive depth-first enumeration. Exponential in the worst case.
inline Integer enumerate_gradient_paths(const MorseMatching& m, const OrientedComplex2& c, CellId beta,
                                        CellId alpha) {
  if (c.dim(alpha) + 1 != c.dim(beta)) throw Error("enumerate_gradient_paths expects dim beta = dim alpha + 1");
  Integer total = 0;
  std::vector<std::pair<CellId, int>> stack;
  const auto bf = c.faces(beta);
  for (std::size_t i = bf.size(); i-- > 0;)
    if (bf[i] != m.rev_pair(beta)) stack.emplace_back(bf[i], OrientedComplex2::face_sign(i));
  while (!stack.empty()) {
    auto [tau, sign] = stack.back();
    stack.pop_back();
    if (tau == alpha) {
      total += sign;
      continue;
    }
    const CellId up = m.pair(tau);
    if (up == NIL) continue;  // critical elsewhere or matched downward
    const int through = sign * -c.incidence(up, tau);
    const auto uf = c.faces(up);
    for (std::size_t i = uf.size(); i-- > 0;)
      if (uf[i] != tau) stack.emplace_back(uf[i], through * OrientedComplex2::face_sign(i));
  }
  return total;
}

// The whole operator assembled from enumerate_gradient_paths.
inline MorseBoundaryOperator enumerate_bdry_op(const OrientedComplex2& c, const MorseMatching& m) {
  const auto counts = critical_cells(m, c);
  auto op = detail::empty_operator(counts);
  for (int q = 1; q <= 2; ++q) {
    IntMatrix& d = q == 1 ? op.delta1 : op.delta2;
    const auto& rows = counts.critical[static_cast<std::size_t>(q - 1)];
    const auto& cols = counts.critical[static_cast<std::size_t>(q)];
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows.size(); ++i) d(i, j) = enumerate_gradient_paths(m, c, cols[j], rows[i]);
  }
  return op;
}

inline HomologyResult morse_homology(const MorseBoundaryOperator& op) {
  return homology_from_chain(op.delta1, op.delta2);
}

}  // namespace morse2d

#endif  // MORSE2D_MORSE_BOUNDARY_HPP
