#ifndef MORSE2D_DGVF_HPP
#define MORSE2D_DGVF_HPP

#include <array>
#include <functional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "common.hpp"
#include "complex.hpp"

namespace morse2d {

// Matching on the Hasse graph stored as two id arrays.
// up[c]   = coface matched with c (c is the lower cell of the pair), or NIL
// down[c] = face matched with c (c is the upper cell of the pair), or NIL
class MorseMatching {
 public:
  MorseMatching() = default;
  explicit MorseMatching(std::size_t num_cells) : up_(num_cells, NIL), down_(num_cells, NIL) {}
  explicit MorseMatching(const OrientedComplex2& c) : MorseMatching(c.num_cells()) {}

  std::size_t size() const noexcept { return up_.size(); }

  CellId pair(CellId c) const noexcept { return up_[static_cast<std::size_t>(c)]; }
  CellId rev_pair(CellId c) const noexcept { return down_[static_cast<std::size_t>(c)]; }

  bool is_critical(CellId c) const noexcept { return pair(c) == NIL && rev_pair(c) == NIL; }
  bool is_matched(CellId c) const noexcept { return !is_critical(c); }

  // Records <face, coface>. Both must currently be unmatched.
  void match(CellId face, CellId coface) {
    if (is_matched(face) || is_matched(coface))
      throw InternalError("matching cell " + std::to_string(face) + " or " + std::to_string(coface) + " twice");
    up_[static_cast<std::size_t>(face)] = coface;
    down_[static_cast<std::size_t>(coface)] = face;
  }

  void unmatch(CellId face) {
    const CellId co = pair(face);
    if (co == NIL) return;
    up_[static_cast<std::size_t>(face)] = NIL;
    down_[static_cast<std::size_t>(co)] = NIL;
  }

  bool operator==(const MorseMatching&) const = default;

 private:
  std::vector<CellId> up_;
  std::vector<CellId> down_;
};

struct MorseCounts {
  std::array<std::size_t, 3> c{0, 0, 0};
  std::array<std::vector<CellId>, 3> critical;  // ascending ids per dimension

  std::size_t total() const noexcept { return c[0] + c[1] + c[2]; }
  std::int64_t euler() const noexcept {
    return static_cast<std::int64_t>(c[0]) - static_cast<std::int64_t>(c[1]) + static_cast<std::int64_t>(c[2]);
  }
};

// Alternating cell sequence of a V-path. For paths produced by
// trace_inverse_path the sequence runs from the 1-cell backwards to the source;
// `source` is the critical 2-cell it emanates from, or a boundary 1-cell.
struct GradientPath {
  std::vector<CellId> cells;
  int multiplicity = 1;
  CellId source = NIL;
  bool from_boundary = false;
};

// Structural sanity: pair/rev_pair inverse, dimensions differ by one, faces
// really are faces.
inline void check_matching(const MorseMatching& m, const OrientedComplex2& c) {
  if (m.size() != c.num_cells()) throw InternalError("matching size does not match complex");
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto x = static_cast<CellId>(i);
    const CellId up = m.pair(x);
    if (up != NIL) {
      if (m.rev_pair(x) != NIL) throw InternalError("cell " + std::to_string(x) + " occurs in two pairs");
      if (m.rev_pair(up) != x) throw InternalError("pair/rev_pair not inverse at " + std::to_string(x));
      c.incidence(up, x);
    }
  }
}

// True iff the matching-reoriented Hasse graph has no directed cycle. Cycles
// stay inside one level, so each level is checked on its own with Kahn's
// algorithm over the lower cells: x -> y when y is a face of pair(x), y != x.
inline bool is_acyclic(const MorseMatching& m, const OrientedComplex2& c, OpCounter* ops = nullptr) {
  for (int d = 1; d <= 2; ++d) {
    const CellId lo = c.first_id(d - 1);
    const std::size_t n = c.num_cells(d - 1);
    std::vector<int> indeg(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const CellId x = lo + static_cast<CellId>(i);
      const CellId up = m.pair(x);
      if (up == NIL) continue;
      for (CellId y : c.faces(up)) {
        if (ops) ++ops->hasse_visits;
        if (y != x) ++indeg[static_cast<std::size_t>(y - lo)];
      }
    }
    std::vector<CellId> stack;
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] == 0) stack.push_back(lo + static_cast<CellId>(i));
    std::size_t seen = 0;
    while (!stack.empty()) {
      const CellId x = stack.back();
      stack.pop_back();
      ++seen;
      const CellId up = m.pair(x);
      if (up == NIL) continue;
      for (CellId y : c.faces(up))
        if (y != x && --indeg[static_cast<std::size_t>(y - lo)] == 0) stack.push_back(y);
    }
    if (seen != n) return false;
  }
  return true;
}

inline MorseCounts critical_cells(const MorseMatching& m, const OrientedComplex2& c) {
  MorseCounts out;
  for (int d = 0; d <= 2; ++d) {
    const CellId first = c.first_id(d);
    for (std::size_t i = 0; i < c.num_cells(d); ++i) {
      const CellId x = first + static_cast<CellId>(i);
      if (m.is_critical(x)) out.critical[static_cast<std::size_t>(d)].push_back(x);
    }
    out.c[static_cast<std::size_t>(d)] = out.critical[static_cast<std::size_t>(d)].size();
  }
  return out;
}

// Follows the gradient flow backwards from 1-cell `gamma` through its coface
// `start` until reaching a critical 2-cell or a boundary 1-cell from which the
// flow emanates. The sequence is gamma, start, e1, t1, e2, t2, ...
inline GradientPath trace_inverse_path(const MorseMatching& m, const OrientedComplex2& c, CellId gamma,
                                       CellId start) {
  if (c.dim(gamma) != 1 || c.dim(start) != 2) throw Error("trace_inverse_path expects a 1-cell and a 2-cell");
  const int first_sign = c.incidence(start, gamma);
  if (m.pair(gamma) == start) throw Error("no gradient path enters " + std::to_string(gamma) + " through its own pair");

  GradientPath p;
  p.cells = {gamma, start};
  p.multiplicity = first_sign;
  CellId tri = start;
  const std::size_t limit = c.num_cells(2) + 1;
  for (std::size_t steps = 0;; ++steps) {
    if (steps > limit) throw InternalError("inverse gradient path does not terminate (cyclic matching)");
    if (m.is_critical(tri)) {
      p.source = tri;
      return p;
    }
    const CellId entry = m.rev_pair(tri);
    if (entry == NIL) throw InternalError("2-cell matched upward");
    p.cells.push_back(entry);
    // reversing the step tri <- entry flips the sign by -<d tri, entry>
    p.multiplicity *= -c.incidence(tri, entry);
    const CellId prev = c.other_coface(entry, tri);
    if (prev == NIL) {
      p.source = entry;
      p.from_boundary = true;
      return p;
    }
    p.multiplicity *= c.incidence(prev, entry);
    p.cells.push_back(prev);
    tri = prev;
  }
}

// Topological order of the reoriented Hasse graph, ascending: every edge's
// target precedes its source. Ties broken by smallest cell id. Throws on a
// cycle.
inline std::vector<CellId> topological_sort_cells(const MorseMatching& m, const OrientedComplex2& c,
                                                  OpCounter* ops = nullptr) {
  const std::size_t n = c.num_cells();
  // out-degree: number of cells that must come before x
  std::vector<int> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = static_cast<CellId>(i);
    for (CellId f : c.faces(x)) {
      if (ops) ++ops->hasse_visits;
      if (m.pair(f) != x) ++pending[i];  // down-edge x -> f
    }
    if (m.pair(x) != NIL) ++pending[i];  // up-edge x -> pair(x)
  }
  std::priority_queue<CellId, std::vector<CellId>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (pending[i] == 0) ready.push(static_cast<CellId>(i));

  std::vector<CellId> order;
  order.reserve(n);
  auto release = [&](CellId y) {
    if (--pending[static_cast<std::size_t>(y)] == 0) ready.push(y);
  };
  while (!ready.empty()) {
    const CellId x = ready.top();
    ready.pop();
    order.push_back(x);
    // sources pointing at x: cofaces via down-edges, and the face matched up into x
    for (CellId r : c.cofaces(x)) {
      if (ops) ++ops->hasse_visits;
      if (m.pair(x) != r) release(r);
    }
    if (m.rev_pair(x) != NIL) release(m.rev_pair(x));
  }
  if (order.size() != n) throw InternalError("gradient field has a closed V-path");
  return order;
}

// Discrete Morse function compatible with the field: position in the
// ascending topological order.
inline std::vector<std::int64_t> morse_function_from_matching(const MorseMatching& m, const OrientedComplex2& c) {
  const auto order = topological_sort_cells(m, c);
  std::vector<std::int64_t> f(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) f[static_cast<std::size_t>(order[i])] = static_cast<std::int64_t>(i);
  return f;
}

// Graphviz dump of the reoriented Hasse graph: matched pairs point up.
inline void write_hasse_dot(std::ostream& out, const MorseMatching& m, const OrientedComplex2& c) {
  out << "digraph hasse {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < c.num_cells(); ++i) {
    const auto x = static_cast<CellId>(i);
    out << "  c" << x << " [label=\"" << x << " (d" << c.dim(x) << ")\"";
    if (m.is_critical(x)) out << ", style=filled, fillcolor=salmon";
    out << "];\n";
  }
  for (const auto& e : HasseGraph(c).edges()) {
    if (m.pair(e.face) == e.coface)
      out << "  c" << e.face << " -> c" << e.coface << " [color=blue, penwidth=2];\n";
    else
      out << "  c" << e.coface << " -> c" << e.face << ";\n";
  }
  out << "}\n";
}

}  // namespace morse2d

#endif  // MORSE2D_DGVF_HPP
