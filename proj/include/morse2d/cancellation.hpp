#ifndef MORSE2D_CANCELLATION_HPP
#define MORSE2D_CANCELLATION_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "complex.hpp"
#include "dgvf.hpp"
#include "frameflow.hpp"

namespace morse2d {

namespace detail {

// Would adding the up-edge face -> coface close a V-path cycle? True iff the
// current reoriented graph already has a path from coface back down to face.
class CycleProbe {
 public:
  explicit CycleProbe(std::size_t n) : stamp_(n, 0) {}

  bool closes_cycle(const MorseMatching& m, const OrientedComplex2& c, CellId face, CellId coface) {
    ++gen_;
    stack_.clear();
    for (CellId y : c.faces(coface))
      if (y != face) stack_.push_back(y);
    while (!stack_.empty()) {
      const CellId y = stack_.back();
      stack_.pop_back();
      if (y == face) return true;
      auto& s = stamp_[static_cast<std::size_t>(y)];
      if (s == gen_) continue;
      s = gen_;
      const CellId t = m.pair(y);
      if (t == NIL) continue;
      for (CellId z : c.faces(t))
        if (z != y) stack_.push_back(z);
    }
    return false;
  }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t gen_ = 0;
  std::vector<CellId> stack_;
};

}  // namespace detail

// Random acyclic matching: Hasse edges in seeded random order, each accepted
// when both ends are free and no closed V-path appears. Maximal among acyclic
// matchings and usually further from optimal than random_dgvf.
inline MorseMatching random_matching(const OrientedComplex2& c, std::uint64_t seed) {
  MorseMatching m(c);
  auto edges = HasseGraph(c).edges();
  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);
  detail::CycleProbe probe(c.num_cells());
  for (const auto& e : edges) {
    if (m.is_matched(e.face) || m.is_matched(e.coface)) continue;
    if (probe.closes_cycle(m, c, e.face, e.coface)) continue;
    m.match(e.face, e.coface);
  }
  return m;
}

// Random collapse: while some cell has exactly one remaining coface and that
// coface is maximal, pick such a free pair uniformly, match it and remove
// both. When none is left, a uniformly chosen remaining cell of the highest
// remaining dimension is removed as critical.
inline MorseMatching random_dgvf(const OrientedComplex2& c, std::uint64_t seed) {
  const std::size_t n = c.num_cells();
  MorseMatching m(c);
  std::mt19937_64 rng(seed);
  std::vector<char> gone(n, 0), listed(n, 0);
  std::vector<int> alive_cofaces(n, 0);
  for (std::size_t i = 0; i < n; ++i) alive_cofaces[i] = static_cast<int>(c.cofaces(static_cast<CellId>(i)).size());

  // remaining cells per dimension with O(1) removal
  std::array<std::vector<CellId>, 3> pool;
  std::vector<std::size_t> slot(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = static_cast<CellId>(i);
    auto& p = pool[static_cast<std::size_t>(c.dim(x))];
    slot[i] = p.size();
    p.push_back(x);
  }
  auto drop = [&](CellId x) {
    auto& p = pool[static_cast<std::size_t>(c.dim(x))];
    const CellId last = p.back();
    p[slot[static_cast<std::size_t>(x)]] = last;
    slot[static_cast<std::size_t>(last)] = slot[static_cast<std::size_t>(x)];
    p.pop_back();
  };

  auto partner = [&](CellId x) {
    for (CellId r : c.cofaces(x))
      if (!gone[static_cast<std::size_t>(r)]) return r;
    return NIL;
  };
  auto is_free = [&](CellId x) {
    if (gone[static_cast<std::size_t>(x)] || alive_cofaces[static_cast<std::size_t>(x)] != 1) return false;
    return alive_cofaces[static_cast<std::size_t>(partner(x))] == 0;
  };

  std::vector<CellId> free;
  auto offer = [&](CellId x) {
    if (!listed[static_cast<std::size_t>(x)] && is_free(x)) {
      listed[static_cast<std::size_t>(x)] = 1;
      free.push_back(x);
    }
  };
  auto remove = [&](CellId x) {
    gone[static_cast<std::size_t>(x)] = 1;
    drop(x);
    for (CellId f : c.faces(x)) {
      if (--alive_cofaces[static_cast<std::size_t>(f)] == 0)
        for (CellId g : c.faces(f)) offer(g);
      offer(f);
    }
  };

  for (std::size_t i = 0; i < n; ++i) offer(static_cast<CellId>(i));
  while (pool[0].size() + pool[1].size() + pool[2].size() > 0) {
    bool paired = false;
    while (!free.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
      const std::size_t k = pick(rng);
      const CellId x = free[k];
      free[k] = free.back();
      free.pop_back();
      listed[static_cast<std::size_t>(x)] = 0;
      if (!is_free(x)) continue;
      const CellId y = partner(x);
      m.match(x, y);
      remove(y);
      remove(x);
      paired = true;
      break;
    }
    if (paired) continue;
    int d = 2;
    while (pool[static_cast<std::size_t>(d)].empty()) --d;
    auto& p = pool[static_cast<std::size_t>(d)];
    std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
    remove(p[pick(rng)]);
  }
  return m;
}

namespace detail {

// memo[x] = number of V-paths from face cell x down to `lower`, saturated at
// `cap`; -1 where never evaluated.
class PathCounter {
 public:
  PathCounter(const MorseMatching& m, const OrientedComplex2& c, CellId lower, int cap)
      : m_(m), c_(c), lower_(lower), cap_(cap), memo_(c.num_cells(), -1) {}

  int from_face(CellId root) {
    struct Frame {
      CellId x;
      std::size_t next;
      int acc;
    };
    std::vector<Frame> st{{root, 0, 0}};
    while (!st.empty()) {
      auto& f = st.back();
      auto& slot = memo_[static_cast<std::size_t>(f.x)];
      if (slot >= 0) {
        st.pop_back();
        continue;
      }
      const CellId t = m_.pair(f.x);
      if (f.x == lower_ || t == NIL) {
        slot = f.x == lower_ ? 1 : 0;
        st.pop_back();
        continue;
      }
      const auto faces = c_.faces(t);
      bool descended = false;
      for (; f.next < faces.size(); ++f.next) {
        const CellId y = faces[f.next];
        if (y == f.x) continue;
        const int v = memo_[static_cast<std::size_t>(y)];
        if (v < 0) {
          st.push_back({y, 0, 0});
          descended = true;
          break;
        }
        f.acc = std::min(cap_, f.acc + v);
      }
      if (descended) continue;
      slot = f.acc;
      st.pop_back();
    }
    return memo_[static_cast<std::size_t>(root)];
  }

  int from_upper(CellId upper) {
    int total = 0;
    for (CellId y : c_.faces(upper))
      if (y != m_.rev_pair(upper)) total = std::min(cap_, total + from_face(y));
    return total;
  }

 private:
  const MorseMatching& m_;
  const OrientedComplex2& c_;
  CellId lower_;
  int cap_;
  std::vector<int> memo_;
};

}  // namespace detail

// Number of V-paths from the faces of `upper` to `lower`, saturated at `cap`.
inline int count_gradient_paths(const MorseMatching& m, const OrientedComplex2& c, CellId lower, CellId upper,
                                int cap = 2) {
  return detail::PathCounter(m, c, lower, cap).from_upper(upper);
}

namespace detail {

// Cells of the unique V-path upper > f0 < t1 > f1 < ... > lower. Caller has
// established that exactly one path exists.
inline std::vector<CellId> unique_path(const MorseMatching& m, const OrientedComplex2& c, CellId lower, CellId upper) {
  PathCounter pc(m, c, lower, 2);
  std::vector<CellId> path{upper};
  CellId cur = upper;
  CellId skip = m.rev_pair(upper);
  for (;;) {
    CellId chosen = NIL;
    for (CellId y : c.faces(cur))
      if (y != skip && pc.from_face(y) > 0) {
        chosen = y;
        break;
      }
    if (chosen == NIL) throw InternalError("lost the gradient path while reversing");
    path.push_back(chosen);
    if (chosen == lower) return path;
    cur = m.pair(chosen);
    skip = chosen;
    path.push_back(cur);
    if (path.size() > c.num_cells() + 2) throw InternalError("gradient path does not terminate");
  }
}

}  // namespace detail

// Cancels the critical pair (lower, upper) by reversing the unique V-path
// between them. Returns the number of pairs flipped, the new pair included.
inline std::size_t cancel_pair(MorseMatching& m, const OrientedComplex2& c, CellId lower, CellId upper) {
  if (c.dim(lower) + 1 != c.dim(upper)) throw Error("cancel_pair expects cells of consecutive dimension");
  if (!m.is_critical(lower) || !m.is_critical(upper))
    throw CancellationError("cells " + std::to_string(lower) + ", " + std::to_string(upper) + " are not both critical",
                            -1);
  const int paths = count_gradient_paths(m, c, lower, upper);
  if (paths != 1)
    throw CancellationError("expected a unique gradient path from " + std::to_string(upper) + " to " +
                                std::to_string(lower) + ", found " + (paths == 0 ? "none" : "several"),
                            paths);
  const auto path = detail::unique_path(m, c, lower, upper);
  // path = upper, f0, t1, f1, ..., tk, lower
  for (std::size_t i = 1; i + 1 < path.size(); i += 2) m.unmatch(path[i]);
  for (std::size_t i = 0; i + 1 < path.size(); i += 2) m.match(path[i + 1], path[i]);
  return path.size() / 2;
}

// ---------------------------------------------------------------------------

// Root of every 2-cell's inverse flow: itself when critical, otherwise the
// critical 2-cell or boundary 1-cell that trace_inverse_path would reach.
// Indexed by triangle offset.
inline std::vector<CellId> triangle_roots(const MorseMatching& m, const OrientedComplex2& c) {
  const CellId t0 = c.first_id(2);
  const std::size_t nt = c.num_cells(2);
  std::vector<CellId> root(nt, NIL);
  std::vector<CellId> chain;
  for (std::size_t i = 0; i < nt; ++i) {
    if (root[i] != NIL) continue;
    chain.clear();
    CellId t = t0 + static_cast<CellId>(i);
    CellId r = NIL;
    for (;;) {
      const auto k = static_cast<std::size_t>(t - t0);
      if (root[k] != NIL) {
        r = root[k];
        break;
      }
      chain.push_back(t);
      if (chain.size() > nt) throw InternalError("closed V-path among 2-cells");
      if (m.is_critical(t)) {
        r = t;
        break;
      }
      const CellId entry = m.rev_pair(t);
      if (entry == NIL) throw InternalError("2-cell matched upward");
      const CellId prev = c.other_coface(entry, t);
      if (prev == NIL) {
        r = entry;
        break;
      }
      t = prev;
    }
    for (CellId x : chain) root[static_cast<std::size_t>(x - t0)] = r;
  }
  return root;
}

// Critical vertex each vertex flows down to.
inline std::vector<CellId> vertex_roots(const MorseMatching& m, const OrientedComplex2& c) {
  const std::size_t nv = c.num_cells(0);
  std::vector<CellId> root(nv, NIL);
  std::vector<CellId> chain;
  for (std::size_t i = 0; i < nv; ++i) {
    if (root[i] != NIL) continue;
    chain.clear();
    auto v = static_cast<CellId>(i);
    CellId r = NIL;
    for (;;) {
      if (root[static_cast<std::size_t>(v)] != NIL) {
        r = root[static_cast<std::size_t>(v)];
        break;
      }
      chain.push_back(v);
      if (chain.size() > nv) throw InternalError("closed V-path among 0-cells");
      const CellId e = m.pair(v);
      if (e == NIL) {
        r = v;
        break;
      }
      const auto f = c.faces(e);
      v = f[0] == v ? f[1] : f[0];
    }
    for (CellId x : chain) root[static_cast<std::size_t>(x)] = r;
  }
  return root;
}

struct CancellationStep {
  std::size_t step = 0;
  int level = 0;  // dimension of the lower cell
  CellId lower = NIL;
  CellId upper = NIL;
  std::string rule;  // "fix_bdry", "saddle", "boundary", "ear"
  std::size_t upsilon_before = 0;
  std::size_t upsilon_after = 0;
};

struct KingFlowOptions {
  std::uint64_t seed = 0;
  bool check_each_step = true;
  std::function<void(const CancellationStep&)> on_step;
};

// Working state of the reduction. Critical lists are recomputed on demand from
// the matching, which stays the single source of truth.
class CancellationState {
 public:
  CancellationState(const OrientedComplex2& c, MorseMatching m, KingFlowOptions opt = {})
      : c_(&c), m_(std::move(m)), opt_(std::move(opt)), labels_(c.component_labels()) {
    upsilon_ = critical_cells(m_, c).total();
  }

  const OrientedComplex2& complex() const noexcept { return *c_; }
  const MorseMatching& matching() const noexcept { return m_; }
  MorseMatching release() && { return std::move(m_); }
  std::size_t upsilon() const noexcept { return upsilon_; }
  const std::vector<CancellationStep>& steps() const noexcept { return steps_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  int component(CellId x) const { return labels_[static_cast<std::size_t>(x)]; }

  std::size_t fix_bdry_skipped = 0;
  std::vector<CellId> kings;

  void cancel(CellId lower, CellId upper, const std::string& rule) {
    CancellationStep s;
    s.step = steps_.size();
    s.level = c_->dim(lower);
    s.lower = lower;
    s.upper = upper;
    s.rule = rule;
    s.upsilon_before = upsilon_;
    cancel_pair(m_, *c_, lower, upper);
    upsilon_ -= 2;
    s.upsilon_after = upsilon_;
    if (opt_.check_each_step && !is_acyclic(m_, *c_))
      throw InternalError("cancellation of (" + std::to_string(lower) + ", " + std::to_string(upper) +
                          ") produced a closed V-path");
    steps_.push_back(s);
    if (opt_.on_step) opt_.on_step(s);
  }

  std::vector<CellId> critical_of(int dim, int comp) const {
    std::vector<CellId> out;
    const CellId first = c_->first_id(dim);
    for (std::size_t i = 0; i < c_->num_cells(dim); ++i) {
      const CellId x = first + static_cast<CellId>(i);
      if (component(x) == comp && m_.is_critical(x)) out.push_back(x);
    }
    return out;
  }

  std::mt19937_64& rng() { return rng_; }
  void reseed() { rng_.seed(opt_.seed); }

 private:
  const OrientedComplex2* c_;
  MorseMatching m_;
  KingFlowOptions opt_;
  std::vector<int> labels_;
  std::size_t upsilon_ = 0;
  std::vector<CancellationStep> steps_;
  std::mt19937_64 rng_{opt_.seed};
};

// Pairs every critical boundary face of dimension d-1 with its coface, first
// reversing the flow into that coface from the critical d-cell it came from.
// Cofaces whose flow starts on another boundary face are left alone and
// counted in fix_bdry_skipped. Only d = 2 has boundary faces on a surface.
inline void fix_bdry(CancellationState& st, int d, int comp) {
  if (d != 2) return;
  const auto& c = st.complex();
  for (CellId b : boundary_faces(c, 1)) {
    if (st.component(b) != comp || !st.matching().is_critical(b)) continue;
    const CellId cob = c.cofaces(b)[0];
    if (st.matching().is_critical(cob)) {
      st.cancel(b, cob, "fix_bdry");
      continue;
    }
    const CellId r = triangle_roots(st.matching(), c)[static_cast<std::size_t>(cob - c.first_id(2))];
    if (c.dim(r) == 2)
      st.cancel(b, r, "fix_bdry");
    else
      ++st.fix_bdry_skipped;
  }
}

// For q = 2: a critical 1-cell gamma with exactly one coface in the unstable
// manifold of `king` and its other coface in that of another critical 2-cell
// sigma. For q = 0: a critical 1-cell among `edges` joining the stable
// manifold of `king` to that of another critical 0-cell sigma. Returns
// (gamma, sigma).
inline std::optional<std::pair<CellId, CellId>> shared_saddle(const CancellationState& st, CellId king,
                                                                std::span<const CellId> edges = {}) {
  const auto& c = st.complex();
  const auto& m = st.matching();
  if (c.dim(king) == 2) {
    const auto roots = triangle_roots(m, c);
    const CellId t0 = c.first_id(2);
    auto root = [&](CellId t) { return roots[static_cast<std::size_t>(t - t0)]; };
    const int comp = st.component(king);
    for (CellId g : st.critical_of(1, comp)) {
      const auto cf = c.cofaces(g);
      if (cf.size() != 2) continue;
      const CellId r0 = root(cf[0]), r1 = root(cf[1]);
      if ((r0 == king) == (r1 == king)) continue;
      const CellId other = r0 == king ? r1 : r0;
      if (c.dim(other) == 2) return std::make_pair(g, other);
    }
    return std::nullopt;
  }
  if (c.dim(king) == 0) {
    const auto roots = vertex_roots(m, c);
    for (CellId g : edges) {
      if (!m.is_critical(g)) continue;
      const auto f = c.faces(g);
      const CellId r0 = roots[static_cast<std::size_t>(f[0])], r1 = roots[static_cast<std::size_t>(f[1])];
      if ((r0 == king) == (r1 == king)) continue;
      return std::make_pair(g, r0 == king ? r1 : r0);
    }
    return std::nullopt;
  }
  throw Error("shared_saddle expects a king of dimension 0 or 2");
}

namespace detail {

// Critical 1-cell leaving the unstable manifold of `king` towards the
// boundary: one coface flows from king, the other is absent or flows from a
// boundary face.
inline CellId boundary_exit(const CancellationState& st, CellId king) {
  const auto& c = st.complex();
  const auto& m = st.matching();
  const auto roots = triangle_roots(m, c);
  const CellId t0 = c.first_id(2);
  for (CellId g : st.critical_of(1, st.component(king))) {
    const auto cf = c.cofaces(g);
    int from_king = 0;
    bool outward = cf.size() < 2;
    for (CellId t : cf) {
      const CellId r = roots[static_cast<std::size_t>(t - t0)];
      if (r == king)
        ++from_king;
      else if (c.dim(r) == 1)
        outward = true;
    }
    if (from_king == 1 && outward) return g;
  }
  return NIL;
}

inline void king_rev2(CancellationState& st, CellId king) {
  for (;;) {
    if (auto s = shared_saddle(st, king)) {
      st.cancel(s->first, s->second, "saddle");
      continue;
    }
    if (const CellId phi = boundary_exit(st, king); phi != NIL) st.cancel(phi, king, "boundary");
    return;
  }
}

}  // namespace detail

// Reduces an arbitrary acyclic field on a 2-manifold by cancellations only:
// per component, boundary fixing and king reversal among 2-cells, then an ear
// decomposition of the resulting frame and king reversal among 0-cells ear by
// ear.
inline CancellationState king_flow_state(const OrientedComplex2& c, const MorseMatching& m,
                                         const KingFlowOptions& opt = {}) {
  validate_manifold(c);
  check_matching(m, c);
  if (!is_acyclic(m, c)) throw Error("king_flow needs an acyclic matching");
  CancellationState st(c, m, opt);
  const int ncomp = c.num_cells() ? *std::max_element(st.labels().begin(), st.labels().end()) + 1 : 0;

  for (int comp = 0; comp < ncomp; ++comp) {
    fix_bdry(st, 2, comp);
    for (CellId king : st.critical_of(2, comp)) {
      if (!st.matching().is_critical(king)) continue;
      detail::king_rev2(st, king);
      if (st.matching().is_critical(king)) st.kings.push_back(king);
    }
  }

  ExpansionFrame frame(c);
  for (std::size_t i = 0; i < c.num_cells(0) + c.num_cells(1); ++i) {
    const auto x = static_cast<CellId>(i);
    if (c.dim(x) == 0 || st.matching().pair(x) == NIL) frame.add(x, c);
  }

  for (int comp = 0; comp < ncomp; ++comp) {
    const auto c0 = st.critical_of(0, comp);
    if (c0.empty()) throw InternalError("component without a critical 0-cell");
    std::uniform_int_distribution<std::size_t> pick(0, c0.size() - 1);
    const CellId king = c0[pick(st.rng())];
    st.kings.push_back(king);
    const auto ed = ear_decompose(c, frame, king);
    for (const auto& ear : ed.ears) {
      while (auto s = shared_saddle(st, king, ear.edges)) st.cancel(s->second, s->first, "ear");
    }
  }
  return st;
}

inline MorseMatching king_flow(const OrientedComplex2& c, const MorseMatching& m, const KingFlowOptions& opt = {}) {
  return king_flow_state(c, m, opt).release();
}

}  // namespace morse2d

#endif  // MORSE2D_CANCELLATION_HPP
