#ifndef MORSE2D_FRAMEFLOW_HPP
#define MORSE2D_FRAMEFLOW_HPP

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "complex.hpp"
#include "dgvf.hpp"

namespace morse2d {

// Residual 1-complex swept out by the 2-flow: membership flags over 0- and
// 1-cells. Once the 2-flow is over it holds every vertex and every edge left
// unmatched by a triangle.
class ExpansionFrame {
 public:
  ExpansionFrame() = default;
  explicit ExpansionFrame(const OrientedComplex2& c) : in_(c.num_cells(), 0) {}

  bool contains(CellId x) const noexcept { return in_[static_cast<std::size_t>(x)] != 0; }

  void add(CellId x, const OrientedComplex2& c) {
    auto& f = in_[static_cast<std::size_t>(x)];
    if (f) return;
    f = 1;
    ++count_[static_cast<std::size_t>(c.dim(x))];
  }

  // Edge plus its two vertices.
  void add_closure(CellId edge, const OrientedComplex2& c) {
    add(edge, c);
    for (CellId v : c.faces(edge)) add(v, c);
  }

  void remove(CellId x, const OrientedComplex2& c) {
    auto& f = in_[static_cast<std::size_t>(x)];
    if (!f) return;
    f = 0;
    --count_[static_cast<std::size_t>(c.dim(x))];
  }

  std::size_t num_vertices() const noexcept { return count_[0]; }
  std::size_t num_edges() const noexcept { return count_[1]; }

  std::vector<CellId> cells(const OrientedComplex2& c, int dim) const {
    std::vector<CellId> out;
    const CellId first = c.first_id(dim);
    for (std::size_t i = 0; i < c.num_cells(dim); ++i)
      if (contains(first + static_cast<CellId>(i))) out.push_back(first + static_cast<CellId>(i));
    return out;
  }

  // Number of connected pieces of the frame's graph.
  int num_components(const OrientedComplex2& c) const {
    detail::UnionFind uf(c.num_cells(0));
    int parts = static_cast<int>(num_vertices());
    for (CellId e : cells(c, 1)) {
      const auto f = c.faces(e);
      if (uf.unite(static_cast<std::size_t>(f[0]), static_cast<std::size_t>(f[1]))) --parts;
    }
    return parts;
  }

  bool connected(const OrientedComplex2& c) const { return num_components(c) <= 1; }

 private:
  std::vector<char> in_;
  std::array<std::size_t, 2> count_{0, 0};
};

// The cells a flow may touch: a set of live d-cells and the live (d-1)-cells
// between them. Faces and cofaces outside the live set are invisible.
struct FlowDomain {
  int level = 2;
  std::vector<CellId> cells;  // live d-cells, ascending
  std::vector<char> live;     // indexed by cell id

  static FlowDomain whole(const OrientedComplex2& c, int level) {
    FlowDomain d;
    d.level = level;
    d.live.assign(c.num_cells(), 0);
    for (int dim = level - 1; dim <= level; ++dim) {
      const CellId first = c.first_id(dim);
      for (std::size_t i = 0; i < c.num_cells(dim); ++i) d.live[static_cast<std::size_t>(first) + i] = 1;
    }
    const CellId first = c.first_id(level);
    for (std::size_t i = 0; i < c.num_cells(level); ++i) d.cells.push_back(first + static_cast<CellId>(i));
    return d;
  }

  bool is_live(CellId x) const noexcept { return live[static_cast<std::size_t>(x)] != 0; }

  std::size_t live_coface_count(const OrientedComplex2& c, CellId f) const {
    std::size_t n = 0;
    for (CellId r : c.cofaces(f))
      if (is_live(r)) ++n;
    return n;
  }

  // Live face with exactly one live coface.
  bool is_boundary_face(const OrientedComplex2& c, CellId f) const {
    return is_live(f) && live_coface_count(c, f) == 1;
  }

  CellId other_live_coface(const OrientedComplex2& c, CellId f, CellId known) const {
    for (CellId r : c.cofaces(f))
      if (r != known && is_live(r)) return r;
    return NIL;
  }
};

struct FlowEvent {
  enum class Kind { Critical, BoundaryPair, Expansion };
  Kind kind;
  int level;
  CellId face;    // NIL for Critical
  CellId coface;  // the d-cell
};

struct FlowState {
  explicit FlowState(const OrientedComplex2& c, MorseMatching& field)
      : field(&field), visited(c.num_cells(), 0) {}

  MorseMatching* field;
  std::vector<char> visited;
  std::deque<CellId> cobdry;  // B^d
  std::deque<CellId> queue;   // Q
  ExpansionFrame* frame = nullptr;
  std::vector<CellId> critical;
  OpCounter* ops = nullptr;
  std::function<void(const FlowEvent&)> observer;
};

// Live d-cells with at least one boundary face, ascending.
inline std::deque<CellId> find_cobdry(const OrientedComplex2& c, const FlowDomain& dom, OpCounter* ops = nullptr) {
  std::deque<CellId> out;
  for (CellId x : dom.cells) {
    for (CellId f : c.faces(x)) {
      if (ops) ++ops->hasse_visits;
      if (dom.is_boundary_face(c, f)) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

// Adds <theta, tau> when tau exists and neither cell is matched yet. Returns
// whether the pair was added.
inline bool add_pair_to_field(const OrientedComplex2& c, CellId tau, CellId theta, FlowState& st) {
  if (tau == NIL || st.visited[static_cast<std::size_t>(tau)] || st.field->is_matched(tau)) return false;
  c.incidence(tau, theta);
  if (st.field->is_matched(theta)) return false;
  st.field->match(theta, tau);
  st.visited[static_cast<std::size_t>(tau)] = 1;  // also retires tau from B^d
  st.queue.push_back(tau);
  if (st.frame) {
    st.frame->remove(theta, c);
    for (CellId e : c.faces(tau))
      if (e != theta) st.frame->add_closure(e, c);
  }
  if (st.observer) st.observer({FlowEvent::Kind::Expansion, c.dim(tau), theta, tau});
  return true;
}

// Breadth-first flow over the semigraph of live d-cells joined by live
// (d-1)-cells. Coboundary cells start first and give up one boundary face;
// once they are exhausted the lowest unvisited live cell starts and stays
// critical.
inline void frame_flow(const OrientedComplex2& c, const FlowDomain& dom, FlowState& st) {
  st.cobdry = find_cobdry(c, dom, st.ops);
  std::size_t next_live = 0;
  for (;;) {
    CellId start = NIL;
    while (!st.cobdry.empty() && start == NIL) {
      const CellId x = st.cobdry.front();
      st.cobdry.pop_front();
      if (!st.visited[static_cast<std::size_t>(x)]) start = x;
    }
    if (start != NIL) {
      st.visited[static_cast<std::size_t>(start)] = 1;
      CellId bf = NIL;
      for (CellId f : c.faces(start))
        if (dom.is_boundary_face(c, f) && !st.field->is_matched(f)) {
          bf = f;
          break;
        }
      if (bf == NIL) throw InternalError("coboundary cell " + std::to_string(start) + " lost its boundary face");
      st.field->match(bf, start);
      if (st.frame)
        for (CellId e : c.faces(start))
          if (e != bf) st.frame->add_closure(e, c);
      if (st.observer) st.observer({FlowEvent::Kind::BoundaryPair, dom.level, bf, start});
    } else {
      while (next_live < dom.cells.size() && st.visited[static_cast<std::size_t>(dom.cells[next_live])]) ++next_live;
      if (next_live == dom.cells.size()) break;
      start = dom.cells[next_live];
      st.visited[static_cast<std::size_t>(start)] = 1;
      st.critical.push_back(start);
      if (st.frame)
        for (CellId e : c.faces(start)) st.frame->add_closure(e, c);
      if (st.observer) st.observer({FlowEvent::Kind::Critical, dom.level, NIL, start});
    }

    st.queue.push_back(start);
    while (!st.queue.empty()) {
      const CellId x = st.queue.front();
      st.queue.pop_front();
      for (CellId theta : c.faces(x)) {
        if (st.ops) ++st.ops->hasse_visits;
        if (!dom.is_live(theta)) continue;
        add_pair_to_field(c, dom.other_live_coface(c, theta, x), theta, st);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Ears

struct Ear {
  std::vector<CellId> vertices;      // path order, endpoints included
  std::vector<CellId> edges;         // edges[i] joins vertices[i], vertices[i+1]
  std::vector<CellId> new_vertices;  // vertices first reached by this ear
  CellId start = NIL;                // b0[1]
  CellId end = NIL;                  // b0[2]
  bool closed = false;
  bool end_attached = false;         // end was already on the ear system

  bool open() const noexcept { return !closed; }
};

struct EarDecomposition {
  CellId anchor = NIL;
  std::vector<Ear> ears;
};

namespace detail {

class EarBuilder {
 public:
  EarBuilder(const OrientedComplex2& c, const ExpansionFrame& f)
      : c_(c), f_(f), assigned_(c.num_cells(), 0), cursor_(c.num_cells(0), 0), pos_(c.num_cells(0), -1) {}

  EarDecomposition run(CellId anchor) {
    EarDecomposition out;
    out.anchor = anchor;
    assigned_[static_cast<std::size_t>(anchor)] = 1;
    order_.push_back(anchor);

    auto first = walk(anchor);
    if (!first.attached) {
      auto back = walk(anchor);
      if (!back.attached && !back.edges.empty()) {
        std::reverse(back.vertices.begin(), back.vertices.end());
        std::reverse(back.edges.begin(), back.edges.end());
        back.vertices.pop_back();
        back.vertices.insert(back.vertices.end(), first.vertices.begin(), first.vertices.end());
        back.edges.insert(back.edges.end(), first.edges.begin(), first.edges.end());
        emit(back, out, true);
      } else {
        emit(first, out, true);
        emit(back, out, false);
      }
    } else {
      emit(first, out, true);
    }

    for (std::size_t i = 0; i < order_.size(); ++i) {
      const CellId v = order_[i];
      for (;;) {
        auto w = walk(v);
        if (w.edges.empty()) break;
        emit(w, out, false);
      }
    }
    return out;
  }

  bool assigned(CellId x) const noexcept { return assigned_[static_cast<std::size_t>(x)] != 0; }

 private:
  struct Walk {
    std::vector<CellId> vertices;
    std::vector<CellId> edges;
    bool attached = false;
  };

  CellId next_edge(CellId v) {
    const auto cf = c_.cofaces(v);
    auto& k = cursor_[static_cast<std::size_t>(v)];
    while (k < cf.size()) {
      const CellId e = cf[k];
      if (c_.dim(e) == 1 && f_.contains(e) && !assigned_[static_cast<std::size_t>(e)]) return e;
      ++k;
    }
    return NIL;
  }

  // Follows unassigned frame edges from v until a dead end or an assigned
  // vertex. Vertices met on the way are assigned immediately.
  Walk walk(CellId v) {
    Walk w;
    w.vertices.push_back(v);
    CellId cur = v;
    for (;;) {
      const CellId e = next_edge(cur);
      if (e == NIL) break;
      assigned_[static_cast<std::size_t>(e)] = 1;
      const auto f = c_.faces(e);
      const CellId nxt = f[0] == cur ? f[1] : f[0];
      w.edges.push_back(e);
      w.vertices.push_back(nxt);
      if (assigned_[static_cast<std::size_t>(nxt)]) {
        w.attached = true;
        break;
      }
      assigned_[static_cast<std::size_t>(nxt)] = 1;
      order_.push_back(nxt);
      cur = nxt;
    }
    return w;
  }

  void push_ear(std::vector<CellId> verts, std::vector<CellId> edges, bool attached, bool first,
                EarDecomposition& out) {
    Ear ear;
    ear.vertices = std::move(verts);
    ear.edges = std::move(edges);
    ear.start = ear.vertices.front();
    ear.end = ear.vertices.back();
    ear.closed = ear.start == ear.end;
    ear.end_attached = attached;
    const std::size_t n = ear.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const CellId x = ear.vertices[i];
      const bool endpoint_attached = (i == 0 && !first) || (i + 1 == n && attached);
      if (x == out.anchor || endpoint_attached) continue;
      ear.new_vertices.push_back(x);
    }
    out.ears.push_back(std::move(ear));
  }

  // Splits a walk that closed onto itself (a lollipop) into a path and a cycle.
  void emit(Walk& w, EarDecomposition& out, bool first) {
    if (w.edges.empty()) return;
    const std::size_t n = w.vertices.size();
    for (std::size_t i = 0; i + 1 < n; ++i) pos_[static_cast<std::size_t>(w.vertices[i])] = static_cast<int>(i);
    const CellId last = w.vertices.back();
    const int hit = w.attached ? pos_[static_cast<std::size_t>(last)] : -1;
    for (std::size_t i = 0; i + 1 < n; ++i) pos_[static_cast<std::size_t>(w.vertices[i])] = -1;

    if (hit > 0) {
      const auto j = static_cast<std::size_t>(hit);
      push_ear({w.vertices.begin(), w.vertices.begin() + static_cast<std::ptrdiff_t>(j) + 1},
               {w.edges.begin(), w.edges.begin() + static_cast<std::ptrdiff_t>(j)}, false, first, out);
      push_ear({w.vertices.begin() + static_cast<std::ptrdiff_t>(j), w.vertices.end()},
               {w.edges.begin() + static_cast<std::ptrdiff_t>(j), w.edges.end()}, true, false, out);
    } else {
      push_ear(std::move(w.vertices), std::move(w.edges), w.attached, first, out);
    }
  }

  const OrientedComplex2& c_;
  const ExpansionFrame& f_;
  std::vector<char> assigned_;
  std::vector<std::size_t> cursor_;
  std::vector<int> pos_;
  std::vector<CellId> order_;
};

}  // namespace detail

// Ear decomposition of the frame component containing `anchor`. The first ear
// runs through the anchor; every later ear starts on a vertex of an earlier
// one. Throws if the frame does not reach every vertex of the anchor's
// connected component.
inline EarDecomposition ear_decompose(const OrientedComplex2& c, const ExpansionFrame& frame, CellId anchor) {
  if (c.dim(anchor) != 0 || !frame.contains(anchor)) throw Error("ear anchor must be a frame vertex");
  detail::EarBuilder b(c, frame);
  auto out = b.run(anchor);

  const auto labels = c.component_labels();
  const int comp = labels[static_cast<std::size_t>(anchor)];
  for (int d = 0; d <= 1; ++d) {
    const CellId first = c.first_id(d);
    for (std::size_t i = 0; i < c.num_cells(d); ++i) {
      const CellId x = first + static_cast<CellId>(i);
      if (labels[static_cast<std::size_t>(x)] != comp) continue;
      if (d == 0 && !b.assigned(x))
        throw InternalError("expansion frame is disconnected: vertex " + std::to_string(x) + " unreachable");
      if (d == 1 && frame.contains(x) && !b.assigned(x))
        throw InternalError("frame edge " + std::to_string(x) + " missing from the ear decomposition");
    }
  }
  return out;
}

// Flow domain of one ear: its edges and the vertices it introduced.
inline FlowDomain ear_domain(const OrientedComplex2& c, const Ear& ear, std::vector<char> live) {
  FlowDomain d;
  d.level = 1;
  d.live = std::move(live);
  d.cells = ear.edges;
  std::sort(d.cells.begin(), d.cells.end());
  for (CellId e : ear.edges) d.live[static_cast<std::size_t>(e)] = 1;
  for (CellId v : ear.new_vertices) d.live[static_cast<std::size_t>(v)] = 1;
  (void)c;
  return d;
}

// ---------------------------------------------------------------------------

struct MainFrameOptions {
  bool allow_pinched = false;  // accept edge-manifolds with pinched vertices
};

struct MainFrameTrace {
  std::vector<FlowEvent> events;
  std::vector<std::size_t> frame_edges;     // frame size after each 2-level event
  std::vector<std::size_t> frame_vertices;
  std::vector<EarDecomposition> ears;       // one per connected component
  std::vector<CellId> anchors;
};

struct MainFrameHooks {
  OpCounter* ops = nullptr;
  MainFrameTrace* trace = nullptr;
  // Called after every 2-level event with the current frame.
  std::function<void(const FlowEvent&, const ExpansionFrame&)> on_expansion;
};

// Optimal gradient field by expansion frames: a 2-flow over every component of
// the semigraph, then a 1-flow along an ear decomposition of the residual
// frame of each connected component.
inline MorseMatching main_frame(const OrientedComplex2& c, const MainFrameOptions& opt = {},
                                const MainFrameHooks& hooks = {}) {
  if (opt.allow_pinched)
    require_edge_manifold(c);
  else
    validate_manifold(c);

  MorseMatching m(c);
  ExpansionFrame frame(c);
  const auto labels = c.component_labels();
  const int ncomp = c.num_cells() ? *std::max_element(labels.begin(), labels.end()) + 1 : 0;
  std::vector<CellId> last_matched_edge(static_cast<std::size_t>(ncomp), NIL);

  {
    FlowState st(c, m);
    st.frame = &frame;
    st.ops = hooks.ops;
    st.observer = [&](const FlowEvent& ev) {
      if (ev.face != NIL) last_matched_edge[static_cast<std::size_t>(labels[static_cast<std::size_t>(ev.face)])] = ev.face;
      if (hooks.trace) {
        hooks.trace->events.push_back(ev);
        hooks.trace->frame_edges.push_back(frame.num_edges());
        hooks.trace->frame_vertices.push_back(frame.num_vertices());
      }
      if (hooks.on_expansion) hooks.on_expansion(ev, frame);
    };
    frame_flow(c, FlowDomain::whole(c, 2), st);
  }

  for (std::size_t v = 0; v < c.num_cells(0); ++v) frame.add(static_cast<CellId>(v), c);
  for (std::size_t i = 0; i < c.num_cells(1); ++i) {
    const CellId e = c.first_id(1) + static_cast<CellId>(i);
    if (frame.contains(e) == (m.pair(e) != NIL)) throw InternalError("frame out of sync with matched 1-cells");
  }

  std::vector<char> live(c.num_cells(), 0);
  FlowState st1(c, m);
  st1.ops = hooks.ops;
  if (hooks.trace) st1.observer = [&](const FlowEvent& ev) { hooks.trace->events.push_back(ev); };
  std::vector<char> comp_done(static_cast<std::size_t>(ncomp), 0);
  for (std::size_t v = 0; v < c.num_cells(0); ++v) {
    const int comp = labels[v];
    if (comp_done[static_cast<std::size_t>(comp)]) continue;
    comp_done[static_cast<std::size_t>(comp)] = 1;
    CellId anchor = static_cast<CellId>(v);
    if (const CellId e = last_matched_edge[static_cast<std::size_t>(comp)]; e != NIL) anchor = c.faces(e)[1];

    auto ed = ear_decompose(c, frame, anchor);
    for (const auto& ear : ed.ears) {
      auto dom = ear_domain(c, ear, std::move(live));
      frame_flow(c, dom, st1);
      live = std::move(dom.live);
      for (CellId e : ear.edges) live[static_cast<std::size_t>(e)] = 0;
      for (CellId x : ear.new_vertices) live[static_cast<std::size_t>(x)] = 0;
    }
    if (hooks.trace) {
      hooks.trace->anchors.push_back(anchor);
      hooks.trace->ears.push_back(std::move(ed));
    }
  }
  return m;
}

}  // namespace morse2d

#endif  // MORSE2D_FRAMEFLOW_HPP
