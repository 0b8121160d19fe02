#ifndef MORSE2D_COMPLEX_HPP
#define MORSE2D_COMPLEX_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace morse2d {

using Triangle = std::array<std::int64_t, 3>;

enum class MeshFormat { OFF, TRI };

struct Cell {
  CellId id = NIL;
  int dim = 0;
  std::vector<std::int64_t> vertices;  // strictly increasing, size dim+1
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

// Finite oriented simplicial 2-complex built from a triangle list.
//
// Cells live in one dense id space: vertices [0, V), edges [V, V+E) sorted by
// vertex pair, triangles [V+E, V+E+T) sorted by vertex triple. Every simplex
// carries the orientation of its increasing vertex tuple, so the incidence of
// the face that omits vertex i is (-1)^i.
class OrientedComplex2 {
 public:
  OrientedComplex2() = default;

  static OrientedComplex2 from_triangles(std::size_t num_vertices, std::span<const Triangle> tris) {
    OrientedComplex2 c;
    c.nv_ = num_vertices;

    std::vector<std::array<std::int64_t, 3>> sorted_tris;
    sorted_tris.reserve(tris.size());
    for (const auto& t : tris) {
      auto s = t;
      std::sort(s.begin(), s.end());
      if (s[0] < 0 || s[2] >= static_cast<std::int64_t>(num_vertices))
        throw Error("triangle references vertex outside [0, " + std::to_string(num_vertices) + ")");
      if (s[0] == s[1] || s[1] == s[2]) throw Error("degenerate triangle with repeated vertex");
      sorted_tris.push_back(s);
    }
    std::sort(sorted_tris.begin(), sorted_tris.end());
    for (std::size_t i = 1; i < sorted_tris.size(); ++i) {
      if (sorted_tris[i] == sorted_tris[i - 1]) {
        const auto& d = sorted_tris[i];
        throw Error("duplicate triangle (" + std::to_string(d[0]) + " " + std::to_string(d[1]) + " " +
                    std::to_string(d[2]) + ")");
      }
    }

    std::vector<std::array<std::int64_t, 2>> edges;
    edges.reserve(3 * sorted_tris.size());
    for (const auto& t : sorted_tris) {
      edges.push_back({t[0], t[1]});
      edges.push_back({t[0], t[2]});
      edges.push_back({t[1], t[2]});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    c.ne_ = edges.size();
    c.nt_ = sorted_tris.size();
    c.edge_verts_ = std::move(edges);
    c.tri_verts_ = std::move(sorted_tris);

    auto edge_id = [&](std::int64_t a, std::int64_t b) -> CellId {
      const std::array<std::int64_t, 2> key{a, b};
      auto it = std::lower_bound(c.edge_verts_.begin(), c.edge_verts_.end(), key);
      return static_cast<CellId>(c.nv_ + static_cast<std::size_t>(it - c.edge_verts_.begin()));
    };

    c.tri_faces_.resize(c.nt_);
    for (std::size_t i = 0; i < c.nt_; ++i) {
      const auto& t = c.tri_verts_[i];
      // face i omits vertex i
      c.tri_faces_[i] = {edge_id(t[1], t[2]), edge_id(t[0], t[2]), edge_id(t[0], t[1])};
    }
    c.build_cofaces();
    return c;
  }

  std::size_t num_cells() const noexcept { return nv_ + ne_ + nt_; }
  std::size_t num_cells(int dim) const noexcept { return dim == 0 ? nv_ : dim == 1 ? ne_ : dim == 2 ? nt_ : 0; }
  std::array<std::size_t, 3> counts() const noexcept { return {nv_, ne_, nt_}; }

  // First id of the given dimension; [first_id(d), first_id(d) + num_cells(d)).
  CellId first_id(int dim) const noexcept {
    return static_cast<CellId>(dim == 0 ? 0 : dim == 1 ? nv_ : nv_ + ne_);
  }

  int dim(CellId c) const noexcept {
    const auto u = static_cast<std::size_t>(c);
    return u < nv_ ? 0 : u < nv_ + ne_ ? 1 : 2;
  }

  bool valid(CellId c) const noexcept { return c >= 0 && static_cast<std::size_t>(c) < num_cells(); }

  std::span<const CellId> faces(CellId c) const noexcept {
    switch (dim(c)) {
      case 1: return {edge_faces_[static_cast<std::size_t>(c) - nv_].data(), 2};
      case 2: return {tri_faces_[static_cast<std::size_t>(c) - nv_ - ne_].data(), 3};
      default: return {};
    }
  }

  // Incidence <d sigma, faces(sigma)[i]> = (-1)^i.
  static constexpr int face_sign(std::size_t i) noexcept { return (i % 2 == 0) ? 1 : -1; }

  std::span<const CellId> cofaces(CellId c) const noexcept {
    const auto u = static_cast<std::size_t>(c);
    return {coface_list_.data() + coface_off_[u], coface_off_[u + 1] - coface_off_[u]};
  }

  // Signed incidence of tau in the boundary of sigma; throws if tau is not a
  // facet of sigma.
  int incidence(CellId sigma, CellId tau) const {
    const auto f = faces(sigma);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] == tau) return face_sign(i);
    throw Error("cell " + std::to_string(tau) + " is not a face of " + std::to_string(sigma));
  }

  // Other coface of a cell with at most two cofaces, or NIL.
  CellId other_coface(CellId c, CellId known) const noexcept {
    for (CellId r : cofaces(c))
      if (r != known) return r;
    return NIL;
  }

  std::vector<std::int64_t> vertices(CellId c) const {
    const auto u = static_cast<std::size_t>(c);
    switch (dim(c)) {
      case 0: return {static_cast<std::int64_t>(u)};
      case 1: return {edge_verts_[u - nv_][0], edge_verts_[u - nv_][1]};
      default: {
        const auto& t = tri_verts_[u - nv_ - ne_];
        return {t[0], t[1], t[2]};
      }
    }
  }

  Cell cell(CellId c) const { return Cell{c, dim(c), vertices(c)}; }

  // Euler characteristic V - E + T.
  std::int64_t euler_characteristic() const noexcept {
    return static_cast<std::int64_t>(nv_) - static_cast<std::int64_t>(ne_) + static_cast<std::int64_t>(nt_);
  }

  // Connected-component label per cell (labels 0..k-1, ordered by lowest vertex).
  std::vector<int> component_labels() const {
    detail::UnionFind uf(nv_);
    for (const auto& e : edge_verts_) uf.unite(static_cast<std::size_t>(e[0]), static_cast<std::size_t>(e[1]));
    std::vector<int> root_label(nv_, -1);
    std::vector<int> labels(num_cells());
    int next = 0;
    for (std::size_t v = 0; v < nv_; ++v) {
      auto r = uf.find(v);
      if (root_label[r] < 0) root_label[r] = next++;
      labels[v] = root_label[r];
    }
    for (std::size_t c = nv_; c < num_cells(); ++c)
      labels[c] = labels[static_cast<std::size_t>(vertices(static_cast<CellId>(c))[0])];
    return labels;
  }

  int num_components() const {
    const auto l = component_labels();
    return l.empty() ? 0 : *std::max_element(l.begin(), l.end()) + 1;
  }

  const std::vector<Triangle>& triangles() const noexcept { return tri_verts_; }

 private:
  void build_cofaces() {
    edge_faces_.resize(ne_);
    for (std::size_t i = 0; i < ne_; ++i)
      edge_faces_[i] = {static_cast<CellId>(edge_verts_[i][1]), static_cast<CellId>(edge_verts_[i][0])};

    const std::size_t n = num_cells();
    coface_off_.assign(n + 1, 0);
    for (std::size_t i = 0; i < ne_; ++i)
      for (CellId f : edge_faces_[i]) ++coface_off_[static_cast<std::size_t>(f) + 1];
    for (std::size_t i = 0; i < nt_; ++i)
      for (CellId f : tri_faces_[i]) ++coface_off_[static_cast<std::size_t>(f) + 1];
    for (std::size_t i = 0; i < n; ++i) coface_off_[i + 1] += coface_off_[i];
    coface_list_.resize(coface_off_[n]);
    std::vector<std::size_t> fill(coface_off_.begin(), coface_off_.end() - 1);
    for (std::size_t i = 0; i < ne_; ++i)
      for (CellId f : edge_faces_[i]) coface_list_[fill[static_cast<std::size_t>(f)]++] = static_cast<CellId>(nv_ + i);
    for (std::size_t i = 0; i < nt_; ++i)
      for (CellId f : tri_faces_[i])
        coface_list_[fill[static_cast<std::size_t>(f)]++] = static_cast<CellId>(nv_ + ne_ + i);
  }

  std::size_t nv_ = 0, ne_ = 0, nt_ = 0;
  std::vector<std::array<std::int64_t, 2>> edge_verts_;
  std::vector<Triangle> tri_verts_;
  std::vector<std::array<CellId, 2>> edge_faces_;  // [v1], [v0]
  std::vector<std::array<CellId, 3>> tri_faces_;   // [v1v2], [v0v2], [v0v1]
  std::vector<std::size_t> coface_off_;
  std::vector<CellId> coface_list_;
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline bool blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

inline std::int64_t parse_index(std::istringstream& in, std::size_t line_no) {
  std::string tok;
  if (!(in >> tok)) throw ParseError("expected a vertex index", line_no);
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("malformed integer '" + tok + "'", line_no);
  }
  if (pos != tok.size()) throw ParseError("malformed integer '" + tok + "'", line_no);
  return v;
}

inline OrientedComplex2 build_checked(std::size_t nv, const std::vector<Triangle>& tris,
                                      const std::vector<std::size_t>& lines) {
  // Report duplicates with a line number before handing off to the builder.
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < tris.size(); ++i) {
    auto s = tris[i];
    std::sort(s.begin(), s.end());
    if (s[0] == s[1] || s[1] == s[2]) throw ParseError("degenerate triangle with repeated vertex", lines[i]);
    const auto key = std::to_string(s[0]) + "," + std::to_string(s[1]) + "," + std::to_string(s[2]);
    auto [it, fresh] = seen.emplace(key, lines[i]);
    if (!fresh)
      throw ParseError("duplicate triangle (first seen on line " + std::to_string(it->second) + ")", lines[i]);
  }
  return OrientedComplex2::from_triangles(nv, tris);
}

}  // namespace detail

// Reads a triangle mesh. OFF: header "OFF", counts line "V F E", V coordinate
// lines (ignored), F lines "3 i j k". TRI: one "i j k" per line, '#' comments.
inline OrientedComplex2 parse_complex(std::istream& in, MeshFormat format) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<Triangle> tris;
  std::vector<std::size_t> tri_lines;

  auto next_content_line = [&](std::string& out) -> bool {
    while (std::getline(in, out)) {
      ++line_no;
      if (!detail::blank_or_comment(out)) return true;
    }
    return false;
  };

  if (format == MeshFormat::TRI) {
    std::int64_t max_index = -1;
    while (next_content_line(line)) {
      std::istringstream ls(line);
      Triangle t{};
      for (auto& v : t) {
        v = detail::parse_index(ls, line_no);
        if (v < 0) throw ParseError("negative vertex index", line_no);
      }
      std::string extra;
      if (ls >> extra && extra[0] != '#') throw ParseError("expected exactly three indices", line_no);
      max_index = std::max({max_index, t[0], t[1], t[2]});
      tris.push_back(t);
      tri_lines.push_back(line_no);
    }
    return detail::build_checked(static_cast<std::size_t>(max_index + 1), tris, tri_lines);
  }

  if (!next_content_line(line)) throw ParseError("empty OFF file", line_no);
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw ParseError("missing OFF header", line_no);
  std::int64_t nv = -1, nf = -1, ne = 0;
  if (!(header >> nv)) {
    if (!next_content_line(line)) throw ParseError("missing OFF counts line", line_no);
    header = std::istringstream(line);
    header >> nv;
  }
  if (!(header >> nf)) throw ParseError("malformed OFF counts line", line_no);
  header >> ne;
  if (nv < 0 || nf < 0) throw ParseError("negative OFF counts", line_no);

  for (std::int64_t i = 0; i < nv; ++i)
    if (!next_content_line(line)) throw ParseError("file ends inside vertex block", line_no);

  for (std::int64_t i = 0; i < nf; ++i) {
    if (!next_content_line(line)) throw ParseError("file ends inside face block", line_no);
    std::istringstream ls(line);
    const auto arity = detail::parse_index(ls, line_no);
    if (arity != 3) throw ParseError("only triangular faces are supported", line_no);
    Triangle t{};
    for (auto& v : t) {
      v = detail::parse_index(ls, line_no);
      if (v < 0 || v >= nv) throw ParseError("dangling vertex index " + std::to_string(v), line_no);
    }
    tris.push_back(t);
    tri_lines.push_back(line_no);
  }
  return detail::build_checked(static_cast<std::size_t>(nv), tris, tri_lines);
}

inline OrientedComplex2 parse_complex(const std::string& text, MeshFormat format) {
  std::istringstream in(text);
  return parse_complex(in, format);
}

// ---------------------------------------------------------------------------
// Manifold checks and boundary queries

enum class ManifoldKind { Closed, WithBoundary };

// Edge-manifold check only: no 1-cell has three or more cofaces.
inline void require_edge_manifold(const OrientedComplex2& c) {
  const CellId e0 = c.first_id(1);
  for (std::size_t i = 0; i < c.num_cells(1); ++i) {
    const CellId e = e0 + static_cast<CellId>(i);
    if (c.cofaces(e).size() > 2) {
      const auto v = c.vertices(e);
      throw ManifoldError(ManifoldError::Kind::NonManifoldEdge, e,
                          "non-manifold edge (" + std::to_string(v[0]) + " " + std::to_string(v[1]) + ") has " +
                              std::to_string(c.cofaces(e).size()) + " incident triangles");
    }
  }
}

inline ManifoldKind validate_manifold(const OrientedComplex2& c) {
  require_edge_manifold(c);
  bool boundary = false;
  const CellId e0 = c.first_id(1);
  for (std::size_t i = 0; i < c.num_cells(1); ++i)
    if (c.cofaces(e0 + static_cast<CellId>(i)).size() == 1) boundary = true;

  // The link of each vertex must be connected; with the edge check above that
  // makes it a single path or cycle.
  std::unordered_map<std::int64_t, std::size_t> local;
  std::vector<std::int64_t> link_verts;
  for (std::size_t v = 0; v < c.num_cells(0); ++v) {
    local.clear();
    link_verts.clear();
    std::vector<std::array<std::size_t, 2>> link_edges;
    auto slot = [&](std::int64_t w) {
      auto [it, fresh] = local.emplace(w, link_verts.size());
      if (fresh) link_verts.push_back(w);
      return it->second;
    };
    for (CellId e : c.cofaces(static_cast<CellId>(v))) {
      for (CellId t : c.cofaces(e)) {
        auto tv = c.vertices(t);
        std::array<std::int64_t, 2> opp{};
        std::size_t k = 0;
        for (auto w : tv)
          if (w != static_cast<std::int64_t>(v)) opp[k++] = w;
        link_edges.push_back({slot(opp[0]), slot(opp[1])});
      }
      slot(c.vertices(e)[0] == static_cast<std::int64_t>(v) ? c.vertices(e)[1] : c.vertices(e)[0]);
    }
    if (link_verts.empty()) continue;
    detail::UnionFind uf(link_verts.size());
    std::size_t parts = link_verts.size();
    for (const auto& le : link_edges)
      if (uf.unite(le[0], le[1])) --parts;
    if (parts != 1)
      throw ManifoldError(ManifoldError::Kind::NonManifoldVertex, static_cast<CellId>(v),
                          "non-manifold vertex " + std::to_string(v) + ": link has " + std::to_string(parts) +
                              " components");
  }
  return boundary ? ManifoldKind::WithBoundary : ManifoldKind::Closed;
}

// d-cells with exactly one (d+1)-coface, in id order. d in {0, 1}.
inline std::vector<CellId> boundary_faces(const OrientedComplex2& c, int d) {
  std::vector<CellId> out;
  const CellId first = c.first_id(d);
  for (std::size_t i = 0; i < c.num_cells(d); ++i) {
    const CellId x = first + static_cast<CellId>(i);
    if (c.cofaces(x).size() == 1) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hasse graph

struct HasseEdge {
  CellId face;
  CellId coface;
  int level;  // dimension of the coface: 2 for the 2-1 level, 1 for the 1-0 level
};

// Explicit edge list of the Hasse graph. The algorithms walk the complex's
// incidence arrays directly; this view exists for export and counting.
class HasseGraph {
 public:
  explicit HasseGraph(const OrientedComplex2& c) : node_count_(c.num_cells()) {
    edges_.reserve(2 * c.num_cells(1) + 3 * c.num_cells(2));
    for (int d = 1; d <= 2; ++d) {
      const CellId first = c.first_id(d);
      for (std::size_t i = 0; i < c.num_cells(d); ++i) {
        const CellId s = first + static_cast<CellId>(i);
        for (CellId f : c.faces(s)) edges_.push_back({f, s, d});
      }
    }
  }

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<HasseEdge>& edges() const& noexcept { return edges_; }
  std::vector<HasseEdge> edges() && { return std::move(edges_); }

 private:
  std::size_t node_count_;
  std::vector<HasseEdge> edges_;
};

// ---------------------------------------------------------------------------
// Semigraph (2-cells as vertices, 1-cells as edges with one or two ends) and
// the hypergraph of its components glued along shared 0-cells.

struct Semigraph {
  std::vector<CellId> nodes;                 // triangle ids
  std::vector<CellId> edges;                 // edge ids
  std::vector<std::array<CellId, 2>> ends;   // incident triangles; second may be NIL
  std::vector<int> component;                // per node (index into nodes)
  int num_components = 0;

  // Component label of a triangle id.
  int component_of(CellId tri, const OrientedComplex2& c) const {
    return component[static_cast<std::size_t>(tri - c.first_id(2))];
  }
};

inline Semigraph build_semigraph(const OrientedComplex2& c) {
  require_edge_manifold(c);
  Semigraph s;
  const CellId t0 = c.first_id(2);
  const std::size_t nt = c.num_cells(2);
  s.nodes.resize(nt);
  std::iota(s.nodes.begin(), s.nodes.end(), t0);
  detail::UnionFind uf(nt);
  const CellId e0 = c.first_id(1);
  for (std::size_t i = 0; i < c.num_cells(1); ++i) {
    const CellId e = e0 + static_cast<CellId>(i);
    const auto cf = c.cofaces(e);
    if (cf.empty()) continue;
    s.edges.push_back(e);
    s.ends.push_back({cf[0], cf.size() > 1 ? cf[1] : NIL});
    if (cf.size() == 2) uf.unite(static_cast<std::size_t>(cf[0] - t0), static_cast<std::size_t>(cf[1] - t0));
  }
  s.component.assign(nt, -1);
  std::vector<int> root_label(nt, -1);
  for (std::size_t i = 0; i < nt; ++i) {
    const auto r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = s.num_components++;
    s.component[i] = root_label[r];
  }
  return s;
}

struct ComponentHypergraph {
  int num_vertices = 0;  // semigraph components
  struct Hyperedge {
    CellId vertex;                 // shared 0-cell
    std::vector<int> components;   // sorted, size >= 2
  };
  std::vector<Hyperedge> hyperedges;

  bool connected() const {
    if (num_vertices <= 1) return true;
    detail::UnionFind uf(static_cast<std::size_t>(num_vertices));
    int parts = num_vertices;
    for (const auto& h : hyperedges)
      for (std::size_t i = 1; i < h.components.size(); ++i)
        if (uf.unite(static_cast<std::size_t>(h.components[0]), static_cast<std::size_t>(h.components[i]))) --parts;
    return parts == 1;
  }
};

inline ComponentHypergraph build_component_hypergraph(const OrientedComplex2& c, const Semigraph& s) {
  ComponentHypergraph h;
  h.num_vertices = s.num_components;
  for (std::size_t v = 0; v < c.num_cells(0); ++v) {
    std::vector<int> comps;
    for (CellId e : c.cofaces(static_cast<CellId>(v)))
      for (CellId t : c.cofaces(e)) comps.push_back(s.component_of(t, c));
    std::sort(comps.begin(), comps.end());
    comps.erase(std::unique(comps.begin(), comps.end()), comps.end());
    if (comps.size() >= 2) h.hyperedges.push_back({static_cast<CellId>(v), std::move(comps)});
  }
  return h;
}

// ---------------------------------------------------------------------------

// Splits every triangle into four through its edge midpoints. Topology is
// unchanged; the new midpoint vertices are numbered after the old ones in
// edge-id order.
inline OrientedComplex2 subdivide(const OrientedComplex2& c) {
  const auto nv = static_cast<std::int64_t>(c.num_cells(0));
  const CellId e0 = c.first_id(1);
  auto mid = [&](CellId e) { return nv + static_cast<std::int64_t>(e - e0); };
  std::vector<Triangle> out;
  out.reserve(4 * c.num_cells(2));
  const CellId t0 = c.first_id(2);
  for (std::size_t i = 0; i < c.num_cells(2); ++i) {
    const CellId t = t0 + static_cast<CellId>(i);
    const auto v = c.vertices(t);
    const auto f = c.faces(t);  // f[0] opposite v0, f[1] opposite v1, f[2] opposite v2
    const auto m01 = mid(f[2]), m02 = mid(f[1]), m12 = mid(f[0]);
    out.push_back({v[0], m01, m02});
    out.push_back({v[1], m01, m12});
    out.push_back({v[2], m02, m12});
    out.push_back({m01, m02, m12});
  }
  return OrientedComplex2::from_triangles(static_cast<std::size_t>(nv) + c.num_cells(1), out);
}

}  // namespace morse2d

#endif  // MORSE2D_COMPLEX_HPP
