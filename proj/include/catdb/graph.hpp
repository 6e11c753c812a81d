#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "catdb/error.hpp"
#include "catdb/finset.hpp"

namespace catdb {

/// A path: start vertex plus arrow indices. Empty arrows is the identity at start.
struct Path {
  std::size_t start = 0;
  std::vector<std::size_t> arrows;

  std::size_t length() const noexcept { return arrows.size(); }
  bool trivial() const noexcept { return arrows.empty(); }
  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

struct ArrowDecl {
  std::string name;
  std::string src;
  std::string tgt;
};

/// Directed multigraph.
class Graph {
 public:
  Graph() = default;

  Graph(FinSet vertices, FinSet arrows, std::vector<std::size_t> src, std::vector<std::size_t> tgt)
      : vertices_(std::move(vertices)), arrows_(std::move(arrows)), src_(std::move(src)), tgt_(std::move(tgt)) {
    if (src_.size() != arrows_.size() || tgt_.size() != arrows_.size())
      throw precondition("MalformedGraph", "src/tgt must be total on arrows");
    for (std::size_t a = 0; a < arrows_.size(); ++a)
      if (src_[a] >= vertices_.size() || tgt_[a] >= vertices_.size())
        throw precondition("MalformedGraph", "arrow '" + arrows_[a] + "' has an endpoint outside the vertex set");
    out_.assign(vertices_.size(), {});
    for (std::size_t a = 0; a < arrows_.size(); ++a) out_[src_[a]].push_back(a);
    for (auto& o : out_)
      std::sort(o.begin(), o.end(), [&](std::size_t x, std::size_t y) { return arrows_[x] < arrows_[y]; });
  }

  Graph(const std::vector<std::string>& vertices, const std::vector<ArrowDecl>& arrows) {
    FinSet vs(vertices);
    std::vector<std::string> names;
    std::vector<std::size_t> s, t;
    for (const auto& a : arrows) {
      names.push_back(a.name);
      s.push_back(vs.index_of(a.src));
      t.push_back(vs.index_of(a.tgt));
    }
    *this = Graph(std::move(vs), FinSet(std::move(names)), std::move(s), std::move(t));
  }

  const FinSet& vertices() const noexcept { return vertices_; }
  const FinSet& arrows() const noexcept { return arrows_; }
  std::size_t src(std::size_t a) const { return src_.at(a); }
  std::size_t tgt(std::size_t a) const { return tgt_.at(a); }
  const std::vector<std::size_t>& src_table() const noexcept { return src_; }
  const std::vector<std::size_t>& tgt_table() const noexcept { return tgt_; }
  FinFunction src_fn() const { return FinFunction(arrows_, vertices_, src_); }
  FinFunction tgt_fn() const { return FinFunction(arrows_, vertices_, tgt_); }

  /// Outgoing arrows of v, sorted by name.
  const std::vector<std::size_t>& out(std::size_t v) const { return out_.at(v); }

  std::size_t vertex(std::string_view name) const {
    if (auto i = vertices_.find(name)) return *i;
    throw precondition("UnknownVertex", "unknown vertex '" + std::string(name) + "'");
  }

  std::size_t arrow(std::string_view name) const {
    if (auto i = arrows_.find(name)) return *i;
    throw precondition("UnknownArrow", "unknown arrow '" + std::string(name) + "'");
  }

  std::size_t end_of(const Path& p) const { return p.arrows.empty() ? p.start : tgt_.at(p.arrows.back()); }

  bool is_path(const Path& p) const {
    if (p.start >= vertices_.size()) return false;
    std::size_t at = p.start;
    for (auto a : p.arrows) {
      if (a >= arrows_.size() || src_[a] != at) return false;
      at = tgt_[a];
    }
    return true;
  }

  Path identity(std::size_t v) const { return Path{v, {}}; }

  /// Build a path from names, checking head-to-tail.
  Path path(std::string_view start, const std::vector<std::string>& arrow_names) const {
    Path p{vertex(start), {}};
    for (const auto& n : arrow_names) {
      auto a = arrow(n);
      if (src_[a] != end_of(p))
        throw precondition("NotComposable", "arrow '" + n + "' does not start where the path ends");
      p.arrows.push_back(a);
    }
    return p;
  }

  /// `V.a.b`, or `V.` for the identity.
  std::string render(const Path& p) const {
    std::string s = vertices_[p.start];
    if (p.arrows.empty()) return s + ".";
    for (auto a : p.arrows) s += "." + arrows_[a];
    return s;
  }

  std::vector<std::string> arrow_names(const Path& p) const {
    std::vector<std::string> out;
    for (auto a : p.arrows) out.push_back(arrows_[a]);
    return out;
  }

  Path concat(const Path& p, const Path& q) const {
    if (end_of(p) != q.start) throw precondition("NotComposable", render(p) + " does not end where " + render(q) + " starts");
    Path r = p;
    r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
    return r;
  }

  /// Shortlex order comparing arrow names.
  bool shortlex_less(const Path& p, const Path& q) const {
    if (p.arrows.size() != q.arrows.size()) return p.arrows.size() < q.arrows.size();
    for (std::size_t i = 0; i < p.arrows.size(); ++i) {
      const auto& x = arrows_[p.arrows[i]];
      const auto& y = arrows_[q.arrows[i]];
      if (x != y) return x < y;
    }
    return vertices_[p.start] < vertices_[q.start];
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertices_ == b.vertices_ && a.arrows_ == b.arrows_ && a.src_ == b.src_ && a.tgt_ == b.tgt_;
  }

 private:
  FinSet vertices_;
  FinSet arrows_;
  std::vector<std::size_t> src_;
  std::vector<std::size_t> tgt_;
  std::vector<std::vector<std::size_t>> out_;
};

/// The graph with one vertex and one loop.
inline Graph loop_graph(const std::string& vertex = "s", const std::string& arrow = "f") {
  return Graph({vertex}, {{arrow, vertex, vertex}});
}

/// v0 -> v1 -> ... -> vn
inline Graph chain_graph(std::size_t n) {
  std::vector<std::string> vs;
  std::vector<ArrowDecl> as;
  for (std::size_t i = 0; i <= n; ++i) vs.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) as.push_back({"a" + std::to_string(i + 1), vs[i], vs[i + 1]});
  return Graph(vs, as);
}

inline Graph discrete_graph(const std::vector<std::string>& vertices) { return Graph(vertices, {}); }

// ---------------------------------------------------------------------------
// Homomorphisms

struct GraphHom {
  FinFunction on_vertices;
  FinFunction on_arrows;
  friend bool operator==(const GraphHom&, const GraphHom&) = default;
};

/// Both squares (src and tgt) commute and the components have the right types.
inline bool is_graph_hom(const Graph& g, const Graph& h, const GraphHom& m) {
  if (!(m.on_vertices.dom() == g.vertices()) || !(m.on_vertices.cod() == h.vertices())) return false;
  if (!(m.on_arrows.dom() == g.arrows()) || !(m.on_arrows.cod() == h.arrows())) return false;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    auto b = m.on_arrows(a);
    if (h.src(b) != m.on_vertices(g.src(a)) || h.tgt(b) != m.on_vertices(g.tgt(a))) return false;
  }
  return true;
}

/// n ∘ m
inline GraphHom compose(const GraphHom& n, const GraphHom& m) {
  return GraphHom{compose(n.on_vertices, m.on_vertices), compose(n.on_arrows, m.on_arrows)};
}

inline GraphHom identity_hom(const Graph& g) {
  return GraphHom{FinFunction::identity(g.vertices()), FinFunction::identity(g.arrows())};
}

/// Calls `visit` for every homomorphism g -> h, vertex images first (in vertex
/// order), then arrow images. Stops early when `visit` returns false.
inline void for_each_graph_hom(const Graph& g, const Graph& h, const std::function<bool(const GraphHom&)>& visit) {
  const std::size_t nv = g.vertices().size();
  const std::size_t na = g.arrows().size();
  // Arrows are constrained once both endpoints are mapped.
  std::vector<std::vector<std::size_t>> ready(nv);
  for (std::size_t a = 0; a < na; ++a) ready[std::max(g.src(a), g.tgt(a))].push_back(a);
  std::vector<std::size_t> vmap(nv), amap(na);
  std::vector<std::vector<std::size_t>> cands(na);
  bool stop = false;

  std::function<void(std::size_t)> arrows_from = [&](std::size_t k) {
    if (stop) return;
    if (k == na) {
      if (!visit(GraphHom{FinFunction(g.vertices(), h.vertices(), vmap), FinFunction(g.arrows(), h.arrows(), amap)}))
        stop = true;
      return;
    }
    for (auto b : cands[k]) {
      amap[k] = b;
      arrows_from(k + 1);
      if (stop) return;
    }
  };

  std::function<void(std::size_t)> vertices_from = [&](std::size_t v) {
    if (stop) return;
    if (v == nv) {
      arrows_from(0);
      return;
    }
    for (std::size_t w = 0; w < h.vertices().size(); ++w) {
      vmap[v] = w;
      bool ok = true;
      for (auto a : ready[v]) {
        cands[a].clear();
        for (std::size_t b = 0; b < h.arrows().size(); ++b)
          if (h.src(b) == vmap[g.src(a)] && h.tgt(b) == vmap[g.tgt(a)]) cands[a].push_back(b);
        if (cands[a].empty()) {
          ok = false;
          break;
        }
      }
      if (ok) vertices_from(v + 1);
      if (stop) return;
    }
  };
  vertices_from(0);
}

inline std::vector<GraphHom> enumerate_graph_homs(const Graph& g, const Graph& h) {
  std::vector<GraphHom> out;
  for_each_graph_hom(g, h, [&](const GraphHom& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Paths

struct PathList {
  std::vector<Path> paths;
  bool truncated = false;
};

inline constexpr std::size_t kDefaultPathBudget = 2'000'000;

/// Every path out of v of length <= max_len, by length then arrow names.
/// truncated is set when some path of length max_len has an outgoing arrow.
inline PathList paths_from(const Graph& g, std::size_t v, std::size_t max_len,
                           std::size_t budget = kDefaultPathBudget) {
  PathList out;
  std::vector<Path> level{g.identity(v)};
  std::size_t produced = 1;
  for (std::size_t len = 0;; ++len) {
    out.paths.insert(out.paths.end(), level.begin(), level.end());
    if (len == max_len) {
      for (const auto& p : level)
        if (!g.out(g.end_of(p)).empty()) out.truncated = true;
      break;
    }
    std::vector<Path> next;
    for (const auto& p : level) {
      for (auto a : g.out(g.end_of(p))) {
        if (++produced > budget) throw BudgetError("path enumeration exceeded " + std::to_string(budget) + " paths");
        Path q = p;
        q.arrows.push_back(a);
        next.push_back(std::move(q));
      }
    }
    if (next.empty()) break;
    level = std::move(next);
  }
  return out;
}

inline PathList paths_between(const Graph& g, std::size_t v, std::size_t w, std::size_t max_len,
                              std::size_t budget = kDefaultPathBudget) {
  if (v >= g.vertices().size() || w >= g.vertices().size())
    throw precondition("UnknownVertex", "vertex index out of range");
  auto all = paths_from(g, v, max_len, budget);
  PathList out;
  out.truncated = all.truncated;
  for (auto& p : all.paths)
    if (g.end_of(p) == w) out.paths.push_back(std::move(p));
  return out;
}

inline PathList paths_between(const Graph& g, std::string_view v, std::string_view w, std::size_t max_len) {
  return paths_between(g, g.vertex(v), g.vertex(w), max_len);
}

/// Paths(G) up to a length bound. Arrow i of `graph` is `paths[i]`, named by its
/// rendering; eta sends each arrow to its singleton path.
struct PathsGraph {
  Graph graph;
  std::vector<Path> paths;
  GraphHom eta;
  bool truncated = false;
};

inline PathsGraph paths_graph(const Graph& g, std::size_t max_len) {
  if (max_len < 1) throw precondition("BadBound", "paths_graph needs max_len >= 1");
  PathsGraph r;
  std::vector<std::string> names;
  std::vector<std::size_t> s, t;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    auto ps = paths_from(g, v, max_len);
    r.truncated = r.truncated || ps.truncated;
    for (auto& p : ps.paths) {
      names.push_back(g.render(p));
      s.push_back(p.start);
      t.push_back(g.end_of(p));
      r.paths.push_back(std::move(p));
    }
  }
  r.graph = Graph(g.vertices(), FinSet(names), std::move(s), std::move(t));
  std::vector<std::size_t> eta_a(g.arrows().size());
  for (std::size_t a = 0; a < g.arrows().size(); ++a) eta_a[a] = r.graph.arrow(g.render(Path{g.src(a), {a}}));
  r.eta = GraphHom{FinFunction::identity(g.vertices()), FinFunction(g.arrows(), r.graph.arrows(), std::move(eta_a))};
  return r;
}

/// μ: flatten a head-to-tail sequence of paths starting at `start`.
inline Path concat_mu(const Graph& g, std::size_t start, const std::vector<Path>& pieces) {
  Path out{start, {}};
  for (const auto& p : pieces) {
    if (!g.is_path(p)) throw precondition("NotComposable", "component is not a path");
    out = g.concat(out, p);
  }
  return out;
}

/// μ on a path of Paths(G) given as a path in `pg.graph`.
inline Path concat_mu(const Graph& g, const PathsGraph& pg, const Path& p) {
  std::vector<Path> pieces;
  for (auto a : p.arrows) pieces.push_back(pg.paths.at(a));
  return concat_mu(g, p.start, pieces);
}

/// Image of a path under a graph homomorphism.
inline Path map_path(const GraphHom& m, const Path& p) {
  Path q{m.on_vertices(p.start), {}};
  for (auto a : p.arrows) q.arrows.push_back(m.on_arrows(a));
  return q;
}

// ---------------------------------------------------------------------------
// Products, coproducts, loops, components

struct GraphProduct {
  Graph graph;
  GraphHom p1, p2;
};

struct GraphCoproduct {
  Graph graph;
  GraphHom i1, i2;
};

/// Vertices "(v,w)" and arrows "(a,b)", first factor major.
inline GraphProduct graph_product(const Graph& g, const Graph& h) {
  auto vp = product(g.vertices(), h.vertices());
  auto ap = product(g.arrows(), h.arrows());
  const std::size_t hv = h.vertices().size();
  std::vector<std::size_t> s, t;
  for (const auto& tup : ap.tuples) {
    s.push_back(g.src(tup[0]) * hv + h.src(tup[1]));
    t.push_back(g.tgt(tup[0]) * hv + h.tgt(tup[1]));
  }
  GraphProduct r{Graph(vp.apex, ap.apex, std::move(s), std::move(t)), {}, {}};
  r.p1 = GraphHom{vp.legs[0], ap.legs[0]};
  r.p2 = GraphHom{vp.legs[1], ap.legs[1]};
  return r;
}

/// Disjoint union with "inl:"/"inr:" tags.
inline GraphCoproduct graph_coproduct(const Graph& g, const Graph& h) {
  auto vc = coproduct(g.vertices(), h.vertices());
  auto ac = coproduct(g.arrows(), h.arrows());
  std::vector<std::size_t> s, t;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    s.push_back(vc.legs[0](g.src(a)));
    t.push_back(vc.legs[0](g.tgt(a)));
  }
  for (std::size_t a = 0; a < h.arrows().size(); ++a) {
    s.push_back(vc.legs[1](h.src(a)));
    t.push_back(vc.legs[1](h.tgt(a)));
  }
  GraphCoproduct r{Graph(vc.apex, ac.apex, std::move(s), std::move(t)), {}, {}};
  r.i1 = GraphHom{vc.legs[0], ac.legs[0]};
  r.i2 = GraphHom{vc.legs[1], ac.legs[1]};
  return r;
}

struct LoopsAndComponents {
  FinSet loops;       // arrows with src = tgt
  FinSet components;  // named by least vertex in declaration order
  FinFunction component_of;
};

inline LoopsAndComponents loops_and_components(const Graph& g) {
  auto s = g.src_fn();
  auto t = g.tgt_fn();
  auto eq = equalizer(s, t);
  std::vector<std::string> loops;
  for (std::size_t i = 0; i < eq.apex.size(); ++i) loops.push_back(g.arrows()[eq.legs[0](i)]);
  auto co = coequalizer(s, t);
  return LoopsAndComponents{FinSet(std::move(loops)), co.apex, co.legs[0]};
}

}  // namespace catdb
