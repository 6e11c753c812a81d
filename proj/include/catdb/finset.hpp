#pragma once

// Finite sets with named elements, total functions between them, and the
// finite limits/colimits everything else in the library is built from.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "catdb/error.hpp"

namespace catdb {

/// An ordered list of distinct, non-empty element names. Copies share storage.
class FinSet {
 public:
  FinSet() : data_(empty_data()) {}

  explicit FinSet(std::vector<std::string> elements) {
    auto d = std::make_shared<Data>();
    d->elems = std::move(elements);
    d->index.reserve(d->elems.size());
    for (std::size_t i = 0; i < d->elems.size(); ++i) {
      if (d->elems[i].empty()) throw precondition("EmptyElement", "element identifiers must be non-empty");
      if (!d->index.emplace(d->elems[i], i).second)
        throw precondition("DuplicateElement", "duplicate element '" + d->elems[i] + "'");
    }
    data_ = std::move(d);
  }

  FinSet(std::initializer_list<std::string> elements) : FinSet(std::vector<std::string>(elements)) {}

  /// {1, 2, ..., n}
  static FinSet range(std::size_t n) {
    std::vector<std::string> v;
    v.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) v.push_back(std::to_string(i));
    return FinSet(std::move(v));
  }

  std::size_t size() const noexcept { return data_->elems.size(); }
  bool empty() const noexcept { return data_->elems.empty(); }
  const std::string& operator[](std::size_t i) const { return data_->elems.at(i); }
  const std::vector<std::string>& elements() const noexcept { return data_->elems; }
  auto begin() const noexcept { return data_->elems.begin(); }
  auto end() const noexcept { return data_->elems.end(); }

  bool contains(std::string_view name) const { return find(name).has_value(); }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw precondition("UnknownElement", "'" + std::string(name) + "' is not an element");
  }

  friend bool operator==(const FinSet& a, const FinSet& b) {
    return a.data_ == b.data_ || a.data_->elems == b.data_->elems;
  }

 private:
  struct Data {
    std::vector<std::string> elems;
    std::unordered_map<std::string, std::size_t> index;
  };

  static const std::shared_ptr<const Data>& empty_data() {
    static const std::shared_ptr<const Data> d = std::make_shared<const Data>();
    return d;
  }

  std::shared_ptr<const Data> data_;
};

/// A total function between finite sets, stored as an index table.
class FinFunction {
 public:
  FinFunction() = default;

  FinFunction(FinSet dom, FinSet cod, std::vector<std::size_t> table)
      : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
    if (table_.size() != dom_.size())
      throw precondition("NotTotal", "function table has " + std::to_string(table_.size()) +
                                         " entries for a domain of size " + std::to_string(dom_.size()));
    for (auto j : table_)
      if (j >= cod_.size()) throw precondition("OutOfCodomain", "function value outside codomain");
  }

  /// Build from (x, f(x)) name pairs; every domain element must appear exactly once.
  static FinFunction from_pairs(FinSet dom, FinSet cod,
                                const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<std::optional<std::size_t>> t(dom.size());
    for (const auto& [x, y] : pairs) {
      auto i = dom.index_of(x);
      if (t[i]) throw precondition("NotAFunction", "'" + x + "' assigned twice");
      t[i] = cod.index_of(y);
    }
    std::vector<std::size_t> table;
    table.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!t[i]) throw precondition("NotTotal", "no image for '" + dom[i] + "'");
      table.push_back(*t[i]);
    }
    return FinFunction(std::move(dom), std::move(cod), std::move(table));
  }

  /// Build from images listed in domain order.
  static FinFunction from_images(FinSet dom, FinSet cod, const std::vector<std::string>& images) {
    if (images.size() != dom.size()) throw precondition("NotTotal", "wrong number of images");
    std::vector<std::size_t> table;
    table.reserve(images.size());
    for (const auto& y : images) table.push_back(cod.index_of(y));
    return FinFunction(std::move(dom), std::move(cod), std::move(table));
  }

  static FinFunction identity(const FinSet& x) {
    std::vector<std::size_t> t(x.size());
    std::iota(t.begin(), t.end(), std::size_t{0});
    return FinFunction(x, x, std::move(t));
  }

  const FinSet& dom() const noexcept { return dom_; }
  const FinSet& cod() const noexcept { return cod_; }
  const std::vector<std::size_t>& table() const noexcept { return table_; }

  std::size_t operator()(std::size_t i) const { return table_.at(i); }
  const std::string& apply(std::string_view x) const { return cod_[table_[dom_.index_of(x)]]; }

  bool injective() const {
    std::vector<bool> seen(cod_.size(), false);
    for (auto j : table_) {
      if (seen[j]) return false;
      seen[j] = true;
    }
    return true;
  }

  bool surjective() const {
    std::vector<bool> seen(cod_.size(), false);
    for (auto j : table_) seen[j] = true;
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }

  friend bool operator==(const FinFunction& a, const FinFunction& b) {
    return a.table_ == b.table_ && a.dom_ == b.dom_ && a.cod_ == b.cod_;
  }

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<std::size_t> table_;
};

/// g ∘ f
inline FinFunction compose(const FinFunction& g, const FinFunction& f) {
  if (!(f.cod() == g.dom())) throw precondition("NotComposable", "codomain of f differs from domain of g");
  std::vector<std::size_t> t;
  t.reserve(f.dom().size());
  for (auto j : f.table()) t.push_back(g(j));
  return FinFunction(f.dom(), g.cod(), std::move(t));
}

/// Subsets are carried as element names, always reported in carrier order.
using Subset = std::vector<std::string>;

inline std::vector<bool> subset_mask(const FinSet& carrier, const Subset& sub) {
  std::vector<bool> mask(carrier.size(), false);
  for (const auto& s : sub) {
    auto i = carrier.find(s);
    if (!i) throw precondition("NotASubset", "'" + s + "' is not an element of the carrier");
    mask[*i] = true;
  }
  return mask;
}

inline Subset mask_subset(const FinSet& carrier, const std::vector<bool>& mask) {
  Subset out;
  for (std::size_t i = 0; i < carrier.size(); ++i)
    if (mask[i]) out.push_back(carrier[i]);
  return out;
}

inline Subset image(const FinFunction& f) {
  std::vector<bool> m(f.cod().size(), false);
  for (auto j : f.table()) m[j] = true;
  return mask_subset(f.cod(), m);
}

inline Subset preimage(const FinFunction& f, const Subset& v) {
  auto mv = subset_mask(f.cod(), v);
  std::vector<bool> m(f.dom().size(), false);
  for (std::size_t i = 0; i < f.dom().size(); ++i) m[i] = mv[f(i)];
  return mask_subset(f.dom(), m);
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index always becomes the root, so roots are least members.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  std::size_t size() const noexcept { return parent_.size(); }

  /// Classes ordered by least member; members ascending.
  std::vector<std::vector<std::size_t>> classes() {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(parent_.size(), SIZE_MAX);
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      auto r = find(i);
      if (slot[r] == SIZE_MAX) {
        slot[r] = out.size();
        out.emplace_back();
      }
      out[slot[r]].push_back(i);
    }
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Diagrams, limits, colimits

struct ShapeArrow {
  std::string name;
  std::size_t src;
  std::size_t tgt;
};

/// A path in a diagram shape: start vertex plus arrow indices.
struct ShapePath {
  std::size_t start;
  std::vector<std::size_t> arrows;
};

/// A functor from a finitely presented shape into finite sets.
struct FinDiagram {
  std::vector<std::string> vertices;
  std::vector<ShapeArrow> arrows;
  std::vector<FinSet> sets;
  std::vector<FinFunction> maps;
  std::vector<std::pair<ShapePath, ShapePath>> commutations;

  std::size_t add_vertex(std::string name, FinSet set) {
    vertices.push_back(std::move(name));
    sets.push_back(std::move(set));
    return vertices.size() - 1;
  }

  void add_arrow(std::string name, std::size_t src, std::size_t tgt, FinFunction map) {
    arrows.push_back({std::move(name), src, tgt});
    maps.push_back(std::move(map));
  }

  /// Composite along a shape path, as a function sets[start] -> sets[end].
  FinFunction evaluate(const ShapePath& p) const {
    FinFunction f = FinFunction::identity(sets.at(p.start));
    std::size_t at = p.start;
    for (auto a : p.arrows) {
      if (arrows.at(a).src != at) throw precondition("NotComposable", "diagram path is not head-to-tail");
      f = compose(maps[a], f);
      at = arrows[a].tgt;
    }
    return f;
  }

  void validate() const {
    if (sets.size() != vertices.size() || maps.size() != arrows.size())
      throw precondition("MalformedDiagram", "sets/maps do not match the shape");
    for (std::size_t a = 0; a < arrows.size(); ++a) {
      if (arrows[a].src >= vertices.size() || arrows[a].tgt >= vertices.size())
        throw precondition("MalformedDiagram", "arrow endpoint out of range");
      if (!(maps[a].dom() == sets[arrows[a].src]) || !(maps[a].cod() == sets[arrows[a].tgt]))
        throw precondition("MalformedDiagram", "map for '" + arrows[a].name + "' has the wrong domain or codomain");
    }
    for (const auto& [p, q] : commutations) {
      auto fp = evaluate(p);
      auto fq = evaluate(q);
      if (!(fp.dom() == fq.dom()) || !(fp.cod() == fq.cod()))
        throw precondition("MalformedDiagram", "commutation paths have different endpoints");
      if (fp.table() != fq.table()) throw precondition("MalformedDiagram", "diagram does not commute");
    }
  }
};

struct LimitOptions {
  std::string delimiter = ",";
  /// Vertices whose components appear in tuple names; empty means all.
  std::vector<std::size_t> named_vertices;
};

struct LimitResult {
  FinSet apex;
  std::vector<FinFunction> legs;                 // one per diagram vertex
  std::vector<std::vector<std::size_t>> tuples;  // component indices per apex element
};

struct ColimitResult {
  FinSet apex;
  std::vector<FinFunction> legs;  // one per diagram vertex
};

/// All tuples (one element per vertex) compatible with every arrow, found by
/// backtracking in vertex order. Tuples are listed lexicographically.
inline LimitResult limit_of_diagram(const FinDiagram& d, const LimitOptions& opts = {}) {
  d.validate();
  const std::size_t n = d.vertices.size();
  // Arrows are checked once both endpoints are assigned, at the later vertex.
  std::vector<std::vector<std::size_t>> checks(n);
  for (std::size_t a = 0; a < d.arrows.size(); ++a)
    checks[std::max(d.arrows[a].src, d.arrows[a].tgt)].push_back(a);

  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> cur(n, 0);
  std::function<void(std::size_t)> go = [&](std::size_t v) {
    if (v == n) {
      tuples.push_back(cur);
      return;
    }
    for (std::size_t x = 0; x < d.sets[v].size(); ++x) {
      cur[v] = x;
      bool ok = true;
      for (auto a : checks[v]) {
        const auto& ar = d.arrows[a];
        if (d.maps[a](cur[ar.src]) != cur[ar.tgt]) {
          ok = false;
          break;
        }
      }
      if (ok) go(v + 1);
    }
  };
  go(0);

  std::vector<std::size_t> named = opts.named_vertices;
  if (named.empty()) {
    named.resize(n);
    std::iota(named.begin(), named.end(), std::size_t{0});
  }
  std::vector<std::string> names;
  names.reserve(tuples.size());
  for (const auto& t : tuples) {
    std::vector<std::string> parts;
    for (auto v : named) parts.push_back(d.sets[v][t[v]]);
    names.push_back("(" + detail::join(parts, opts.delimiter) + ")");
  }
  LimitResult r{FinSet(std::move(names)), {}, std::move(tuples)};
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> leg;
    leg.reserve(r.tuples.size());
    for (const auto& t : r.tuples) leg.push_back(t[v]);
    r.legs.emplace_back(r.apex, d.sets[v], std::move(leg));
  }
  return r;
}

/// Disjoint union of the vertex sets modulo x ~ map(a)(x). Members are tagged
/// "<vertex>:<element>"; a class is named by its lexicographically least
/// tagged member and classes are ordered by their first member.
inline ColimitResult colimit_of_diagram(const FinDiagram& d) {
  d.validate();
  const std::size_t n = d.vertices.size();
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offset[v + 1] = offset[v] + d.sets[v].size();
  detail::UnionFind uf(offset[n]);
  for (std::size_t a = 0; a < d.arrows.size(); ++a) {
    const auto& ar = d.arrows[a];
    for (std::size_t x = 0; x < d.sets[ar.src].size(); ++x)
      uf.unite(offset[ar.src] + x, offset[ar.tgt] + d.maps[a](x));
  }
  auto tagged = [&](std::size_t flat) {
    auto v = static_cast<std::size_t>(std::upper_bound(offset.begin(), offset.end(), flat) - offset.begin()) - 1;
    return d.vertices[v] + ":" + d.sets[v][flat - offset[v]];
  };
  auto classes = uf.classes();
  std::vector<std::size_t> class_of(offset[n]);
  std::vector<std::string> names;
  names.reserve(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::string best;
    for (auto m : classes[c]) {
      class_of[m] = c;
      auto t = tagged(m);
      if (best.empty() || t < best) best = std::move(t);
    }
    names.push_back(std::move(best));
  }
  ColimitResult r{FinSet(std::move(names)), {}};
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> leg(d.sets[v].size());
    for (std::size_t x = 0; x < leg.size(); ++x) leg[x] = class_of[offset[v] + x];
    r.legs.emplace_back(d.sets[v], r.apex, std::move(leg));
  }
  return r;
}

// Named special cases -------------------------------------------------------

inline LimitResult product(const FinSet& x, const FinSet& y) {
  FinDiagram d;
  d.add_vertex("X", x);
  d.add_vertex("Y", y);
  return limit_of_diagram(d);
}

/// Coproduct with members tagged "inl:" and "inr:".
inline ColimitResult coproduct(const FinSet& x, const FinSet& y) {
  FinDiagram d;
  d.add_vertex("inl", x);
  d.add_vertex("inr", y);
  return colimit_of_diagram(d);
}

inline LimitResult terminal() { return limit_of_diagram(FinDiagram{}); }

/// X ×_Z Y for f: X -> Z, g: Y -> Z; elements are named "(x,y)".
inline LimitResult pullback(const FinFunction& f, const FinFunction& g) {
  if (!(f.cod() == g.cod())) throw precondition("NotACospan", "pullback legs have different codomains");
  FinDiagram d;
  d.add_vertex("X", f.dom());
  d.add_vertex("Y", g.dom());
  d.add_vertex("Z", f.cod());
  d.add_arrow("f", 0, 2, f);
  d.add_arrow("g", 1, 2, g);
  return limit_of_diagram(d, LimitOptions{",", {0, 1}});
}

/// X ⊔_W Y for f: W -> X, g: W -> Y. Members are tagged "inl:" and "inr:";
/// the middle tag sorts last so it never names a class.
inline ColimitResult pushout(const FinFunction& f, const FinFunction& g) {
  if (!(f.dom() == g.dom())) throw precondition("NotASpan", "pushout legs have different domains");
  FinDiagram d;
  d.add_vertex("inl", f.cod());
  d.add_vertex("inr", g.cod());
  d.add_vertex("mid", f.dom());
  d.add_arrow("f", 2, 0, f);
  d.add_arrow("g", 2, 1, g);
  return colimit_of_diagram(d);
}

inline LimitResult equalizer(const FinFunction& f, const FinFunction& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()))
    throw precondition("NotParallel", "equalizer needs parallel functions");
  FinDiagram d;
  d.add_vertex("X", f.dom());
  d.add_vertex("Y", f.cod());
  d.add_arrow("f", 0, 1, f);
  d.add_arrow("g", 0, 1, g);
  return limit_of_diagram(d, LimitOptions{",", {0}});
}

/// Quotient of Y by f(x) ~ g(x). Classes are named by their least member in
/// Y's order (untagged) and ordered by that member; the leg is the quotient map.
inline ColimitResult coequalizer(const FinFunction& f, const FinFunction& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()))
    throw precondition("NotParallel", "coequalizer needs parallel functions");
  const auto& y = f.cod();
  detail::UnionFind uf(y.size());
  for (std::size_t x = 0; x < f.dom().size(); ++x) uf.unite(f(x), g(x));
  auto classes = uf.classes();
  std::vector<std::string> names;
  std::vector<std::size_t> q(y.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    names.push_back(y[classes[c].front()]);
    for (auto m : classes[c]) q[m] = c;
  }
  ColimitResult r{FinSet(std::move(names)), {}};
  r.legs.emplace_back(y, r.apex, std::move(q));
  return r;
}

// ---------------------------------------------------------------------------
// Relations

struct BinRelation {
  FinSet carrier;
  std::set<std::pair<std::size_t, std::size_t>> pairs;

  static BinRelation from_names(FinSet carrier, const std::vector<std::pair<std::string, std::string>>& ps) {
    BinRelation r{std::move(carrier), {}};
    for (const auto& [a, b] : ps) r.pairs.emplace(r.carrier.index_of(a), r.carrier.index_of(b));
    return r;
  }

  bool related(std::string_view a, std::string_view b) const {
    return pairs.count({carrier.index_of(a), carrier.index_of(b)}) != 0;
  }
};

/// Equivalence classes of the relation generated by r, ordered by least member.
inline std::vector<std::vector<std::string>> equivalence_classes(const BinRelation& r) {
  detail::UnionFind uf(r.carrier.size());
  for (const auto& [a, b] : r.pairs) uf.unite(a, b);
  std::vector<std::vector<std::string>> out;
  for (const auto& cls : uf.classes()) {
    out.emplace_back();
    for (auto i : cls) out.back().push_back(r.carrier[i]);
  }
  return out;
}

/// Smallest reflexive, symmetric, transitive relation containing r.
inline BinRelation generate_equivalence(const BinRelation& r) {
  detail::UnionFind uf(r.carrier.size());
  for (const auto& [a, b] : r.pairs) uf.unite(a, b);
  BinRelation out{r.carrier, {}};
  for (const auto& cls : uf.classes())
    for (auto a : cls)
      for (auto b : cls) out.pairs.emplace(a, b);
  return out;
}

// ---------------------------------------------------------------------------
// Exponentials and currying

inline constexpr std::size_t kMaxExponential = 1u << 22;

inline std::size_t exponential_size(std::size_t base, std::size_t exponent) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    n *= base;
    if (n > kMaxExponential) throw precondition("TooLarge", "exponential set is too large to materialize");
  }
  return n;
}

/// Canonical rendering of a function table: sorted "a↦b" entries joined by ';'.
/// The empty function renders as "∅".
inline std::string render_function(const FinSet& a, const FinSet& y, const std::vector<std::size_t>& table) {
  if (a.empty()) return "∅";
  std::vector<std::string> entries;
  entries.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) entries.push_back(a[i] + "↦" + y[table[i]]);
  std::sort(entries.begin(), entries.end());
  return detail::join(entries, ";");
}

namespace detail {

// Function tables A -> Y enumerated lexicographically by (f(a0), f(a1), ...).
inline std::vector<std::size_t> decode_function(std::size_t index, std::size_t a, std::size_t y) {
  std::vector<std::size_t> t(a);
  for (std::size_t i = a; i-- > 0;) {
    t[i] = index % y;
    index /= y;
  }
  return t;
}

inline std::size_t encode_function(const std::vector<std::size_t>& t, std::size_t y) {
  std::size_t idx = 0;
  for (auto v : t) idx = idx * y + v;
  return idx;
}

}  // namespace detail

/// Y^A = Hom(A, Y) as a finite set of canonical function renderings.
inline FinSet exponential(const FinSet& a, const FinSet& y) {
  auto n = exponential_size(y.size(), a.size());
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t k = 0; k < n; ++k) names.push_back(render_function(a, y, detail::decode_function(k, a.size(), y.size())));
  return FinSet(std::move(names));
}

/// Transpose f: X×A -> Y into X -> Y^A. The domain of f must be exactly product(x, a).
inline FinFunction curry(const FinFunction& f, const FinSet& x, const FinSet& a) {
  auto xa = product(x, a).apex;
  if (!(f.dom() == xa)) throw precondition("MalformedProduct", "domain of f is not the product X×A");
  const auto& y = f.cod();
  auto ya = exponential(a, y);
  std::vector<std::size_t> t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<std::size_t> row(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) row[j] = f(i * a.size() + j);
    t[i] = detail::encode_function(row, y.size());
  }
  return FinFunction(x, std::move(ya), std::move(t));
}

/// Inverse of curry: g: X -> Y^A becomes X×A -> Y.
inline FinFunction uncurry(const FinFunction& g, const FinSet& a, const FinSet& y) {
  if (!(g.cod() == exponential(a, y))) throw precondition("MalformedExponential", "codomain of g is not Y^A");
  auto xa = product(g.dom(), a).apex;
  std::vector<std::size_t> t(xa.size());
  for (std::size_t i = 0; i < g.dom().size(); ++i) {
    auto row = detail::decode_function(g(i), a.size(), y.size());
    for (std::size_t j = 0; j < a.size(); ++j) t[i * a.size() + j] = row[j];
  }
  return FinFunction(std::move(xa), y, std::move(t));
}

/// ev: Y^A × A -> Y, (g, a) ↦ g(a).
inline FinFunction evaluation(const FinSet& a, const FinSet& y) {
  return uncurry(FinFunction::identity(exponential(a, y)), a, y);
}

// ---------------------------------------------------------------------------
// Subobject classifier and quantifiers

inline const FinSet& omega() {
  static const FinSet o{"True", "False"};
  return o;
}

inline FinFunction characteristic(const FinSet& b, const Subset& sub) {
  auto mask = subset_mask(b, sub);
  std::vector<std::size_t> t(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) t[i] = mask[i] ? 0 : 1;
  return FinFunction(b, omega(), std::move(t));
}

inline Subset subset_of(const FinFunction& chi) {
  if (!(chi.cod() == omega())) throw precondition("NotCharacteristic", "codomain is not {True, False}");
  std::vector<bool> mask(chi.dom().size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = chi(i) == 0;
  return mask_subset(chi.dom(), mask);
}

enum class Quantifier { Exists, Forall };

/// ∃_f(u) or ∀_f(u). An empty fiber satisfies ∀ vacuously.
inline Subset quantifier_image(const FinFunction& f, const Subset& u, Quantifier mode) {
  auto mu = subset_mask(f.dom(), u);
  std::vector<bool> any(f.cod().size(), false);
  std::vector<bool> all(f.cod().size(), true);
  for (std::size_t i = 0; i < f.dom().size(); ++i) {
    if (mu[i]) any[f(i)] = true;
    else all[f(i)] = false;
  }
  return mask_subset(f.cod(), mode == Quantifier::Exists ? any : all);
}

// ---------------------------------------------------------------------------
// Spans

struct Span {
  FinSet apex;
  FinFunction left;   // apex -> A
  FinFunction right;  // apex -> B

  Span(FinSet apex_, FinFunction left_, FinFunction right_)
      : apex(std::move(apex_)), left(std::move(left_)), right(std::move(right_)) {
    if (!(left.dom() == apex) || !(right.dom() == apex))
      throw precondition("MalformedSpan", "span legs must start at the apex");
  }

  static Span identity(const FinSet& b) { return Span(b, FinFunction::identity(b), FinFunction::identity(b)); }
};

/// Composite span via the fiber product over the shared middle set.
inline Span span_compose(const Span& s1, const Span& s2) {
  if (!(s1.right.cod() == s2.left.cod())) throw precondition("MiddleMismatch", "spans do not share their middle set");
  auto pb = pullback(s1.right, s2.left);
  return Span(pb.apex, compose(s1.left, pb.legs[0]), compose(s2.right, pb.legs[1]));
}

/// Cell (a, b) counts the apex elements over (a, b).
inline std::vector<std::vector<long>> span_to_matrix(const Span& s) {
  std::vector<std::vector<long>> m(s.left.cod().size(), std::vector<long>(s.right.cod().size(), 0));
  for (std::size_t r = 0; r < s.apex.size(); ++r) ++m[s.left(r)][s.right(r)];
  return m;
}

}  // namespace catdb
