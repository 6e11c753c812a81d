#pragma once

// Instances (Set-valued functors on a schema) and their morphisms.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "catdb/error.hpp"
#include "catdb/finset.hpp"
#include "catdb/graph.hpp"
#include "catdb/schema.hpp"

namespace catdb {

/// Raw rows of one table: header is `id` then the vertex's outgoing arrows.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  friend bool operator==(const Table&, const Table&) = default;
};

/// Tables keyed by vertex name.
using TableSet = std::map<std::string, Table>;

/// Outgoing arrows of v in declaration order (the column order of its table).
inline std::vector<std::size_t> columns_of(const Graph& g, std::size_t v) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < g.arrows().size(); ++a)
    if (g.src(a) == v) out.push_back(a);
  return out;
}

inline std::vector<std::string> header_of(const Graph& g, std::size_t v) {
  std::vector<std::string> h{"id"};
  for (auto a : columns_of(g, v)) h.push_back(g.arrows()[a]);
  return h;
}

/// A functor schema -> FinSet: a row set per vertex and a function per arrow.
class Instance {
 public:
  Instance() = default;

  Instance(Schema schema, std::vector<FinSet> pk, std::vector<FinFunction> fk)
      : schema_(std::move(schema)), pk_(std::move(pk)), fk_(std::move(fk)) {
    const auto& g = schema_.graph();
    if (pk_.size() != g.vertices().size() || fk_.size() != g.arrows().size())
      throw precondition("MalformedInstance", "pk/fk do not match the schema");
    for (std::size_t a = 0; a < fk_.size(); ++a)
      if (!(fk_[a].dom() == pk_[g.src(a)]) || !(fk_[a].cod() == pk_[g.tgt(a)]))
        throw precondition("MalformedInstance", "fk '" + g.arrows()[a] + "' has the wrong domain or codomain");
  }

  /// The instance with every table empty.
  static Instance empty(const Schema& s) {
    std::vector<FinSet> pk(s.vertices().size());
    std::vector<FinFunction> fk;
    for (std::size_t a = 0; a < s.arrows().size(); ++a) fk.emplace_back(FinSet{}, FinSet{}, std::vector<std::size_t>{});
    return Instance(s, std::move(pk), std::move(fk));
  }

  const Schema& schema() const noexcept { return schema_; }
  const FinSet& pk(std::size_t v) const { return pk_.at(v); }
  const FinSet& pk(std::string_view v) const { return pk_.at(schema_.vertex(v)); }
  const FinFunction& fk(std::size_t a) const { return fk_.at(a); }
  const FinFunction& fk(std::string_view a) const { return fk_.at(schema_.arrow(a)); }
  const std::vector<FinSet>& pks() const noexcept { return pk_; }
  const std::vector<FinFunction>& fks() const noexcept { return fk_; }

  std::size_t total_rows() const {
    std::size_t n = 0;
    for (const auto& p : pk_) n += p.size();
    return n;
  }

  TableSet to_tables() const {
    const auto& g = schema_.graph();
    TableSet out;
    for (std::size_t v = 0; v < g.vertices().size(); ++v) {
      Table t{header_of(g, v), {}};
      auto cols = columns_of(g, v);
      for (std::size_t r = 0; r < pk_[v].size(); ++r) {
        std::vector<std::string> row{pk_[v][r]};
        for (auto a : cols) row.push_back(pk_[g.tgt(a)][fk_[a](r)]);
        t.rows.push_back(std::move(row));
      }
      out.emplace(g.vertices()[v], std::move(t));
    }
    return out;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    if (!(a.schema_ == b.schema_) || !(a.pk_ == b.pk_)) return false;
    for (std::size_t i = 0; i < a.fk_.size(); ++i)
      if (a.fk_[i].table() != b.fk_[i].table()) return false;
    return true;
  }

 private:
  Schema schema_;
  std::vector<FinSet> pk_;
  std::vector<FinFunction> fk_;
};

/// Totality and foreign keys of raw tables; reports the first offender in
/// vertex order, then row order, then column order.
inline Verdict check_tables(const Schema& s, const TableSet& tables) {
  const auto& g = s.graph();
  for (const auto& [name, _] : tables)
    if (!g.vertices().contains(name)) return Verdict::fail("UnknownTable", "no vertex named '" + name + "'");
  std::vector<std::set<std::string>> ids(g.vertices().size());
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    auto it = tables.find(g.vertices()[v]);
    if (it == tables.end()) return Verdict::fail("MissingTable", "no table for vertex '" + g.vertices()[v] + "'");
    if (it->second.header != header_of(g, v))
      return Verdict::fail("BadHeader", "table '" + g.vertices()[v] + "' must have header " + detail::join(header_of(g, v), ","));
    for (const auto& row : it->second.rows) {
      if (row.empty() || row[0].empty()) return Verdict::fail("MissingCell", "row without id in '" + g.vertices()[v] + "'");
      if (!ids[v].insert(row[0]).second)
        return Verdict::fail("DuplicateRow", "row '" + row[0] + "' appears twice in '" + g.vertices()[v] + "'");
    }
  }
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    const auto& t = tables.at(g.vertices()[v]);
    auto cols = columns_of(g, v);
    for (const auto& row : t.rows) {
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const auto& arrow = g.arrows()[cols[k]];
        if (row.size() <= k + 1 || row[k + 1].empty())
          return Verdict::fail("MissingCell", "row '" + row[0] + "' has no value for '" + arrow + "'");
        if (!ids[g.tgt(cols[k])].count(row[k + 1]))
          return Verdict::fail("ForeignKeyViolation", "row '" + row[0] + "' column '" + arrow + "' refers to '" + row[k + 1] +
                                                          "', which is not a row of '" + g.vertices()[g.tgt(cols[k])] + "'");
      }
      if (row.size() > cols.size() + 1)
        return Verdict::fail("ExtraCell", "row '" + row[0] + "' has more cells than columns");
    }
  }
  return Verdict::pass();
}

/// Build the functor from raw tables; throws a Validation error on bad tables.
/// PEDs are not checked here.
inline Instance instance_from_tables(const Schema& s, const TableSet& tables) {
  require(check_tables(s, tables));
  const auto& g = s.graph();
  std::vector<FinSet> pk;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    std::vector<std::string> ids;
    for (const auto& row : tables.at(g.vertices()[v]).rows) ids.push_back(row[0]);
    pk.emplace_back(std::move(ids));
  }
  std::vector<std::vector<std::size_t>> t(g.arrows().size());
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    auto cols = columns_of(g, v);
    for (const auto& row : tables.at(g.vertices()[v]).rows)
      for (std::size_t k = 0; k < cols.size(); ++k) t[cols[k]].push_back(pk[g.tgt(cols[k])].index_of(row[k + 1]));
  }
  std::vector<FinFunction> fk;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) fk.emplace_back(pk[g.src(a)], pk[g.tgt(a)], std::move(t[a]));
  return Instance(s, std::move(pk), std::move(fk));
}

/// Composite of the foreign keys along p; the identity for a trivial path.
inline FinFunction eval_path(const Instance& i, const Path& p) {
  const auto& g = i.schema().graph();
  if (!g.is_path(p)) throw precondition("BadPath", "not a path of the instance's schema");
  FinFunction f = FinFunction::identity(i.pk(p.start));
  for (auto a : p.arrows) f = compose(i.fk(a), f);
  return f;
}

/// Every declared PED holds rowwise. Reports the first PED, then first row.
inline Verdict validate_instance(const Instance& i) {
  const auto& s = i.schema();
  for (std::size_t k = 0; k < s.peds().size(); ++k) {
    const auto& ped = s.peds()[k];
    auto l = eval_path(i, ped.lhs);
    auto r = eval_path(i, ped.rhs);
    for (std::size_t x = 0; x < l.dom().size(); ++x)
      if (l(x) != r(x))
        return Verdict::fail("PEDViolation", "PED " + std::to_string(k + 1) + " (" + s.render_ped(k) + ") fails at row '" +
                                                 l.dom()[x] + "': " + l.cod()[l(x)] + " vs " + r.cod()[r(x)]);
  }
  return Verdict::pass();
}

inline Verdict validate_instance(const Schema& s, const TableSet& tables) {
  if (auto v = check_tables(s, tables); !v) return v;
  return validate_instance(instance_from_tables(s, tables));
}

// ---------------------------------------------------------------------------
// Morphisms

/// Components indexed by vertex; source and target instances are supplied by the caller.
struct InstanceMorphism {
  std::vector<FinFunction> components;
  friend bool operator==(const InstanceMorphism& a, const InstanceMorphism& b) {
    if (a.components.size() != b.components.size()) return false;
    for (std::size_t v = 0; v < a.components.size(); ++v)
      if (a.components[v].table() != b.components[v].table()) return false;
    return true;
  }
};

/// Every naturality square commutes. Reports the first failing (arrow, row)
/// pair in lexicographic order of names.
inline Verdict check_nat_trans(const Instance& i, const Instance& j, const InstanceMorphism& alpha) {
  if (!(i.schema() == j.schema())) return Verdict::fail("SchemaMismatch", "instances live on different schemas");
  const auto& g = i.schema().graph();
  if (alpha.components.size() != g.vertices().size()) return Verdict::fail("SchemaMismatch", "wrong number of components");
  for (std::size_t v = 0; v < g.vertices().size(); ++v)
    if (!(alpha.components[v].dom() == i.pk(v)) || !(alpha.components[v].cod() == j.pk(v)))
      return Verdict::fail("SchemaMismatch", "component at '" + g.vertices()[v] + "' has the wrong type");
  std::optional<std::pair<std::string, std::string>> first;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    auto v = g.src(a), w = g.tgt(a);
    for (std::size_t x = 0; x < i.pk(v).size(); ++x) {
      if (alpha.components[w](i.fk(a)(x)) == j.fk(a)(alpha.components[v](x))) continue;
      std::pair<std::string, std::string> cell{g.arrows()[a], i.pk(v)[x]};
      if (!first || cell < *first) first = cell;
    }
  }
  if (first) return Verdict::fail("NaturalityViolation", "arrow '" + first->first + "', row '" + first->second + "'");
  return Verdict::pass();
}

/// One row per row r of I at src(a): r, I(a)(r), α(I(a)(r)), α(r), J(a)(α(r)).
/// The third and fifth columns agree on every row iff the square for `a` commutes.
inline Table naturality_table(const Instance& i, const Instance& j, const InstanceMorphism& alpha, std::size_t a,
                              const std::string& i_name = "I", const std::string& j_name = "J",
                              const std::string& alpha_name = "alpha") {
  const auto& g = i.schema().graph();
  const auto& an = g.arrows()[a];
  auto v = g.src(a), w = g.tgt(a);
  Table t{{"id", i_name + "(" + an + ")", alpha_name + "∘" + i_name + "(" + an + ")", alpha_name,
           j_name + "(" + an + ")∘" + alpha_name},
          {}};
  for (std::size_t x = 0; x < i.pk(v).size(); ++x) {
    auto ix = i.fk(a)(x);
    auto ax = alpha.components[v](x);
    t.rows.push_back({i.pk(v)[x], i.pk(w)[ix], j.pk(w)[alpha.components[w](ix)], j.pk(v)[ax], j.pk(w)[j.fk(a)(ax)]});
  }
  return t;
}

inline InstanceMorphism identity_morphism(const Instance& i) {
  InstanceMorphism m;
  for (const auto& p : i.pks()) m.components.push_back(FinFunction::identity(p));
  return m;
}

/// beta ∘ alpha
inline InstanceMorphism compose(const InstanceMorphism& beta, const InstanceMorphism& alpha) {
  if (beta.components.size() != alpha.components.size()) throw precondition("SchemaMismatch", "component counts differ");
  InstanceMorphism m;
  for (std::size_t v = 0; v < alpha.components.size(); ++v) m.components.push_back(compose(beta.components[v], alpha.components[v]));
  return m;
}

/// Backtracking over (vertex, row) choices in an order that visits arrow
/// targets first, pruning on every square whose cells are both chosen.
/// `visit` receives each morphism and may return false to stop.
inline void for_each_nat_trans(const Instance& i, const Instance& j,
                               const std::function<bool(const InstanceMorphism&)>& visit) {
  if (!(i.schema() == j.schema())) throw precondition("SchemaMismatch", "instances live on different schemas");
  const auto& g = i.schema().graph();
  const std::size_t nv = g.vertices().size();

  // Vertex order: repeatedly take a vertex all of whose arrow targets are placed.
  std::vector<std::size_t> order;
  std::vector<bool> placed(nv, false);
  while (order.size() < nv) {
    std::optional<std::size_t> pick;
    for (std::size_t v = 0; v < nv && !pick; ++v) {
      if (placed[v]) continue;
      bool ready = true;
      for (auto a : g.out(v))
        if (g.tgt(a) != v && !placed[g.tgt(a)]) ready = false;
      if (ready) pick = v;
    }
    if (!pick)
      for (std::size_t v = 0; v < nv && !pick; ++v)
        if (!placed[v]) pick = v;
    placed[*pick] = true;
    order.push_back(*pick);
  }
  std::vector<std::size_t> rank(nv);
  for (std::size_t k = 0; k < nv; ++k) rank[order[k]] = k;

  struct Var {
    std::size_t v, x;
  };
  std::vector<Var> vars;
  std::vector<std::vector<std::size_t>> var_id(nv);
  for (auto v : order) {
    var_id[v].resize(i.pk(v).size());
    for (std::size_t x = 0; x < i.pk(v).size(); ++x) {
      var_id[v][x] = vars.size();
      vars.push_back({v, x});
    }
  }
  // Square (a, x) links variable (src a, x) with (tgt a, fk(a)(x)); check at the later one.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> checks(vars.size());
  for (std::size_t a = 0; a < g.arrows().size(); ++a)
    for (std::size_t x = 0; x < i.pk(g.src(a)).size(); ++x) {
      auto s = var_id[g.src(a)][x];
      auto t = var_id[g.tgt(a)][i.fk(a)(x)];
      checks[std::max(s, t)].emplace_back(a, x);
    }
  for (std::size_t v = 0; v < nv; ++v)
    if (!i.pk(v).empty() && j.pk(v).empty()) return;

  std::vector<std::size_t> val(vars.size());
  bool stop = false;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (stop) return;
    if (k == vars.size()) {
      InstanceMorphism m;
      m.components.resize(nv);
      for (std::size_t v = 0; v < nv; ++v) {
        std::vector<std::size_t> t(i.pk(v).size());
        for (std::size_t x = 0; x < t.size(); ++x) t[x] = val[var_id[v][x]];
        m.components[v] = FinFunction(i.pk(v), j.pk(v), std::move(t));
      }
      if (!visit(m)) stop = true;
      return;
    }
    const auto v = vars[k].v;
    for (std::size_t y = 0; y < j.pk(v).size(); ++y) {
      val[k] = y;
      bool ok = true;
      for (const auto& [a, x] : checks[k]) {
        auto s = val[var_id[g.src(a)][x]];
        auto t = val[var_id[g.tgt(a)][i.fk(a)(x)]];
        if (t != j.fk(a)(s)) {
          ok = false;
          break;
        }
      }
      if (ok) go(k + 1);
      if (stop) return;
    }
  };
  go(0);
}

inline std::vector<InstanceMorphism> enumerate_nat_trans(const Instance& i, const Instance& j) {
  std::vector<InstanceMorphism> out;
  for_each_nat_trans(i, j, [&](const InstanceMorphism& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

inline std::size_t count_nat_trans(const Instance& i, const Instance& j) {
  std::size_t n = 0;
  for_each_nat_trans(i, j, [&](const InstanceMorphism&) {
    ++n;
    return true;
  });
  return n;
}

// ---------------------------------------------------------------------------
// Pointwise limits and colimits

/// A diagram of instances on one schema, indexed by a finite shape.
struct InstanceDiagram {
  std::vector<std::string> vertices;
  std::vector<ShapeArrow> arrows;
  std::vector<Instance> objects;
  std::vector<InstanceMorphism> maps;

  FinDiagram at(std::size_t c) const {
    FinDiagram d;
    for (std::size_t k = 0; k < vertices.size(); ++k) d.add_vertex(vertices[k], objects[k].pk(c));
    for (std::size_t a = 0; a < arrows.size(); ++a) d.add_arrow(arrows[a].name, arrows[a].src, arrows[a].tgt, maps[a].components.at(c));
    return d;
  }
};

struct InstanceCone {
  Instance apex;
  std::vector<InstanceMorphism> legs;  // one per diagram vertex
};

inline InstanceCone instance_limit(const InstanceDiagram& d, const LimitOptions& opts = {}) {
  if (d.objects.empty()) throw precondition("EmptyDiagram", "instance limits need at least one object to fix the schema");
  const auto& s = d.objects[0].schema();
  const auto& g = s.graph();
  std::vector<LimitResult> per(g.vertices().size());
  std::vector<FinSet> pk;
  for (std::size_t c = 0; c < g.vertices().size(); ++c) {
    per[c] = limit_of_diagram(d.at(c), opts);
    pk.push_back(per[c].apex);
  }
  std::vector<FinFunction> fk;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    auto c = g.src(a), e = g.tgt(a);
    std::map<std::vector<std::size_t>, std::size_t> lookup;
    for (std::size_t r = 0; r < per[e].tuples.size(); ++r) lookup.emplace(per[e].tuples[r], r);
    std::vector<std::size_t> t;
    for (const auto& tup : per[c].tuples) {
      std::vector<std::size_t> img(tup.size());
      for (std::size_t k = 0; k < tup.size(); ++k) img[k] = d.objects[k].fk(a)(tup[k]);
      t.push_back(lookup.at(img));
    }
    fk.emplace_back(pk[c], pk[e], std::move(t));
  }
  InstanceCone out{Instance(s, std::move(pk), std::move(fk)), {}};
  for (std::size_t k = 0; k < d.vertices.size(); ++k) {
    InstanceMorphism m;
    for (std::size_t c = 0; c < g.vertices().size(); ++c) m.components.push_back(per[c].legs[k]);
    out.legs.push_back(std::move(m));
  }
  return out;
}

/// Pointwise colimit, then the PEDs are rechecked (ColimitPEDFailure).
inline InstanceCone instance_colimit(const InstanceDiagram& d) {
  if (d.objects.empty()) throw precondition("EmptyDiagram", "instance colimits need at least one object to fix the schema");
  const auto& s = d.objects[0].schema();
  const auto& g = s.graph();
  std::vector<ColimitResult> per(g.vertices().size());
  std::vector<FinSet> pk;
  for (std::size_t c = 0; c < g.vertices().size(); ++c) {
    per[c] = colimit_of_diagram(d.at(c));
    pk.push_back(per[c].apex);
  }
  std::vector<FinFunction> fk;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    auto c = g.src(a), e = g.tgt(a);
    std::vector<std::size_t> t(pk[c].size(), 0);
    for (std::size_t k = 0; k < d.objects.size(); ++k)
      for (std::size_t x = 0; x < d.objects[k].pk(c).size(); ++x)
        t[per[c].legs[k](x)] = per[e].legs[k](d.objects[k].fk(a)(x));
    fk.emplace_back(pk[c], pk[e], std::move(t));
  }
  InstanceCone out{Instance(s, std::move(pk), std::move(fk)), {}};
  if (auto v = validate_instance(out.apex); !v)
    throw Error(ErrorKind::Validation, "ColimitPEDFailure", v.detail);
  for (std::size_t k = 0; k < d.vertices.size(); ++k) {
    InstanceMorphism m;
    for (std::size_t c = 0; c < g.vertices().size(); ++c) m.components.push_back(per[c].legs[k]);
    out.legs.push_back(std::move(m));
  }
  return out;
}

/// Rows "(x,y)"; legs are the two projections.
inline InstanceCone instance_product(const Instance& i, const Instance& j) {
  if (!(i.schema() == j.schema())) throw precondition("SchemaMismatch", "instances live on different schemas");
  return instance_limit(InstanceDiagram{{"X", "Y"}, {}, {i, j}, {}});
}

/// Rows tagged "inl:"/"inr:"; legs are the two injections.
inline InstanceCone instance_coproduct(const Instance& i, const Instance& j) {
  if (!(i.schema() == j.schema())) throw precondition("SchemaMismatch", "instances live on different schemas");
  return instance_colimit(InstanceDiagram{{"inl", "inr"}, {}, {i, j}, {}});
}

// ---------------------------------------------------------------------------
// Representables and Yoneda

/// Y(c): rows at d are the ≃-classes of paths c -> d, named by their
/// shortlex-least member; foreign keys postcompose.
inline Instance representable(const Schema& s, std::size_t c, std::size_t bound = kDefaultBound) {
  auto cl = stable_closure(s, c, bound);
  const auto& g = s.graph();
  std::vector<FinSet> pk;
  std::vector<std::vector<std::size_t>> slot(g.vertices().size());
  std::vector<std::size_t> pos(cl->rep.size());
  for (std::size_t d = 0; d < g.vertices().size(); ++d) {
    std::vector<std::string> names;
    for (auto k : cl->by_target[d]) {
      pos[k] = names.size();
      names.push_back(g.render(cl->representative(k)));
    }
    pk.emplace_back(std::move(names));
  }
  std::vector<FinFunction> fk;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    std::vector<std::size_t> t;
    for (auto k : cl->by_target[g.src(a)]) t.push_back(pos[cl->extend(k, a)]);
    fk.emplace_back(pk[g.src(a)], pk[g.tgt(a)], std::move(t));
  }
  return Instance(s, std::move(pk), std::move(fk));
}

inline Instance representable(const Schema& s, std::string_view c, std::size_t bound = kDefaultBound) {
  return representable(s, s.vertex(c), bound);
}

struct YonedaReport {
  std::size_t morphisms = 0;  // |Hom(Y(c), i)|
  std::size_t rows = 0;       // |i(c)|
  bool bijective = false;     // α ↦ α_c(id_c) hits every row exactly once
};

inline YonedaReport yoneda_check(const Schema& s, std::size_t c, const Instance& i, std::size_t bound = kDefaultBound) {
  auto y = representable(s, c, bound);
  auto id_row = y.pk(c).index_of(s.render(Path{c, {}}));
  YonedaReport r;
  r.rows = i.pk(c).size();
  std::vector<std::size_t> hits(r.rows, 0);
  for_each_nat_trans(y, i, [&](const InstanceMorphism& m) {
    ++r.morphisms;
    ++hits[m.components[c](id_row)];
    return true;
  });
  r.bijective = std::all_of(hits.begin(), hits.end(), [](std::size_t h) { return h == 1; }) && r.morphisms == r.rows;
  return r;
}

// ---------------------------------------------------------------------------
// Category of elements and RDF

/// Objects "(vertex,row)" and arrows "(row,arrow)", with the projection to the schema graph.
struct ElementsGraph {
  Graph graph;
  GraphHom projection;
  std::vector<std::pair<std::size_t, std::size_t>> object_row;  // (vertex, row) per object
  std::vector<std::pair<std::size_t, std::size_t>> arrow_cell;  // (arrow, row) per arrow
};

inline ElementsGraph category_of_elements(const Instance& i) {
  const auto& g = i.schema().graph();
  ElementsGraph e;
  std::vector<std::string> objs;
  std::vector<std::size_t> proj_v;
  std::vector<std::size_t> offset(g.vertices().size());
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    offset[v] = objs.size();
    for (std::size_t x = 0; x < i.pk(v).size(); ++x) {
      objs.push_back("(" + g.vertices()[v] + "," + i.pk(v)[x] + ")");
      proj_v.push_back(v);
      e.object_row.emplace_back(v, x);
    }
  }
  std::vector<std::string> arrs;
  std::vector<std::size_t> s, t, proj_a;
  for (std::size_t v = 0; v < g.vertices().size(); ++v)
    for (std::size_t x = 0; x < i.pk(v).size(); ++x)
      for (auto a : columns_of(g, v)) {
        arrs.push_back("(" + i.pk(v)[x] + "," + g.arrows()[a] + ")");
        s.push_back(offset[v] + x);
        t.push_back(offset[g.tgt(a)] + i.fk(a)(x));
        proj_a.push_back(a);
        e.arrow_cell.emplace_back(a, x);
      }
  e.graph = Graph(FinSet(std::move(objs)), FinSet(std::move(arrs)), std::move(s), std::move(t));
  e.projection = GraphHom{FinFunction(e.graph.vertices(), g.vertices(), std::move(proj_v)),
                          FinFunction(e.graph.arrows(), g.arrows(), std::move(proj_a))};
  return e;
}

/// Inverse of category_of_elements given the schema.
inline Instance instance_from_elements(const Schema& s, const ElementsGraph& e) {
  const auto& g = s.graph();
  std::vector<std::vector<std::string>> rows(g.vertices().size());
  std::vector<std::size_t> local(e.graph.vertices().size());
  for (std::size_t o = 0; o < e.graph.vertices().size(); ++o) {
    auto v = e.projection.on_vertices(o);
    const auto& name = e.graph.vertices()[o];
    auto prefix = "(" + g.vertices()[v] + ",";
    local[o] = rows[v].size();
    rows[v].push_back(name.substr(prefix.size(), name.size() - prefix.size() - 1));
  }
  std::vector<FinSet> pk;
  for (auto& r : rows) pk.emplace_back(std::move(r));
  std::vector<std::vector<std::size_t>> t(g.arrows().size());
  for (std::size_t a = 0; a < g.arrows().size(); ++a) t[a].assign(pk[g.src(a)].size(), 0);
  for (std::size_t k = 0; k < e.graph.arrows().size(); ++k)
    t[e.projection.on_arrows(k)][local[e.graph.src(k)]] = local[e.graph.tgt(k)];
  std::vector<FinFunction> fk;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) fk.emplace_back(pk[g.src(a)], pk[g.tgt(a)], std::move(t[a]));
  return Instance(s, std::move(pk), std::move(fk));
}

struct RdfTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  friend auto operator<=>(const RdfTriple&, const RdfTriple&) = default;
  friend bool operator==(const RdfTriple&, const RdfTriple&) = default;
  std::string render() const { return subject + " " + predicate + " " + object; }
};

/// One triple per arrow of the category of elements, sorted.
inline std::vector<RdfTriple> export_rdf(const Instance& i) {
  const auto& g = i.schema().graph();
  std::vector<RdfTriple> out;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    const auto& f = i.fk(a);
    for (std::size_t x = 0; x < f.dom().size(); ++x) out.push_back({f.dom()[x], g.arrows()[a], f.cod()[f(x)]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Tables recovered from triples. Rows are sorted; a row that is neither the
/// subject nor the object of any triple cannot be recovered.
inline TableSet tables_from_rdf(const Schema& s, const std::vector<RdfTriple>& triples) {
  const auto& g = s.graph();
  std::vector<std::set<std::string>> rows(g.vertices().size());
  std::map<std::pair<std::string, std::size_t>, std::string> cell;
  for (const auto& t : triples) {
    auto a = g.arrow(t.predicate);
    rows[g.src(a)].insert(t.subject);
    rows[g.tgt(a)].insert(t.object);
    cell[{t.subject, a}] = t.object;
  }
  TableSet out;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    Table tab{header_of(g, v), {}};
    for (const auto& r : rows[v]) {
      std::vector<std::string> row{r};
      for (auto a : columns_of(g, v)) {
        auto it = cell.find({r, a});
        row.push_back(it == cell.end() ? std::string() : it->second);
      }
      tab.rows.push_back(std::move(row));
    }
    out.emplace(g.vertices()[v], std::move(tab));
  }
  return out;
}

}  // namespace catdb
