#pragma once

// Data migration along a schema morphism F: C -> D.
//   delta: D-instances to C-instances by precomposition.
//   sigma: C-instances to D-instances by colimits over (F↓d).
//   pi:    C-instances to D-instances by limits over (d↓F).

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "catdb/error.hpp"
#include "catdb/finset.hpp"
#include "catdb/instance.hpp"
#include "catdb/schema.hpp"

namespace catdb {

inline Instance delta(const SchemaMorphism& f, const Instance& j) {
  if (!(j.schema() == f.target)) throw precondition("SchemaMismatch", "instance is not on the morphism's target schema");
  const auto& cg = f.source.graph();
  std::vector<FinSet> pk;
  for (std::size_t c = 0; c < cg.vertices().size(); ++c) pk.push_back(j.pk(f.on_vertices(c)));
  std::vector<FinFunction> fk;
  for (std::size_t a = 0; a < cg.arrows().size(); ++a) fk.push_back(eval_path(j, f.on_arrows[a]));
  Instance out(f.source, std::move(pk), std::move(fk));
  if (auto v = validate_instance(out); !v)
    throw Error(ErrorKind::Validation, "PEDNotPreserved", "delta produced an invalid instance: " + v.detail);
  return out;
}

/// Δ on morphisms: component at c is the component at F(c).
inline InstanceMorphism delta(const SchemaMorphism& f, const InstanceMorphism& alpha) {
  InstanceMorphism m;
  for (std::size_t c = 0; c < f.source.vertices().size(); ++c) m.components.push_back(alpha.components.at(f.on_vertices(c)));
  return m;
}

// ---------------------------------------------------------------------------
// Comma categories

enum class CommaOrientation { FDownD, DDownF };

struct CommaObject {
  std::size_t c;    // source vertex
  std::size_t cls;  // class in the closure that owns the path
  Path path;        // representative: F(c) -> d, or d -> F(c)
};

struct CommaArrow {
  std::size_t src;
  std::size_t tgt;
  std::size_t arrow;  // source-schema arrow m
};

struct CommaCategory {
  CommaOrientation orientation;
  std::size_t d;
  std::vector<CommaObject> objects;
  std::vector<CommaArrow> arrows;
  FinSet names;  // "(c,path)"
};

/// Objects (c, [g]) with g: F(c) -> d (FDownD) or g: d -> F(c) (DDownF).
/// An arrow (c,g) -> (c',g') is a source arrow m with g ≃ F(m)·g'
/// (resp. g·F(m) ≃ g'); with `verify` every triangle is re-proved by paths_equal.
inline CommaCategory comma_category(const SchemaMorphism& f, std::size_t d, CommaOrientation o,
                                    std::size_t bound = kDefaultBound, bool verify = true) {
  const auto& C = f.source.graph();
  const auto& D = f.target;
  const auto& dg = D.graph();
  CommaCategory cc{o, d, {}, {}, {}};
  const char* side = o == CommaOrientation::FDownD ? "(F↓d)" : "(d↓F)";
  auto require_stable = [&](const PathClosure& cl, std::size_t target) {
    if (!cl.stable[target])
      throw PossiblyInfiniteError(dg.vertices()[d], std::string("comma category ") + side + " needs hom(" +
                                                        dg.vertices()[cl.source] + ", " + dg.vertices()[target] +
                                                        "), which did not stabilise within bound " + std::to_string(bound));
  };
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < C.vertices().size(); ++c) {
    auto fc = f.on_vertices(c);
    auto cl = o == CommaOrientation::FDownD ? D.closure(fc, bound) : D.closure(d, bound);
    auto target = o == CommaOrientation::FDownD ? d : fc;
    require_stable(*cl, target);
    for (auto k : cl->by_target[target]) {
      lookup[{c, k}] = cc.objects.size();
      cc.objects.push_back({c, k, cl->representative(k)});
      names.push_back("(" + C.vertices()[c] + "," + dg.render(cl->representative(k)) + ")");
    }
  }
  cc.names = FinSet(std::move(names));
  for (std::size_t t = 0; t < cc.objects.size(); ++t) {
    const auto& obj = cc.objects[t];
    if (o == CommaOrientation::FDownD) {
      // m: c -> obj.c lands on obj from (c, [F(m)·g']).
      for (std::size_t m = 0; m < C.arrows().size(); ++m) {
        if (C.tgt(m) != obj.c) continue;
        auto c = C.src(m);
        auto cl = D.closure(f.on_vertices(c), bound);
        auto p = dg.concat(f.on_arrows[m], obj.path);
        auto k = cl->class_of(p);
        auto s = lookup.at({c, k});
        if (verify && paths_equal(D, cc.objects[s].path, p, bound).verdict != EqVerdict::Equal)
          throw Error(ErrorKind::Budget, "ExhaustedBudget", "could not re-prove a comma triangle");
        cc.arrows.push_back({s, t, m});
      }
    } else {
      // m: obj.c -> c' leaves obj toward (c', [g·F(m)]).
      auto cl = D.closure(d, bound);
      for (std::size_t m = 0; m < C.arrows().size(); ++m) {
        if (C.src(m) != obj.c) continue;
        auto p = dg.concat(obj.path, f.on_arrows[m]);
        auto k = cl->class_of(p);
        auto tt = lookup.at({C.tgt(m), k});
        if (verify && paths_equal(D, cc.objects[tt].path, p, bound).verdict != EqVerdict::Equal)
          throw Error(ErrorKind::Budget, "ExhaustedBudget", "could not re-prove a comma triangle");
        cc.arrows.push_back({t, tt, m});
      }
    }
  }
  return cc;
}

// ---------------------------------------------------------------------------
// Sigma

struct SigmaResult {
  Instance instance;
  std::vector<CommaCategory> commas;  // per target vertex
  // per target vertex d: per comma object: per row of i(c) -> row of Σ(d)
  std::vector<std::vector<std::vector<std::size_t>>> element_class;
};

/// Σ_F(i). A class holding a row at an object (c, id) is named by its least
/// such row; any other class is a Skolem row `<row>.<arrows of path>` taken
/// from its member with the shortest path (ties by name). Real rows come
/// first, ordered by their earliest real member over comma objects then
/// input rows; Skolem rows follow in order of first appearance. Names that
/// would collide are prefixed with "<source vertex>:".
inline SigmaResult sigma_full(const SchemaMorphism& f, const Instance& i, std::size_t bound = kDefaultBound) {
  if (!(i.schema() == f.source)) throw precondition("SchemaMismatch", "instance is not on the morphism's source schema");
  const auto& C = f.source.graph();
  const auto& D = f.target;
  const auto& dg = D.graph();
  const std::size_t nd = dg.vertices().size();
  SigmaResult r;
  std::vector<FinSet> pk(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    auto cc = comma_category(f, d, CommaOrientation::FDownD, bound, false);
    std::vector<std::size_t> offset(cc.objects.size() + 1, 0);
    for (std::size_t k = 0; k < cc.objects.size(); ++k) offset[k + 1] = offset[k] + i.pk(cc.objects[k].c).size();
    detail::UnionFind uf(offset.back());
    for (const auto& ar : cc.arrows)
      for (std::size_t x = 0; x < i.pk(C.src(ar.arrow)).size(); ++x)
        uf.unite(offset[ar.src] + x, offset[ar.tgt] + i.fk(ar.arrow)(x));
    auto classes = uf.classes();

    struct Named {
      std::string name;
      bool real;
      std::size_t c;
      std::size_t first;
    };
    std::vector<Named> info;
    for (const auto& members : classes) {
      std::optional<Named> best_real, best_skolem;
      std::size_t best_len = SIZE_MAX, first_real = SIZE_MAX;
      for (auto flat : members) {
        auto k = static_cast<std::size_t>(std::upper_bound(offset.begin(), offset.end(), flat) - offset.begin()) - 1;
        const auto& obj = cc.objects[k];
        const auto& row = i.pk(obj.c)[flat - offset[k]];
        auto cl = D.closure(f.on_vertices(obj.c), bound);
        if (cl->class_of_path[0] == obj.cls) {
          first_real = std::min(first_real, flat);
          if (!best_real || row < best_real->name) best_real = Named{row, true, obj.c, 0};
        } else {
          auto name = row + "." + detail::join(dg.arrow_names(obj.path), ".");
          auto len = obj.path.arrows.size();
          if (!best_skolem || len < best_len || (len == best_len && name < best_skolem->name)) {
            best_skolem = Named{name, false, obj.c, members.front()};
            best_len = len;
          }
        }
      }
      if (best_real) best_real->first = first_real;
      info.push_back(best_real ? *best_real : *best_skolem);
    }
    std::vector<std::size_t> order(info.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (info[a].real != info[b].real) return info[a].real;
      return info[a].first < info[b].first;
    });
    std::map<std::string, std::size_t> uses;
    for (const auto& n : info) ++uses[n.name];
    std::vector<std::string> names;
    std::vector<std::size_t> position(info.size());
    for (auto k : order) {
      position[k] = names.size();
      auto n = info[k].name;
      if (uses[n] > 1) n = C.vertices()[info[k].c] + ":" + n;
      names.push_back(std::move(n));
    }
    try {
      pk[d] = FinSet(names);
    } catch (const Error&) {
      throw precondition("NameCollision", "sigma could not assign distinct row names at '" + dg.vertices()[d] + "'");
    }
    std::vector<std::size_t> flat_class(offset.back());
    for (std::size_t k = 0; k < classes.size(); ++k)
      for (auto m : classes[k]) flat_class[m] = position[k];
    std::vector<std::vector<std::size_t>> ec(cc.objects.size());
    for (std::size_t k = 0; k < cc.objects.size(); ++k)
      for (std::size_t x = 0; x < i.pk(cc.objects[k].c).size(); ++x) ec[k].push_back(flat_class[offset[k] + x]);
    r.commas.push_back(std::move(cc));
    r.element_class.push_back(std::move(ec));
  }
  // (c, g) in (F↓d) goes to (c, [g·a]) in (F↓e).
  std::vector<FinFunction> fk;
  for (std::size_t a = 0; a < dg.arrows().size(); ++a) {
    auto d = dg.src(a), e = dg.tgt(a);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
    for (std::size_t k = 0; k < r.commas[e].objects.size(); ++k)
      lookup[{r.commas[e].objects[k].c, r.commas[e].objects[k].cls}] = k;
    std::vector<std::size_t> t(pk[d].size(), 0);
    for (std::size_t k = 0; k < r.commas[d].objects.size(); ++k) {
      const auto& obj = r.commas[d].objects[k];
      auto cl = D.closure(f.on_vertices(obj.c), bound);
      auto k2 = lookup.at({obj.c, cl->extend(obj.cls, a)});
      for (std::size_t x = 0; x < i.pk(obj.c).size(); ++x) t[r.element_class[d][k][x]] = r.element_class[e][k2][x];
    }
    fk.emplace_back(pk[d], pk[e], std::move(t));
  }
  r.instance = Instance(D, std::move(pk), std::move(fk));
  if (auto v = validate_instance(r.instance); !v) throw Error(ErrorKind::Validation, "PEDRecheckFailure", v.detail);
  return r;
}

inline Instance sigma(const SchemaMorphism& f, const Instance& i, std::size_t bound = kDefaultBound) {
  return sigma_full(f, i, bound).instance;
}

/// η: i -> Δ_F Σ_F i, x ↦ class of x at (c, id).
inline InstanceMorphism sigma_unit(const SchemaMorphism& f, const Instance& i, const SigmaResult& s,
                                   std::size_t bound = kDefaultBound) {
  InstanceMorphism m;
  for (std::size_t c = 0; c < f.source.vertices().size(); ++c) {
    auto d = f.on_vertices(c);
    auto cl = f.target.closure(d, bound);
    const auto& cc = s.commas[d];
    std::size_t k = 0;
    while (!(cc.objects[k].c == c && cc.objects[k].cls == cl->class_of_path[0])) ++k;
    m.components.emplace_back(i.pk(c), s.instance.pk(d), s.element_class[d][k]);
  }
  return m;
}

/// ε: Σ_F Δ_F j -> j, the class of (c, g, x) ↦ j(g)(x).
inline InstanceMorphism sigma_counit(const SchemaMorphism& f, const Instance& j, const SigmaResult& s) {
  InstanceMorphism m;
  for (std::size_t d = 0; d < f.target.vertices().size(); ++d) {
    std::vector<std::size_t> t(s.instance.pk(d).size(), 0);
    const auto& cc = s.commas[d];
    for (std::size_t k = 0; k < cc.objects.size(); ++k) {
      auto g = eval_path(j, cc.objects[k].path);
      for (std::size_t x = 0; x < g.dom().size(); ++x) t[s.element_class[d][k][x]] = g(x);
    }
    m.components.emplace_back(s.instance.pk(d), j.pk(d), std::move(t));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Pi

struct PiResult {
  Instance instance;
  std::vector<CommaCategory> commas;                           // per target vertex
  std::vector<std::vector<std::vector<std::size_t>>> tuples;  // per d: per row: component per comma object
};

/// Π_F(i). Rows are compatible tuples over (d↓F), named by joining with "+"
/// the components at objects (c, id); when those do not determine the tuple,
/// all components are joined. A tuple with no components is "()".
inline PiResult pi_full(const SchemaMorphism& f, const Instance& i, std::size_t bound = kDefaultBound) {
  if (!(i.schema() == f.source)) throw precondition("SchemaMismatch", "instance is not on the morphism's source schema");
  const auto& C = f.source.graph();
  const auto& D = f.target;
  const auto& dg = D.graph();
  const std::size_t nd = dg.vertices().size();
  PiResult r;
  std::vector<FinSet> pk(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    auto cc = comma_category(f, d, CommaOrientation::DDownF, bound, false);
    FinDiagram dia;
    for (std::size_t k = 0; k < cc.objects.size(); ++k) dia.add_vertex(cc.names[k], i.pk(cc.objects[k].c));
    for (const auto& ar : cc.arrows) dia.add_arrow(C.arrows()[ar.arrow], ar.src, ar.tgt, i.fk(ar.arrow));
    auto lim = limit_of_diagram(dia);
    auto id_cls = D.closure(d, bound)->class_of_path[0];
    std::vector<std::size_t> ids;
    for (std::size_t k = 0; k < cc.objects.size(); ++k)
      if (cc.objects[k].cls == id_cls) ids.push_back(k);
    auto render = [&](const std::vector<std::size_t>& which) {
      std::vector<std::string> names;
      for (const auto& t : lim.tuples) {
        std::vector<std::string> parts;
        for (auto k : which) parts.push_back(i.pk(cc.objects[k].c)[t[k]]);
        names.push_back(parts.empty() ? std::string("()") : detail::join(parts, "+"));
      }
      return names;
    };
    auto names = render(ids);
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
      std::vector<std::size_t> all(cc.objects.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      names = render(all);
    }
    pk[d] = FinSet(std::move(names));
    r.commas.push_back(std::move(cc));
    r.tuples.push_back(std::move(lim.tuples));
  }
  // Component at (c, h) of the image is the component at (c, [a·h]).
  std::vector<FinFunction> fk;
  for (std::size_t a = 0; a < dg.arrows().size(); ++a) {
    auto d = dg.src(a), e = dg.tgt(a);
    auto cl = D.closure(d, bound);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
    for (std::size_t k = 0; k < r.commas[d].objects.size(); ++k)
      lookup[{r.commas[d].objects[k].c, r.commas[d].objects[k].cls}] = k;
    std::vector<std::size_t> from;
    for (const auto& obj : r.commas[e].objects)
      from.push_back(lookup.at({obj.c, cl->class_of(dg.concat(Path{d, {a}}, obj.path))}));
    std::map<std::vector<std::size_t>, std::size_t> row_of;
    for (std::size_t k = 0; k < r.tuples[e].size(); ++k) row_of.emplace(r.tuples[e][k], k);
    std::vector<std::size_t> t;
    for (const auto& tup : r.tuples[d]) {
      std::vector<std::size_t> img;
      for (auto k : from) img.push_back(tup[k]);
      t.push_back(row_of.at(img));
    }
    fk.emplace_back(pk[d], pk[e], std::move(t));
  }
  r.instance = Instance(D, std::move(pk), std::move(fk));
  if (auto v = validate_instance(r.instance); !v) throw Error(ErrorKind::Validation, "PEDRecheckFailure", v.detail);
  return r;
}

inline Instance pi(const SchemaMorphism& f, const Instance& i, std::size_t bound = kDefaultBound) {
  return pi_full(f, i, bound).instance;
}

/// η: j -> Π_F Δ_F j, y ↦ (j(g)(y)) over objects (c, g).
inline InstanceMorphism pi_unit(const SchemaMorphism& f, const Instance& j, const PiResult& p) {
  InstanceMorphism m;
  for (std::size_t d = 0; d < f.target.vertices().size(); ++d) {
    const auto& cc = p.commas[d];
    std::map<std::vector<std::size_t>, std::size_t> row_of;
    for (std::size_t k = 0; k < p.tuples[d].size(); ++k) row_of.emplace(p.tuples[d][k], k);
    std::vector<FinFunction> legs;
    for (const auto& obj : cc.objects) legs.push_back(eval_path(j, obj.path));
    std::vector<std::size_t> t;
    for (std::size_t y = 0; y < j.pk(d).size(); ++y) {
      std::vector<std::size_t> tup;
      for (const auto& g : legs) tup.push_back(g(y));
      t.push_back(row_of.at(tup));
    }
    m.components.emplace_back(j.pk(d), p.instance.pk(d), std::move(t));
  }
  return m;
}

/// ε: Δ_F Π_F i -> i, a tuple at F(c) ↦ its component at (c, id).
inline InstanceMorphism pi_counit(const SchemaMorphism& f, const Instance& i, const PiResult& p,
                                  std::size_t bound = kDefaultBound) {
  InstanceMorphism m;
  for (std::size_t c = 0; c < f.source.vertices().size(); ++c) {
    auto d = f.on_vertices(c);
    auto id_cls = f.target.closure(d, bound)->class_of_path[0];
    const auto& cc = p.commas[d];
    std::size_t k = 0;
    while (!(cc.objects[k].c == c && cc.objects[k].cls == id_cls)) ++k;
    std::vector<std::size_t> t;
    for (const auto& tup : p.tuples[d]) t.push_back(tup[k]);
    m.components.emplace_back(p.instance.pk(d), i.pk(c), std::move(t));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Adjunction checks

struct AdjunctionReport {
  std::size_t hom_sigma_i_j = 0;   // |Hom(Σi, j)|
  std::size_t hom_i_delta_j = 0;   // |Hom(i, Δj)|
  bool sigma_bijective = false;    // α ↦ Δ(α)∘η
  std::size_t hom_delta_j_i = 0;   // |Hom(Δj, i)|
  std::size_t hom_j_pi_i = 0;      // |Hom(j, Πi)|
  bool pi_bijective = false;       // γ ↦ ε∘Δ(γ)
  bool ok() const {
    return sigma_bijective && pi_bijective && hom_sigma_i_j == hom_i_delta_j && hom_delta_j_i == hom_j_pi_i;
  }
};

namespace detail {

// True iff `mapped` lists every element of `expected` exactly once.
inline bool same_elements(std::vector<InstanceMorphism> mapped, const std::vector<InstanceMorphism>& expected) {
  if (mapped.size() != expected.size()) return false;
  auto key = [](const InstanceMorphism& m) {
    std::vector<std::vector<std::size_t>> k;
    for (const auto& c : m.components) k.push_back(c.table());
    return k;
  };
  std::vector<std::vector<std::vector<std::size_t>>> a, b;
  for (const auto& m : mapped) a.push_back(key(m));
  for (const auto& m : expected) b.push_back(key(m));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return std::adjacent_find(a.begin(), a.end()) == a.end() && a == b;
}

}  // namespace detail

/// Brute-force check of Σ_F ⊣ Δ_F ⊣ Π_F on one pair of instances.
inline AdjunctionReport verify_adjunction(const SchemaMorphism& f, const Instance& i, const Instance& j,
                                          std::size_t bound = kDefaultBound) {
  AdjunctionReport rep;
  auto dj = delta(f, j);

  auto s = sigma_full(f, i, bound);
  auto eta = sigma_unit(f, i, s, bound);
  auto left = enumerate_nat_trans(s.instance, j);
  auto right = enumerate_nat_trans(i, dj);
  rep.hom_sigma_i_j = left.size();
  rep.hom_i_delta_j = right.size();
  std::vector<InstanceMorphism> transposed;
  for (const auto& alpha : left) transposed.push_back(compose(delta(f, alpha), eta));
  rep.sigma_bijective = detail::same_elements(std::move(transposed), right);

  auto p = pi_full(f, i, bound);
  auto eps = pi_counit(f, i, p, bound);
  auto to_pi = enumerate_nat_trans(j, p.instance);
  auto from_delta = enumerate_nat_trans(dj, i);
  rep.hom_j_pi_i = to_pi.size();
  rep.hom_delta_j_i = from_delta.size();
  std::vector<InstanceMorphism> back;
  for (const auto& gamma : to_pi) back.push_back(compose(eps, delta(f, gamma)));
  rep.pi_bijective = detail::same_elements(std::move(back), from_delta);
  return rep;
}

}  // namespace catdb
