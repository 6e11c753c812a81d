#pragma once

// Schemas (graphs with path equivalences), a bounded rewriting prover for
// path equality, hom-set closures, schema morphisms, cones and opposites.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "catdb/error.hpp"
#include "catdb/finset.hpp"
#include "catdb/graph.hpp"

namespace catdb {

inline constexpr std::size_t kDefaultBound = 16;
inline constexpr std::size_t kDefaultNodeBudget = 200'000;

/// A path equivalence declaration lhs ≃ rhs, stored in the user's orientation.
struct Ped {
  Path lhs;
  Path rhs;
  friend bool operator==(const Ped&, const Ped&) = default;
};

class Schema;

namespace detail {

// Arrow sequences are hashed as 3 bytes per arrow.
inline void append_key(std::string& key, std::size_t arrow) {
  key.push_back(static_cast<char>(arrow & 0xff));
  key.push_back(static_cast<char>((arrow >> 8) & 0xff));
  key.push_back(static_cast<char>((arrow >> 16) & 0xff));
}

inline std::string encode(const std::vector<std::size_t>& arrows, std::size_t from = 0,
                          std::size_t to = SIZE_MAX) {
  std::string key;
  to = std::min(to, arrows.size());
  key.reserve(3 * (to - from));
  for (std::size_t i = from; i < to; ++i) append_key(key, arrows[i]);
  return key;
}

struct RuleRef {
  std::uint32_t ped;
  bool forward;  // lhs -> rhs when true
};

/// Both orientations of every PED. Rules with a non-empty left side are looked
/// up by their arrow sequence; rules with an empty left side insert a cycle at
/// a vertex.
struct RewriteIndex {
  std::vector<std::pair<std::string, RuleRef>> keyed;  // sorted by key
  std::vector<std::size_t> lengths;                    // distinct left-side lengths
  std::vector<std::vector<RuleRef>> inserts;           // per vertex
};

}  // namespace detail

/// Equivalence classes of all paths out of one vertex, up to a length bound.
/// Members are united by single rewrite steps that stay within the bound.
struct PathClosure {
  Graph graph;
  std::size_t source = 0;
  std::size_t bound = 0;
  bool truncated = false;
  std::vector<Path> paths;                          // shortlex order
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> class_of_path;
  std::vector<std::size_t> rep;                     // class -> index of its shortlex-least path
  std::vector<std::vector<std::size_t>> by_target;  // vertex -> classes, shortlex by rep
  std::vector<bool> stable;                         // vertex -> verdict

  const Path& representative(std::size_t cls) const { return paths[rep[cls]]; }
  std::size_t target(std::size_t cls) const { return graph.end_of(representative(cls)); }

  /// Class of a path from `source`. Longer paths are reduced one arrow at a
  /// time through representatives; PossiblyInfinite if that leaves the bound.
  std::size_t class_of(const Path& p) const {
    if (p.start != source) throw precondition("EndpointMismatch", "path does not start at the closure source");
    if (p.arrows.size() <= bound) {
      auto it = index.find(detail::encode(p.arrows));
      if (it != index.end()) return class_of_path[it->second];
    }
    std::size_t cls = class_of_path[0];
    for (auto a : p.arrows) cls = extend(cls, a);
    return cls;
  }

  /// Class of rep(cls)·a.
  std::size_t extend(std::size_t cls, std::size_t a) const {
    const auto& r = representative(cls);
    if (graph.src(a) != graph.end_of(r)) throw precondition("NotComposable", "arrow does not extend the class");
    if (r.arrows.size() + 1 > bound)
      throw PossiblyInfiniteError(graph.vertices()[graph.tgt(a)],
                                  "paths from " + graph.vertices()[source] + " exceed bound " + std::to_string(bound));
    auto key = detail::encode(r.arrows);
    detail::append_key(key, a);
    return class_of_path[index.at(key)];
  }
};

/// A category presentation. Copies share the underlying data.
class Schema {
 public:
  Schema() : impl_(std::make_shared<Impl>()) {}

  explicit Schema(Graph g, std::vector<Ped> peds = {}) : impl_(std::make_shared<Impl>()) {
    for (std::size_t i = 0; i < peds.size(); ++i) {
      const auto& [l, r] = peds[i];
      if (!g.is_path(l) || !g.is_path(r)) throw precondition("BadPath", "PED " + std::to_string(i + 1) + " is not a path");
      if (l.start != r.start || g.end_of(l) != g.end_of(r))
        throw precondition("EndpointMismatch", "PED " + g.render(l) + " = " + g.render(r) + " has mismatched endpoints");
    }
    impl_->graph = std::move(g);
    impl_->peds = std::move(peds);
  }

  const Graph& graph() const noexcept { return impl_->graph; }
  const std::vector<Ped>& peds() const noexcept { return impl_->peds; }
  const FinSet& vertices() const noexcept { return graph().vertices(); }
  const FinSet& arrows() const noexcept { return graph().arrows(); }
  std::size_t vertex(std::string_view name) const { return graph().vertex(name); }
  std::size_t arrow(std::string_view name) const { return graph().arrow(name); }
  std::string render(const Path& p) const { return graph().render(p); }

  std::string render_ped(std::size_t i) const {
    return render(peds().at(i).lhs) + " = " + render(peds()[i].rhs);
  }

  /// Parse `V.a.b` (or `V.` for the identity).
  Path parse_path(std::string_view text) const {
    auto dot = text.find('.');
    if (dot == std::string_view::npos || dot == 0)
      throw ParseError("BadPath", "path literal '" + std::string(text) + "' must look like V.a.b or V.");
    auto v = graph().vertices().find(text.substr(0, dot));
    if (!v) throw ParseError("UnknownVertex", "unknown vertex in path '" + std::string(text) + "'");
    Path p{*v, {}};
    auto rest = text.substr(dot + 1);
    if (rest.empty()) return p;
    std::size_t pos = 0;
    while (true) {
      auto next = rest.find('.', pos);
      auto name = rest.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
      auto a = graph().arrows().find(name);
      if (name.empty() || !a)
        throw ParseError("UnknownArrowInPath", "unknown arrow '" + std::string(name) + "' in path '" + std::string(text) + "'");
      if (graph().src(*a) != graph().end_of(p))
        throw ParseError("NotComposable", "arrow '" + std::string(name) + "' does not continue path '" + std::string(text) + "'");
      p.arrows.push_back(*a);
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    return p;
  }

  const std::vector<std::size_t>& rule_side(const detail::RuleRef& r, bool from) const {
    const auto& ped = peds()[r.ped];
    return (r.forward == from) ? ped.lhs.arrows : ped.rhs.arrows;
  }

  const detail::RewriteIndex& rewrites() const {
    std::call_once(impl_->index_once, [this] { build_index(); });
    return impl_->index;
  }

  /// Cached closure of paths out of `source` up to `bound`.
  std::shared_ptr<const PathClosure> closure(std::size_t source, std::size_t bound,
                                             std::size_t budget = kDefaultPathBudget) const;

  friend bool operator==(const Schema& a, const Schema& b) {
    return a.impl_ == b.impl_ || (a.graph() == b.graph() && a.peds() == b.peds());
  }

 private:
  struct Impl {
    Graph graph;
    std::vector<Ped> peds;
    std::once_flag index_once;
    detail::RewriteIndex index;
    std::mutex closure_mutex;
    std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const PathClosure>> closures;
  };

  void build_index() const {
    auto& idx = impl_->index;
    idx.inserts.assign(graph().vertices().size(), {});
    std::set<std::size_t> lengths;
    for (std::uint32_t i = 0; i < peds().size(); ++i) {
      const auto& ped = peds()[i];
      if (ped.lhs == ped.rhs) continue;
      for (bool fwd : {true, false}) {
        detail::RuleRef r{i, fwd};
        const auto& from = rule_side(r, true);
        if (from.empty()) {
          idx.inserts[ped.lhs.start].push_back(r);
        } else {
          idx.keyed.emplace_back(detail::encode(from), r);
          lengths.insert(from.size());
        }
      }
    }
    std::sort(idx.keyed.begin(), idx.keyed.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return std::pair(x.second.ped, !x.second.forward) < std::pair(y.second.ped, !y.second.forward);
    });
    idx.lengths.assign(lengths.begin(), lengths.end());
  }

  std::shared_ptr<Impl> impl_;
};

inline Schema free_schema(const Graph& g) { return Schema(g); }

// ---------------------------------------------------------------------------
// Rewriting

namespace detail {

/// Calls f(rule, position, result) for every single rewrite of the path
/// (start, w) whose result has length <= bound.
template <class F>
void for_each_rewrite(const Schema& s, std::size_t start, const std::vector<std::size_t>& w, std::size_t bound, F&& f) {
  const auto& idx = s.rewrites();
  const auto& g = s.graph();
  const std::size_t n = w.size();
  for (std::size_t i = 0; i <= n; ++i) {
    std::size_t at = i == 0 ? start : g.tgt(w[i - 1]);
    for (const auto& r : idx.inserts[at]) {
      const auto& to = s.rule_side(r, false);
      if (n + to.size() > bound) continue;
      std::vector<std::size_t> out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      out.insert(out.end(), to.begin(), to.end());
      out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
      f(r, i, std::move(out));
    }
    std::string key;
    std::size_t len = 0;
    for (auto l : idx.lengths) {
      if (i + l > n) break;
      while (len < l) append_key(key, w[i + len++]);
      auto lo = std::lower_bound(idx.keyed.begin(), idx.keyed.end(), key,
                                 [](const auto& e, const std::string& k) { return e.first < k; });
      for (auto it = lo; it != idx.keyed.end() && it->first == key; ++it) {
        const auto& to = s.rule_side(it->second, false);
        if (n - l + to.size() > bound) continue;
        std::vector<std::size_t> out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
        out.insert(out.end(), to.begin(), to.end());
        out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(i + l), w.end());
        f(it->second, i, std::move(out));
      }
    }
  }
}

}  // namespace detail

/// One rewrite step: the PED used, its direction, where it applied, and the result.
struct RewriteStep {
  std::size_t ped;
  bool forward;
  std::size_t position;
  Path result;
};

/// Apply a single rule at a position, or nullopt if it does not match there.
inline std::optional<Path> apply_rewrite(const Schema& s, const Path& p, std::size_t ped, bool forward,
                                         std::size_t position) {
  if (ped >= s.peds().size() || position > p.arrows.size()) return std::nullopt;
  detail::RuleRef r{static_cast<std::uint32_t>(ped), forward};
  const auto& from = s.rule_side(r, true);
  const auto& to = s.rule_side(r, false);
  if (position + from.size() > p.arrows.size()) return std::nullopt;
  if (from.empty()) {
    std::size_t at = position == 0 ? p.start : s.graph().tgt(p.arrows[position - 1]);
    if (at != s.peds()[ped].lhs.start) return std::nullopt;
  } else if (!std::equal(from.begin(), from.end(), p.arrows.begin() + static_cast<std::ptrdiff_t>(position))) {
    return std::nullopt;
  }
  Path out{p.start, {}};
  out.arrows.assign(p.arrows.begin(), p.arrows.begin() + static_cast<std::ptrdiff_t>(position));
  out.arrows.insert(out.arrows.end(), to.begin(), to.end());
  out.arrows.insert(out.arrows.end(), p.arrows.begin() + static_cast<std::ptrdiff_t>(position + from.size()),
                    p.arrows.end());
  return out;
}

/// True iff each step applies to the previous path and the last result is q.
inline bool replay_trace(const Schema& s, const Path& p, const Path& q, const std::vector<RewriteStep>& trace) {
  Path cur = p;
  for (const auto& step : trace) {
    auto next = apply_rewrite(s, cur, step.ped, step.forward, step.position);
    if (!next || *next != step.result) return false;
    cur = std::move(*next);
  }
  return cur == q;
}

enum class EqVerdict { Equal, NotEqualWithinBound, ExhaustedBudget };

inline const char* to_string(EqVerdict v) {
  switch (v) {
    case EqVerdict::Equal: return "Equal";
    case EqVerdict::NotEqualWithinBound: return "NotEqualWithinBound";
    case EqVerdict::ExhaustedBudget: return "ExhaustedBudget";
  }
  return "?";
}

struct EqResult {
  EqVerdict verdict;
  std::vector<RewriteStep> trace;  // p -> q, present iff Equal
  std::size_t explored = 0;
};

/// Bidirectional breadth-first search over single rewrites, never leaving
/// paths of length <= bound. Equal comes with a replayable trace;
/// NotEqualWithinBound only means no derivation exists inside the bound.
inline EqResult paths_equal(const Schema& s, const Path& p, const Path& q, std::size_t bound = kDefaultBound,
                            std::size_t budget = kDefaultNodeBudget) {
  const auto& g = s.graph();
  if (!g.is_path(p) || !g.is_path(q)) throw precondition("BadPath", "argument is not a path of the schema");
  if (p.start != q.start || g.end_of(p) != g.end_of(q))
    throw precondition("EndpointMismatch", s.render(p) + " and " + s.render(q) + " have different endpoints");
  if (p == q) return {EqVerdict::Equal, {}, 1};
  if (p.arrows.size() > bound || q.arrows.size() > bound) return {EqVerdict::NotEqualWithinBound, {}, 0};

  struct Parent {
    std::string prev;
    detail::RuleRef rule;
    std::size_t position;
  };
  struct Side {
    std::unordered_map<std::string, std::optional<Parent>> seen;
    std::vector<std::vector<std::size_t>> frontier;
  };
  Side sides[2];
  sides[0].seen.emplace(detail::encode(p.arrows), std::nullopt);
  sides[0].frontier.push_back(p.arrows);
  sides[1].seen.emplace(detail::encode(q.arrows), std::nullopt);
  sides[1].frontier.push_back(q.arrows);
  std::size_t explored = 2;

  auto chain = [&](const Side& side, std::string key) {
    // Steps from the side's root to `key`, as (from-key, rule, position, to-key).
    std::vector<std::tuple<std::string, detail::RuleRef, std::size_t, std::string>> steps;
    while (true) {
      const auto& par = side.seen.at(key);
      if (!par) break;
      steps.emplace_back(par->prev, par->rule, par->position, key);
      key = par->prev;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  };
  auto decode = [&](const std::string& key) {
    Path r{p.start, {}};
    for (std::size_t i = 0; i < key.size(); i += 3)
      r.arrows.push_back(static_cast<unsigned char>(key[i]) | (static_cast<std::size_t>(static_cast<unsigned char>(key[i + 1])) << 8) |
                         (static_cast<std::size_t>(static_cast<unsigned char>(key[i + 2])) << 16));
    return r;
  };
  auto build_trace = [&](const std::string& meet) {
    std::vector<RewriteStep> trace;
    for (const auto& [from, rule, pos, to] : chain(sides[0], meet)) trace.push_back({rule.ped, rule.forward, pos, decode(to)});
    auto back = chain(sides[1], meet);
    // Walk the q-side chain backwards, inverting each rule.
    for (auto it = back.rbegin(); it != back.rend(); ++it) {
      const auto& [from, rule, pos, to] = *it;
      trace.push_back({rule.ped, !rule.forward, pos, decode(from)});
    }
    return trace;
  };

  while (!sides[0].frontier.empty() && !sides[1].frontier.empty()) {
    int k = sides[0].frontier.size() <= sides[1].frontier.size() ? 0 : 1;
    Side& me = sides[k];
    const Side& other = sides[1 - k];
    std::vector<std::vector<std::size_t>> next;
    std::optional<std::string> meet;
    bool over_budget = false;
    for (const auto& w : me.frontier) {
      auto wkey = detail::encode(w);
      detail::for_each_rewrite(s, p.start, w, bound, [&](detail::RuleRef r, std::size_t pos, std::vector<std::size_t>&& out) {
        if (meet || over_budget) return;
        auto key = detail::encode(out);
        if (me.seen.count(key)) return;
        me.seen.emplace(key, Parent{wkey, r, pos});
        if (other.seen.count(key)) {
          meet = key;
          return;
        }
        if (++explored > budget) {
          over_budget = true;
          return;
        }
        next.push_back(std::move(out));
      });
      if (meet || over_budget) break;
    }
    if (meet) {
      EqResult res{EqVerdict::Equal, build_trace(*meet), explored};
      if (!replay_trace(s, p, q, res.trace)) throw std::logic_error("rewrite trace failed to replay");
      return res;
    }
    if (over_budget) return {EqVerdict::ExhaustedBudget, {}, explored};
    me.frontier = std::move(next);
  }
  return {EqVerdict::NotEqualWithinBound, {}, explored};
}

// ---------------------------------------------------------------------------
// Hom-sets

inline std::shared_ptr<const PathClosure> Schema::closure(std::size_t source, std::size_t bound,
                                                          std::size_t budget) const {
  {
    std::lock_guard lock(impl_->closure_mutex);
    auto it = impl_->closures.find({source, bound});
    if (it != impl_->closures.end()) return it->second;
  }
  auto c = std::make_shared<PathClosure>();
  c->graph = graph();
  c->source = source;
  c->bound = bound;
  auto ps = paths_from(graph(), source, bound, budget);
  c->paths = std::move(ps.paths);
  c->truncated = ps.truncated;
  for (std::size_t i = 0; i < c->paths.size(); ++i) c->index.emplace(detail::encode(c->paths[i].arrows), i);
  detail::UnionFind uf(c->paths.size());
  for (std::size_t i = 0; i < c->paths.size(); ++i)
    detail::for_each_rewrite(*this, source, c->paths[i].arrows, bound,
                             [&](detail::RuleRef, std::size_t, std::vector<std::size_t>&& out) {
                               uf.unite(i, c->index.at(detail::encode(out)));
                             });
  // Paths are in shortlex order, so each class's least member is its representative.
  auto classes = uf.classes();
  c->class_of_path.resize(c->paths.size());
  c->by_target.assign(graph().vertices().size(), {});
  c->stable.assign(graph().vertices().size(), true);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    c->rep.push_back(classes[k].front());
    for (auto m : classes[k]) c->class_of_path[m] = k;
    const auto& r = c->paths[classes[k].front()];
    auto d = graph().end_of(r);
    c->by_target[d].push_back(k);
    if (c->truncated && r.arrows.size() + 1 >= bound) c->stable[d] = false;
  }
  std::lock_guard lock(impl_->closure_mutex);
  return impl_->closures.emplace(std::pair{source, bound}, std::move(c)).first->second;
}

enum class HomVerdict { Stable, PossiblyInfinite };

inline const char* to_string(HomVerdict v) { return v == HomVerdict::Stable ? "Stable" : "PossiblyInfinite"; }

struct HomSet {
  std::vector<Path> classes;  // shortlex-least representatives
  HomVerdict verdict;
};

/// ≃-classes of paths c -> d of length <= bound. Stable unless a class first
/// appears at one of the top two lengths while longer paths exist.
inline HomSet hom_set(const Schema& s, std::size_t c, std::size_t d, std::size_t bound = kDefaultBound) {
  if (c >= s.vertices().size() || d >= s.vertices().size()) throw precondition("UnknownVertex", "vertex out of range");
  auto cl = s.closure(c, bound);
  HomSet h{{}, cl->stable[d] ? HomVerdict::Stable : HomVerdict::PossiblyInfinite};
  for (auto k : cl->by_target[d]) h.classes.push_back(cl->representative(k));
  return h;
}

inline HomSet hom_set(const Schema& s, std::string_view c, std::string_view d, std::size_t bound = kDefaultBound) {
  return hom_set(s, s.vertex(c), s.vertex(d), bound);
}

/// Closure out of c, throwing PossiblyInfinite unless every hom-set out of c is Stable.
inline std::shared_ptr<const PathClosure> stable_closure(const Schema& s, std::size_t c, std::size_t bound) {
  auto cl = s.closure(c, bound);
  for (std::size_t d = 0; d < s.vertices().size(); ++d)
    if (!cl->stable[d])
      throw PossiblyInfiniteError(s.vertices()[d], "hom(" + s.vertices()[c] + ", " + s.vertices()[d] +
                                                       ") did not stabilise within bound " + std::to_string(bound));
  return cl;
}

// ---------------------------------------------------------------------------
// Schema morphisms

/// Vertices to vertices and arrows to paths of the target.
struct SchemaMorphism {
  Schema source;
  Schema target;
  FinFunction on_vertices;
  std::vector<Path> on_arrows;  // indexed by source arrow

  /// Image of a source path, flattened.
  Path apply(const Path& p) const {
    Path out{on_vertices(p.start), {}};
    for (auto a : p.arrows) {
      const auto& img = on_arrows.at(a);
      out.arrows.insert(out.arrows.end(), img.arrows.begin(), img.arrows.end());
    }
    return out;
  }

  /// Endpoint compatibility of every arrow image.
  Verdict check_structure() const {
    const auto& sg = source.graph();
    const auto& tg = target.graph();
    if (!(on_vertices.dom() == sg.vertices()) || !(on_vertices.cod() == tg.vertices()))
      return Verdict::fail("SchemaMismatch", "vertex map does not go from source to target vertices");
    if (on_arrows.size() != sg.arrows().size()) return Verdict::fail("NotTotal", "arrow map is not total");
    for (std::size_t a = 0; a < on_arrows.size(); ++a) {
      const auto& img = on_arrows[a];
      if (!tg.is_path(img)) return Verdict::fail("BadPath", "image of '" + sg.arrows()[a] + "' is not a path");
      if (img.start != on_vertices(sg.src(a)) || tg.end_of(img) != on_vertices(sg.tgt(a)))
        return Verdict::fail("EndpointMismatch", "image " + tg.render(img) + " of '" + sg.arrows()[a] +
                                                     "' does not connect the images of its endpoints");
    }
    return Verdict::pass();
  }

  static SchemaMorphism from_names(const Schema& source, const Schema& target,
                                   const std::map<std::string, std::string>& vertices,
                                   const std::map<std::string, std::string>& arrows) {
    std::vector<std::pair<std::string, std::string>> vp(vertices.begin(), vertices.end());
    SchemaMorphism f{source, target, FinFunction::from_pairs(source.vertices(), target.vertices(), vp), {}};
    for (const auto& a : source.arrows()) {
      auto it = arrows.find(a);
      if (it == arrows.end()) throw precondition("NotTotal", "no image for arrow '" + a + "'");
      f.on_arrows.push_back(target.parse_path(it->second));
    }
    for (const auto& [a, _] : arrows) source.arrow(a);
    require(f.check_structure());
    return f;
  }
};

inline SchemaMorphism identity_morphism(const Schema& s) {
  SchemaMorphism f{s, s, FinFunction::identity(s.vertices()), {}};
  for (std::size_t a = 0; a < s.arrows().size(); ++a) f.on_arrows.push_back(Path{s.graph().src(a), {a}});
  return f;
}

/// Structure plus PED preservation: every source PED maps to an Equal pair.
inline Verdict check_schema_morphism(const SchemaMorphism& f, std::size_t bound = kDefaultBound) {
  if (auto v = f.check_structure(); !v) return v;
  for (std::size_t i = 0; i < f.source.peds().size(); ++i) {
    const auto& ped = f.source.peds()[i];
    auto r = paths_equal(f.target, f.apply(ped.lhs), f.apply(ped.rhs), bound);
    if (r.verdict == EqVerdict::ExhaustedBudget)
      throw BudgetError("while checking PED " + f.source.render_ped(i));
    if (r.verdict != EqVerdict::Equal)
      return Verdict::fail("PEDNotPreserved", "PED " + std::to_string(i + 1) + " (" + f.source.render_ped(i) + ") maps to " +
                                                  f.target.render(f.apply(ped.lhs)) + " vs " +
                                                  f.target.render(f.apply(ped.rhs)));
  }
  return Verdict::pass();
}

/// g ∘ f by substituting g's images into f's and flattening.
inline SchemaMorphism compose_schema_morphisms(const SchemaMorphism& f, const SchemaMorphism& g) {
  if (!(f.target == g.source)) throw precondition("SchemaMismatch", "target of the first morphism is not the source of the second");
  SchemaMorphism h{f.source, g.target, compose(g.on_vertices, f.on_vertices), {}};
  for (const auto& img : f.on_arrows) h.on_arrows.push_back(g.apply(img));
  return h;
}

/// Equality modulo path equivalence in the target.
inline bool morphisms_equal(const SchemaMorphism& f, const SchemaMorphism& g, std::size_t bound = kDefaultBound) {
  if (!(f.source == g.source) || !(f.target == g.target)) return false;
  if (f.on_vertices.table() != g.on_vertices.table()) return false;
  for (std::size_t a = 0; a < f.on_arrows.size(); ++a) {
    auto r = paths_equal(f.target, f.on_arrows[a], g.on_arrows[a], bound);
    if (r.verdict == EqVerdict::ExhaustedBudget) throw BudgetError("while comparing schema morphisms");
    if (r.verdict != EqVerdict::Equal) return false;
  }
  return true;
}

/// All valid morphisms up to ≃: vertex maps, then one representative per
/// hom-class for each arrow. Requires the needed hom-sets to be Stable.
inline std::vector<SchemaMorphism> enumerate_schema_morphisms(const Schema& source, const Schema& target,
                                                              std::size_t bound = kDefaultBound) {
  const auto& sg = source.graph();
  const std::size_t nv = sg.vertices().size();
  const std::size_t tv = target.vertices().size();
  std::vector<SchemaMorphism> out;
  std::vector<std::size_t> vmap(nv, 0);
  std::function<void(std::size_t)> go_vertices = [&](std::size_t v) {
    if (v < nv) {
      for (std::size_t w = 0; w < tv; ++w) {
        vmap[v] = w;
        go_vertices(v + 1);
      }
      return;
    }
    std::vector<std::vector<Path>> cands;
    for (std::size_t a = 0; a < sg.arrows().size(); ++a) {
      auto h = hom_set(target, vmap[sg.src(a)], vmap[sg.tgt(a)], bound);
      if (h.verdict != HomVerdict::Stable)
        throw PossiblyInfiniteError(target.vertices()[vmap[sg.tgt(a)]], "hom-set needed for enumeration is not Stable");
      if (h.classes.empty()) return;
      cands.push_back(std::move(h.classes));
    }
    std::vector<std::size_t> pick(cands.size(), 0);
    while (true) {
      SchemaMorphism f{source, target, FinFunction(source.vertices(), target.vertices(), vmap), {}};
      for (std::size_t a = 0; a < cands.size(); ++a) f.on_arrows.push_back(cands[a][pick[a]]);
      if (check_schema_morphism(f, bound)) out.push_back(std::move(f));
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == cands[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  };
  go_vertices(0);
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

enum class ConeSide { Left, Right };

inline constexpr const char* kLeftConePoint = "-inf";
inline constexpr const char* kRightConePoint = "+inf";

/// Left cone: new vertex "-inf" with s_b: -inf -> b and [s_b'] ≃ [s_b, f].
/// Right cone: new vertex "+inf" with t_b: b -> +inf and [f, t_b'] ≃ [t_b].
inline Schema cone(const Schema& s, ConeSide side) {
  const auto& g = s.graph();
  const bool left = side == ConeSide::Left;
  const std::string point = left ? kLeftConePoint : kRightConePoint;
  if (g.vertices().contains(point)) throw precondition("NameClash", "schema already has a vertex '" + point + "'");
  std::vector<std::string> vs = g.vertices().elements();
  vs.push_back(point);
  const std::size_t p = vs.size() - 1;
  std::vector<ArrowDecl> as;
  for (std::size_t a = 0; a < g.arrows().size(); ++a)
    as.push_back({g.arrows()[a], g.vertices()[g.src(a)], g.vertices()[g.tgt(a)]});
  const std::size_t base = as.size();
  for (std::size_t b = 0; b < g.vertices().size(); ++b) {
    std::string name = (left ? "s_" : "t_") + g.vertices()[b];
    if (left) as.push_back({name, point, g.vertices()[b]});
    else as.push_back({name, g.vertices()[b], point});
  }
  Graph h(vs, as);
  if (h.arrows().size() != base + g.vertices().size()) throw precondition("NameClash", "cone arrow names collide");
  std::vector<Ped> peds = s.peds();
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    auto b = g.src(a), b2 = g.tgt(a);
    if (left) peds.push_back({Path{p, {base + b2}}, Path{p, {base + b, a}}});
    else peds.push_back({Path{b, {a, base + b2}}, Path{b, {base + b}}});
  }
  return Schema(std::move(h), std::move(peds));
}

inline Path reverse_path(const Graph& g, const Path& p) {
  Path r{g.end_of(p), p.arrows};
  std::reverse(r.arrows.begin(), r.arrows.end());
  return r;
}

/// Same vertices and arrow names, every arrow and PED path reversed.
inline Schema opposite_schema(const Schema& s) {
  const auto& g = s.graph();
  Graph h(g.vertices(), g.arrows(), g.tgt_table(), g.src_table());
  std::vector<Ped> peds;
  for (const auto& ped : s.peds()) peds.push_back({reverse_path(g, ped.lhs), reverse_path(g, ped.rhs)});
  return Schema(std::move(h), std::move(peds));
}

/// n̲ as a schema with vertices 1..n and no arrows.
inline Schema discrete_schema(std::size_t n) { return Schema(Graph(FinSet::range(n), FinSet{}, {}, {})); }

}  // namespace catdb
