#pragma once

// Monads on finite sets, Kleisli composition, Kleisli instances and Markov
// chains. A monad is a type modelling FiniteMonad:
//   template <class E> using T = ...;        the carrier T(E)
//   unit(x), fmap(f, t), mult(tt)            the monad structure
//   values(xs)                               a finite sample of T(xs)
//   valid(t, n), parse(cell, set), render(t, set)
// Values range over element indices (std::size_t) or nested carriers.

#include <algorithm>
#include <concepts>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "catdb/error.hpp"
#include "catdb/finset.hpp"
#include "catdb/instance.hpp"
#include "catdb/schema.hpp"

namespace catdb {

using Rational = boost::multiprecision::cpp_rational;

inline std::string render_rational(const Rational& r) {
  auto n = boost::multiprecision::numerator(r);
  auto d = boost::multiprecision::denominator(r);
  return d == 1 ? n.str() : n.str() + "/" + d.str();
}

/// Terminating fractions as decimals ("0.25"), others as "n/d".
inline std::string render_decimal(const Rational& r) {
  using Int = boost::multiprecision::cpp_int;
  Int n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
  Int rest = d;
  std::size_t twos = 0, fives = 0;
  while (rest % 2 == 0) rest /= 2, ++twos;
  while (rest % 5 == 0) rest /= 5, ++fives;
  if (rest != 1) return render_rational(r);
  std::size_t places = std::max(twos, fives);
  Int scale = 1;
  for (std::size_t k = 0; k < places; ++k) scale *= 10;
  Int scaled = n * (scale / d);
  if (places == 0) return scaled.str();
  std::string digits = (scaled < 0 ? Int(-scaled) : scaled).str();
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  std::string out = (scaled < 0 ? "-" : "") + digits.substr(0, digits.size() - places) + "." + digits.substr(digits.size() - places);
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

/// Accepts "3", "1/2", "0.5" and ".5"; decimals are exact and leading zeros
/// never switch the base.
inline Rational parse_rational(std::string_view s) {
  using Int = boost::multiprecision::cpp_int;
  auto bad = [&] { return ParseError("BadNumber", "'" + std::string(s) + "' is not a non-negative rational"); };
  auto number = [&](std::string_view t) {
    if (t.empty()) throw bad();
    Int n = 0;
    for (char c : t) {
      if (c < '0' || c > '9') throw bad();
      n = n * 10 + (c - '0');
    }
    return n;
  };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Int den = number(s.substr(slash + 1));
    if (den == 0) throw bad();
    return Rational(number(s.substr(0, slash)), den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot), frac = s.substr(dot + 1);
    Int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    return Rational((whole.empty() ? Int(0) : number(whole)) * scale + number(frac), scale);
  }
  return Rational(number(s));
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline std::size_t element(const FinSet& set, std::string_view name, std::string_view cell) {
  if (auto i = set.find(name)) return *i;
  throw ParseError("BadCell", "cell '" + std::string(cell) + "' names unknown element '" + std::string(name) + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exceptions (Maybe is the case with one exception named ☺)

struct Exc {
  std::size_t index;
  friend auto operator<=>(const Exc&, const Exc&) = default;
  friend bool operator==(const Exc&, const Exc&) = default;
};

struct ExceptionsMonad {
  std::vector<std::string> exceptions;

  static constexpr const char* kNone = "☺";

  static ExceptionsMonad maybe() { return ExceptionsMonad{{kNone}}; }

  bool is_maybe() const { return exceptions.size() == 1 && exceptions[0] == kNone; }
  std::string name() const { return is_maybe() ? "maybe" : "exceptions"; }

  template <class E>
  using T = std::variant<Exc, E>;

  template <class E>
  T<E> unit(const E& x) const { return T<E>(std::in_place_index<1>, x); }

  template <class A, class F>
  auto fmap(F&& f, const T<A>& t) const -> T<std::decay_t<decltype(f(std::declval<const A&>()))>> {
    using B = std::decay_t<decltype(f(std::declval<const A&>()))>;
    if (t.index() == 0) return T<B>(std::in_place_index<0>, std::get<0>(t));
    return T<B>(std::in_place_index<1>, f(std::get<1>(t)));
  }

  template <class E>
  T<E> mult(const T<T<E>>& tt) const {
    if (tt.index() == 0) return T<E>(std::in_place_index<0>, std::get<0>(tt));
    return std::get<1>(tt);
  }

  template <class E>
  std::vector<T<E>> values(const std::vector<E>& xs) const {
    std::vector<T<E>> out;
    for (std::size_t e = 0; e < exceptions.size(); ++e) out.emplace_back(std::in_place_index<0>, Exc{e});
    for (const auto& x : xs) out.push_back(unit(x));
    return out;
  }

  bool valid(const T<std::size_t>& t, std::size_t n) const {
    return t.index() == 0 ? std::get<0>(t).index < exceptions.size() : std::get<1>(t) < n;
  }

  /// `:none:`, `☺` or an empty cell (Maybe only), `:exc:<name>`, or an element.
  T<std::size_t> parse(std::string_view cell, const FinSet& target) const {
    if (is_maybe() && (cell.empty() || cell == ":none:" || cell == kNone)) return T<std::size_t>(std::in_place_index<0>, Exc{0});
    if (cell.substr(0, 5) == ":exc:") {
      auto name = cell.substr(5);
      for (std::size_t e = 0; e < exceptions.size(); ++e)
        if (exceptions[e] == name) return T<std::size_t>(std::in_place_index<0>, Exc{e});
      throw ParseError("BadCell", "unknown exception in '" + std::string(cell) + "'");
    }
    return unit(detail::element(target, cell, cell));
  }

  std::string render(const T<std::size_t>& t, const FinSet& target) const {
    if (t.index() == 1) return target[std::get<1>(t)];
    if (is_maybe()) return ":none:";
    return ":exc:" + exceptions[std::get<0>(t).index];
  }
};

// ---------------------------------------------------------------------------
// List, bounded

struct ListMonad {
  std::size_t bound = 8;

  std::string name() const { return "list"; }

  template <class E>
  using T = std::vector<E>;

  template <class E>
  T<E> unit(const E& x) const { return T<E>{x}; }

  template <class A, class F>
  auto fmap(F&& f, const T<A>& t) const -> T<std::decay_t<decltype(f(std::declval<const A&>()))>> {
    T<std::decay_t<decltype(f(std::declval<const A&>()))>> out;
    out.reserve(t.size());
    for (const auto& x : t) out.push_back(f(x));
    return out;
  }

  template <class E>
  T<E> mult(const T<T<E>>& tt) const {
    T<E> out;
    for (const auto& t : tt) {
      if (out.size() + t.size() > bound)
        throw Error(ErrorKind::Budget, "ListBoundExceeded", "flattened list is longer than " + std::to_string(bound));
      out.insert(out.end(), t.begin(), t.end());
    }
    return out;
  }

  /// Lists of length <= 2 over xs.
  template <class E>
  std::vector<T<E>> values(const std::vector<E>& xs) const {
    std::vector<T<E>> out;
    out.push_back(T<E>{});
    for (const auto& x : xs) out.push_back(T<E>{x});
    for (const auto& x : xs)
      for (const auto& y : xs) out.push_back({x, y});
    return out;
  }

  bool valid(const T<std::size_t>& t, std::size_t n) const {
    return t.size() <= bound && std::all_of(t.begin(), t.end(), [&](std::size_t x) { return x < n; });
  }

  /// `[a;b;c]`; an empty cell is [].
  T<std::size_t> parse(std::string_view cell, const FinSet& target) const {
    if (cell.empty()) return {};
    if (cell.size() < 2 || cell.front() != '[' || cell.back() != ']')
      throw ParseError("BadCell", "list cell '" + std::string(cell) + "' must look like [a;b]");
    auto body = cell.substr(1, cell.size() - 2);
    T<std::size_t> out;
    if (body.empty()) return out;
    for (auto part : detail::split(body, ';')) out.push_back(detail::element(target, part, cell));
    if (out.size() > bound) throw ParseError("BadCell", "list cell '" + std::string(cell) + "' exceeds the list bound");
    return out;
  }

  std::string render(const T<std::size_t>& t, const FinSet& target) const {
    std::vector<std::string> parts;
    for (auto x : t) parts.push_back(target[x]);
    return "[" + detail::join(parts, ";") + "]";
  }
};

// ---------------------------------------------------------------------------
// Powerset

struct PowersetMonad {
  std::string name() const { return "powerset"; }

  template <class E>
  using T = std::set<E>;

  template <class E>
  T<E> unit(const E& x) const { return T<E>{x}; }

  template <class A, class F>
  auto fmap(F&& f, const T<A>& t) const -> T<std::decay_t<decltype(f(std::declval<const A&>()))>> {
    T<std::decay_t<decltype(f(std::declval<const A&>()))>> out;
    for (const auto& x : t) out.insert(f(x));
    return out;
  }

  template <class E>
  T<E> mult(const T<T<E>>& tt) const {
    T<E> out;
    for (const auto& t : tt) out.insert(t.begin(), t.end());
    return out;
  }

  /// Every subset of xs; refuses more than 16 elements.
  template <class E>
  std::vector<T<E>> values(const std::vector<E>& xs) const {
    if (xs.size() > 16) throw BudgetError("powerset of more than 16 elements");
    std::vector<T<E>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << xs.size()); ++mask) {
      T<E> s;
      for (std::size_t k = 0; k < xs.size(); ++k)
        if (mask >> k & 1) s.insert(xs[k]);
      out.push_back(std::move(s));
    }
    return out;
  }

  bool valid(const T<std::size_t>& t, std::size_t n) const {
    return std::all_of(t.begin(), t.end(), [&](std::size_t x) { return x < n; });
  }

  /// `{a;b}`; an empty cell is {}.
  T<std::size_t> parse(std::string_view cell, const FinSet& target) const {
    if (cell.empty()) return {};
    if (cell.size() < 2 || cell.front() != '{' || cell.back() != '}')
      throw ParseError("BadCell", "powerset cell '" + std::string(cell) + "' must look like {a;b}");
    auto body = cell.substr(1, cell.size() - 2);
    T<std::size_t> out;
    if (body.empty()) return out;
    for (auto part : detail::split(body, ';'))
      if (!out.insert(detail::element(target, part, cell)).second)
        throw ParseError("BadCell", "repeated element in '" + std::string(cell) + "'");
    return out;
  }

  std::string render(const T<std::size_t>& t, const FinSet& target) const {
    std::vector<std::string> parts;
    for (auto x : t) parts.push_back(target[x]);
    return "{" + detail::join(parts, ";") + "}";
  }
};

// ---------------------------------------------------------------------------
// Finitary distributions with exact weights

struct DistMonad {
  std::string name() const { return "dist"; }

  /// Support -> positive weight; weights sum to 1.
  template <class E>
  using T = std::map<E, Rational>;

  template <class E>
  T<E> unit(const E& x) const { return T<E>{{x, Rational(1)}}; }

  template <class A, class F>
  auto fmap(F&& f, const T<A>& t) const -> T<std::decay_t<decltype(f(std::declval<const A&>()))>> {
    T<std::decay_t<decltype(f(std::declval<const A&>()))>> out;
    for (const auto& [x, w] : t) out[f(x)] += w;
    return out;
  }

  /// μ(W)(x) = Σ_p W(p)·p(x)
  template <class E>
  T<E> mult(const T<T<E>>& tt) const {
    T<E> out;
    for (const auto& [p, w] : tt)
      for (const auto& [x, v] : p) out[x] += w * v;
    return out;
  }

  /// Point masses and uniform distributions on two distinct elements.
  template <class E>
  std::vector<T<E>> values(const std::vector<E>& xs) const {
    std::vector<T<E>> out;
    for (const auto& x : xs) out.push_back(unit(x));
    for (std::size_t a = 0; a < xs.size(); ++a)
      for (std::size_t b = a + 1; b < xs.size(); ++b) out.push_back(T<E>{{xs[a], Rational(1, 2)}, {xs[b], Rational(1, 2)}});
    return out;
  }

  bool valid(const T<std::size_t>& t, std::size_t n) const {
    Rational sum = 0;
    for (const auto& [x, w] : t) {
      if (x >= n || w <= 0) return false;
      sum += w;
    }
    return sum == 1;
  }

  /// `p1*e1|p2*e2`; weights must be positive and sum to exactly 1.
  T<std::size_t> parse(std::string_view cell, const FinSet& target) const {
    if (cell.empty()) throw ParseError("BadCell", "empty distribution cell");
    T<std::size_t> out;
    Rational sum = 0;
    for (auto term : detail::split(cell, '|')) {
      auto star = term.find('*');
      if (star == std::string_view::npos) throw ParseError("BadCell", "term '" + std::string(term) + "' must look like p*e");
      auto w = parse_rational(term.substr(0, star));
      auto x = detail::element(target, term.substr(star + 1), cell);
      if (w <= 0) throw ParseError("BadCell", "non-positive weight in '" + std::string(cell) + "'");
      if (out.count(x)) throw ParseError("BadCell", "repeated element in '" + std::string(cell) + "'");
      out[x] = w;
      sum += w;
    }
    if (sum != 1)
      throw ParseError("BadCell", "weights in '" + std::string(cell) + "' sum to " + render_rational(sum) + ", not 1");
    return out;
  }

  std::string render(const T<std::size_t>& t, const FinSet& target) const {
    std::vector<std::string> parts;
    for (const auto& [x, w] : t) parts.push_back(render_rational(w) + "*" + target[x]);
    return detail::join(parts, "|");
  }
};

// ---------------------------------------------------------------------------
// Kleisli arrows

template <class M>
concept FiniteMonad = requires(const M& m, std::size_t x, const typename M::template T<std::size_t>& t,
                               const typename M::template T<typename M::template T<std::size_t>>& tt,
                               const std::vector<std::size_t>& xs, const FinSet& set) {
  { m.name() } -> std::convertible_to<std::string>;
  { m.unit(x) } -> std::same_as<typename M::template T<std::size_t>>;
  { m.mult(tt) } -> std::same_as<typename M::template T<std::size_t>>;
  { m.values(xs) } -> std::same_as<std::vector<typename M::template T<std::size_t>>>;
  { m.valid(t, x) } -> std::convertible_to<bool>;
  { m.parse(std::string_view{}, set) } -> std::same_as<typename M::template T<std::size_t>>;
  { m.render(t, set) } -> std::convertible_to<std::string>;
};

static_assert(FiniteMonad<ExceptionsMonad> && FiniteMonad<ListMonad> && FiniteMonad<PowersetMonad> && FiniteMonad<DistMonad>);

/// A Kleisli arrow X -> T(Y) between index sets {0..n-1}.
template <class M>
using KleisliArrow = std::vector<typename M::template T<std::size_t>>;

/// Ordinary function lifted through the unit.
template <class M>
KleisliArrow<M> kleisli_lift(const M& m, const std::vector<std::size_t>& f) {
  KleisliArrow<M> out;
  for (auto y : f) out.push_back(m.unit(y));
  return out;
}

template <class M>
KleisliArrow<M> kleisli_identity(const M& m, std::size_t n) {
  KleisliArrow<M> out;
  for (std::size_t x = 0; x < n; ++x) out.push_back(m.unit(x));
  return out;
}

/// μ ∘ T(g) ∘ f. Every value of f must index into g.
template <class M>
KleisliArrow<M> kleisli_compose(const M& m, const KleisliArrow<M>& f, const KleisliArrow<M>& g) {
  KleisliArrow<M> out;
  out.reserve(f.size());
  for (const auto& t : f) {
    auto lifted = m.template fmap<std::size_t>(
        [&](std::size_t y) {
          if (y >= g.size()) throw precondition("TypeMismatch", "Kleisli arrows do not compose");
          return g[y];
        },
        t);
    out.push_back(m.mult(lifted));
  }
  return out;
}

/// Every Kleisli arrow from an n-element set into the sampled T(k-element set).
template <class M>
std::vector<KleisliArrow<M>> kleisli_arrows(const M& m, std::size_t n, std::size_t k) {
  std::vector<std::size_t> ys(k);
  std::iota(ys.begin(), ys.end(), std::size_t{0});
  auto vals = m.values(ys);
  std::vector<KleisliArrow<M>> out;
  std::vector<std::size_t> pick(n, 0);
  if (vals.empty() && n > 0) return out;
  while (true) {
    KleisliArrow<M> f;
    for (auto p : pick) f.push_back(vals[p]);
    out.push_back(std::move(f));
    std::size_t i = 0;
    while (i < n && ++pick[i] == vals.size()) pick[i++] = 0;
    if (i == n) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Law checks

/// Unit laws, associativity, and naturality of η and μ on {0..n-1} for every
/// n in sizes, using the monad's value samples. Reports the first failure.
template <class M>
Verdict monad_laws_check(const M& m, const std::vector<std::size_t>& sizes) {
  for (auto n : sizes) {
    std::vector<std::size_t> xs(n);
    std::iota(xs.begin(), xs.end(), std::size_t{0});
    auto t1 = m.values(xs);
    auto t2 = m.values(t1);
    auto t3 = m.values(t2);
    const auto where = " on a set of size " + std::to_string(n);
    for (const auto& t : t1) {
      if (!(m.mult(m.unit(t)) == t)) return Verdict::fail("LawViolation", "μ∘η ≠ id" + where);
      auto ft = m.template fmap<std::size_t>([&](std::size_t x) { return m.unit(x); }, t);
      if (!(m.mult(ft) == t)) return Verdict::fail("LawViolation", "μ∘T(η) ≠ id" + where);
    }
    for (const auto& t : t3) {
      using TT = typename M::template T<typename M::template T<std::size_t>>;
      auto a = m.mult(m.mult(t));
      auto b = m.mult(m.template fmap<TT>([&](const TT& x) { return m.mult(x); }, t));
      if (!(a == b)) return Verdict::fail("LawViolation", "μ∘μ ≠ μ∘T(μ)" + where);
    }
    // Naturality against every function f: X -> X.
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= n;
    for (std::size_t code = 0; code < count; ++code) {
      auto f = detail::decode_function(code, n, n);
      auto fx = [&](std::size_t x) { return f[x]; };
      for (auto x : xs)
        if (!(m.template fmap<std::size_t>(fx, m.unit(x)) == m.unit(f[x])))
          return Verdict::fail("LawViolation", "η is not natural" + where);
      for (const auto& tt : t2) {
        using T1 = typename M::template T<std::size_t>;
        auto lhs = m.template fmap<std::size_t>(fx, m.mult(tt));
        auto rhs = m.mult(m.template fmap<T1>([&](const T1& t) { return m.template fmap<std::size_t>(fx, t); }, tt));
        if (!(lhs == rhs)) return Verdict::fail("LawViolation", "μ is not natural" + where);
      }
    }
  }
  return Verdict::pass();
}

/// Associativity and two-sided identity of Kleisli composition over all
/// sampled arrows between sets of size n.
template <class M>
Verdict kleisli_laws_check(const M& m, std::size_t n) {
  auto arrows = kleisli_arrows(m, n, n);
  auto id = kleisli_identity(m, n);
  for (const auto& f : arrows) {
    if (!(kleisli_compose(m, id, f) == f) || !(kleisli_compose(m, f, id) == f))
      return Verdict::fail("LawViolation", "Kleisli identity fails on a set of size " + std::to_string(n));
  }
  for (const auto& f : arrows)
    for (const auto& g : arrows) {
      auto fg = kleisli_compose(m, f, g);
      for (const auto& h : arrows)
        if (!(kleisli_compose(m, fg, h) == kleisli_compose(m, f, kleisli_compose(m, g, h))))
          return Verdict::fail("LawViolation", "Kleisli composition is not associative on a set of size " + std::to_string(n));
    }
  return Verdict::pass();
}

// ---------------------------------------------------------------------------
// Kleisli instances

/// Rows per vertex and, per arrow, a Kleisli arrow pk(src) -> T(pk(tgt)).
template <class M>
struct KleisliInstance {
  Schema schema;
  M monad;
  std::vector<FinSet> pk;
  std::vector<KleisliArrow<M>> fk;

  /// Kleisli composite along a path; the unit on a trivial path.
  KleisliArrow<M> eval(const Path& p) const {
    auto f = kleisli_identity(monad, pk.at(p.start).size());
    for (auto a : p.arrows) f = kleisli_compose(monad, f, fk.at(a));
    return f;
  }
};

/// Cells are legal values and every PED holds rowwise under Kleisli composition.
template <class M>
Verdict validate_kleisli_instance(const KleisliInstance<M>& k) {
  const auto& g = k.schema.graph();
  if (k.pk.size() != g.vertices().size() || k.fk.size() != g.arrows().size())
    return Verdict::fail("BadCell", "tables do not match the schema");
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    if (k.fk[a].size() != k.pk[g.src(a)].size())
      return Verdict::fail("BadCell", "column '" + g.arrows()[a] + "' is not total");
    for (std::size_t x = 0; x < k.fk[a].size(); ++x)
      if (!k.monad.valid(k.fk[a][x], k.pk[g.tgt(a)].size()))
        return Verdict::fail("BadCell", "row '" + k.pk[g.src(a)][x] + "' column '" + g.arrows()[a] + "'");
  }
  for (std::size_t i = 0; i < k.schema.peds().size(); ++i) {
    const auto& ped = k.schema.peds()[i];
    auto l = k.eval(ped.lhs);
    auto r = k.eval(ped.rhs);
    const auto& tgt = k.pk[g.end_of(ped.lhs)];
    for (std::size_t x = 0; x < l.size(); ++x)
      if (!(l[x] == r[x]))
        return Verdict::fail("PEDViolation", "PED " + std::to_string(i + 1) + " (" + k.schema.render_ped(i) + ") fails at row '" +
                                                 k.pk[ped.lhs.start][x] + "': " + k.monad.render(l[x], tgt) + " vs " +
                                                 k.monad.render(r[x], tgt));
  }
  return Verdict::pass();
}

/// The n-step transition table of a one-vertex, one-arrow Dist instance.
inline KleisliArrow<DistMonad> markov_power(const KleisliInstance<DistMonad>& k, std::size_t n) {
  const auto& g = k.schema.graph();
  if (g.vertices().size() != 1 || g.arrows().size() != 1)
    throw precondition("NotAMarkovChain", "markov_power needs a schema with one vertex and one arrow");
  const auto& m = k.monad;
  auto result = kleisli_identity(m, k.pk[0].size());
  auto base = k.fk[0];
  while (n > 0) {
    if (n & 1) result = kleisli_compose(m, result, base);
    n >>= 1;
    if (n > 0) base = kleisli_compose(m, base, base);
  }
  return result;
}

/// Row-stochastic matrix of a Dist Kleisli self-map, as a table with header
/// `id,<states>` and decimal cells.
inline Table markov_matrix(const FinSet& states, const KleisliArrow<DistMonad>& f) {
  Table t{{"id"}, {}};
  for (const auto& x : states) t.header.push_back(x);
  for (std::size_t x = 0; x < f.size(); ++x) {
    std::vector<std::string> row{states[x]};
    for (std::size_t y = 0; y < states.size(); ++y) {
      auto it = f[x].find(y);
      row.push_back(it == f[x].end() ? "0" : render_decimal(it->second));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace catdb
