#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "support.hpp"

using namespace catdb;
using namespace catdb::testing;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Oracle for composition on raw tables.
std::vector<std::size_t> after(const std::vector<std::size_t>& g, const std::vector<std::size_t>& f) {
  std::vector<std::size_t> out;
  for (auto x : f) out.push_back(g[x]);
  return out;
}

}  // namespace

TEST(FinSet, RejectsDuplicatesAndEmptyNames) {
  EXPECT_THROW(FinSet({"a", "a"}), Error);
  EXPECT_THROW(FinSet({""}), Error);
  auto n = FinSet::range(3);
  EXPECT_EQ(n.elements(), (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(n.index_of("2"), 1u);
}

TEST(FinFunction, CompositionAndErrors) {
  FinSet x{"a", "b"}, y{"1", "2", "3"}, z{"p"};
  auto f = FinFunction::from_pairs(x, y, {{"a", "3"}, {"b", "1"}});
  auto g = FinFunction::from_images(y, z, {"p", "p", "p"});
  EXPECT_EQ(compose(g, f).apply("a"), "p");
  EXPECT_THROW(compose(f, g), Error);
  EXPECT_THROW(FinFunction::from_pairs(x, y, {{"a", "1"}}), Error);
  EXPECT_TRUE(f.injective());
  EXPECT_FALSE(f.surjective());
  EXPECT_EQ(image(f), (Subset{"1", "3"}));
  EXPECT_EQ(preimage(f, {"1", "2"}), (Subset{"b"}));
}

TEST(Limits, EmptyDiagramIsTerminal) {
  auto t = terminal();
  ASSERT_EQ(t.apex.size(), 1u);
  EXPECT_EQ(t.apex[0], "()");
}

TEST(Limits, ProductOfFourAndThree) {
  auto p = product(FinSet{"a", "b", "c", "d"}, FinSet::range(3));
  EXPECT_EQ(p.apex.size(), 12u);
  EXPECT_EQ(p.apex[0], "(a,1)");
  EXPECT_EQ(p.apex[11], "(d,3)");
}

TEST(Limits, CospanWithSingletonIsFiber) {
  for (int round = 0; round < 50; ++round) {
    auto x = named_set("x", random_size(0, 4));
    auto z = named_set("z", random_size(1, 3));
    auto f = random_function(x, z);
    auto zi = random_size(0, z.size() - 1);
    FinSet one{"*"};
    auto g = FinFunction(one, z, {zi});
    auto pb = pullback(f, g);
    std::vector<std::string> fiber;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (f(i) == zi) fiber.push_back(x[i]);
    std::vector<std::string> got;
    for (std::size_t k = 0; k < pb.apex.size(); ++k) got.push_back(x[pb.legs[0](k)]);
    EXPECT_EQ(got, fiber);
  }
}

TEST(Limits, DelimiterIsConfigurable) {
  FinDiagram d;
  d.add_vertex("X", FinSet{"a"});
  d.add_vertex("Y", FinSet{"b"});
  EXPECT_EQ(limit_of_diagram(d, LimitOptions{"+", {}}).apex[0], "(a+b)");
}

TEST(Colimits, CoproductKeepsBothCopies) {
  FinSet x{"1", "2", "3", "4"};
  auto c = coproduct(x, x);
  EXPECT_EQ(c.apex.size(), 8u);
  EXPECT_TRUE(c.apex.contains("inl:1"));
  EXPECT_TRUE(c.apex.contains("inr:1"));
}

TEST(Colimits, PushoutOverEmptyIsCoproduct) {
  FinSet w, x{"a", "b"}, y{"c"};
  auto p = pushout(FinFunction(w, x, {}), FinFunction(w, y, {}));
  EXPECT_EQ(p.apex.elements(), (std::vector<std::string>{"inl:a", "inl:b", "inr:c"}));
}

TEST(Colimits, CoequalizerChainCollapses) {
  auto one_two = FinSet::range(2), y = FinSet::range(3);
  auto f = FinFunction::from_images(one_two, y, {"1", "2"});
  auto g = FinFunction::from_images(one_two, y, {"2", "3"});
  auto q = coequalizer(f, g);
  EXPECT_EQ(q.apex.size(), 1u);
  EXPECT_EQ(q.apex[0], "1");
}

TEST(Colimits, EmptyDiagramIsEmpty) { EXPECT_TRUE(colimit_of_diagram(FinDiagram{}).apex.empty()); }

TEST(Relations, GenerateEquivalence) {
  auto n3 = FinSet::range(3);
  auto diag = generate_equivalence(BinRelation{n3, {}});
  EXPECT_EQ(diag.pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(diag.pairs.count({i, i}));

  FinSet six{"0", "1", "2", "3", "4", "5"};
  BinRelation chain{six, {}};
  for (std::size_t n = 0; n <= 4; ++n) chain.pairs.emplace(n, n + 1);
  EXPECT_EQ(equivalence_classes(chain).size(), 1u);
  EXPECT_EQ(generate_equivalence(chain).pairs.size(), 36u);

  auto blocks = BinRelation::from_names(six, {{"0", "3"}, {"3", "5"}, {"1", "4"}});
  EXPECT_EQ(equivalence_classes(blocks),
            (std::vector<std::vector<std::string>>{{"0", "3", "5"}, {"1", "4"}, {"2"}}));
}

TEST(Relations, GeneratedRelationIsEquivalence) {
  for (int round = 0; round < 100; ++round) {
    auto x = named_set("e", random_size(1, 5));
    BinRelation r{x, {}};
    auto pairs = random_size(0, 6);
    for (std::size_t k = 0; k < pairs; ++k) r.pairs.emplace(random_size(0, x.size() - 1), random_size(0, x.size() - 1));
    auto e = generate_equivalence(r);
    for (auto p : r.pairs) EXPECT_TRUE(e.pairs.count(p));
    for (std::size_t a = 0; a < x.size(); ++a) EXPECT_TRUE(e.pairs.count({a, a}));
    for (auto [a, b] : e.pairs) {
      EXPECT_TRUE(e.pairs.count({b, a}));
      for (std::size_t c = 0; c < x.size(); ++c)
        if (e.pairs.count({b, c})) {
          EXPECT_TRUE(e.pairs.count({a, c}));
        }
    }
  }
}

TEST(Exponentials, CurryIsABijection) {
  auto x = named_set("x", 2), a = named_set("a", 2), y = named_set("y", 2);
  auto xa = product(x, a).apex;
  auto left = all_functions(xa, y);
  EXPECT_EQ(left.size(), 16u);
  EXPECT_EQ(all_functions(x, exponential(a, y)).size(), 16u);
  std::set<std::vector<std::size_t>> seen;
  for (const auto& f : left) {
    auto g = curry(f, x, a);
    seen.insert(g.table());
    EXPECT_EQ(uncurry(g, a, y), f);
  }
  EXPECT_EQ(seen.size(), 16u);
  EXPECT_THROW(curry(FinFunction::identity(x), x, a), Error);
  EXPECT_THROW(uncurry(FinFunction::identity(x), a, y), Error);
}

TEST(Exponentials, EvaluationAppliesTheFunction) {
  auto a = named_set("a", 2), y = named_set("y", 3);
  auto ya = exponential(a, y);
  auto ev = evaluation(a, y);
  for (std::size_t g = 0; g < ya.size(); ++g) {
    auto table = detail::decode_function(g, a.size(), y.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(ev(g * a.size() + i), table[i]);
  }
  EXPECT_EQ(ya[0], "a1↦y1;a2↦y1");
}

TEST(Exponentials, EmptyToEmptyHasOneElement) {
  auto e = exponential(FinSet{}, FinSet{});
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], "∅");
}

TEST(Omega, CharacteristicFunctions) {
  FinSet b{"p", "q", "r"};
  EXPECT_EQ(characteristic(b, {"p", "q", "r"}).table(), (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ(characteristic(b, {}).table(), (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_THROW(characteristic(b, {"z"}), Error);
  std::set<std::vector<std::size_t>> distinct;
  for (std::size_t mask = 0; mask < 8; ++mask) {
    Subset s;
    for (std::size_t i = 0; i < 3; ++i)
      if (mask >> i & 1) s.push_back(b[i]);
    auto chi = characteristic(b, s);
    distinct.insert(chi.table());
    EXPECT_EQ(subset_of(chi), s);
  }
  EXPECT_EQ(distinct.size(), 8u);
  for (const auto& chi : all_functions(b, omega())) EXPECT_EQ(characteristic(b, subset_of(chi)), chi);
  EXPECT_THROW(subset_of(FinFunction::identity(b)), Error);
}

TEST(Quantifiers, FiberExample) {
  auto f = FinFunction::from_images(FinSet::range(3), FinSet{"a", "b"}, {"a", "a", "b"});
  EXPECT_EQ(quantifier_image(f, {"1", "3"}, Quantifier::Exists), (Subset{"a", "b"}));
  EXPECT_EQ(quantifier_image(f, {"1", "3"}, Quantifier::Forall), (Subset{"b"}));
  auto g = FinFunction::from_images(FinSet::range(2), FinSet{"a", "b", "c"}, {"a", "a"});
  EXPECT_EQ(quantifier_image(g, {"1", "2"}, Quantifier::Exists), image(g));
  EXPECT_EQ(quantifier_image(g, {"1", "2"}, Quantifier::Forall), (Subset{"a", "b", "c"}));
  EXPECT_THROW(quantifier_image(g, {"9"}, Quantifier::Exists), Error);
}

// ∃_f ⊣ f⁻¹ ⊣ ∀_f, exhaustively on sets of size <= 3.
TEST(Quantifiers, AdjointToPreimage) {
  auto subsets = [](const FinSet& s) {
    std::vector<Subset> out;
    for (std::size_t m = 0; m < (1u << s.size()); ++m) {
      Subset sub;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (m >> i & 1) sub.push_back(s[i]);
      out.push_back(sub);
    }
    return out;
  };
  auto included = [](const FinSet& c, const Subset& a, const Subset& b) {
    auto ma = subset_mask(c, a), mb = subset_mask(c, b);
    for (std::size_t i = 0; i < ma.size(); ++i)
      if (ma[i] && !mb[i]) return false;
    return true;
  };
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      auto x = named_set("x", n), y = named_set("y", m);
      for (const auto& f : all_functions(x, y))
        for (const auto& u : subsets(x))
          for (const auto& v : subsets(y)) {
            EXPECT_EQ(included(y, quantifier_image(f, u, Quantifier::Exists), v), included(x, u, preimage(f, v)));
            EXPECT_EQ(included(x, preimage(f, v), u), included(y, v, quantifier_image(f, u, Quantifier::Forall)));
          }
    }
}

TEST(Spans, IdentityAndMatrixProduct) {
  FinSet a{"a1", "a2"}, b{"b1", "b2"}, c{"c1", "c2"};
  // Entry counts [[1,0],[1,1]] and [[1,1],[0,1]].
  FinSet r{"r1", "r2", "r3"}, s{"s1", "s2", "s3"};
  Span s1(r, FinFunction::from_images(r, a, {"a1", "a2", "a2"}), FinFunction::from_images(r, b, {"b1", "b1", "b2"}));
  Span s2(s, FinFunction::from_images(s, b, {"b1", "b1", "b2"}), FinFunction::from_images(s, c, {"c1", "c2", "c2"}));
  EXPECT_EQ(span_to_matrix(s1), (std::vector<std::vector<long>>{{1, 0}, {1, 1}}));
  EXPECT_EQ(span_to_matrix(s2), (std::vector<std::vector<long>>{{1, 1}, {0, 1}}));
  EXPECT_EQ(span_to_matrix(span_compose(s1, s2)), (std::vector<std::vector<long>>{{1, 1}, {1, 2}}));
  EXPECT_EQ(span_to_matrix(span_compose(s1, Span::identity(b))), span_to_matrix(s1));
  EXPECT_THROW(span_compose(s1, Span::identity(a)), Error);
  EXPECT_THROW(Span(r, FinFunction::identity(a), FinFunction::identity(a)), Error);
}

TEST(Spans, CompositeMatrixIsMatrixProduct) {
  for (int round = 0; round < 100; ++round) {
    auto a = named_set("a", random_size(1, 3)), b = named_set("b", random_size(1, 3)), c = named_set("c", random_size(1, 3));
    auto r = named_set("r", random_size(0, 4)), s = named_set("s", random_size(0, 4));
    Span s1(r, random_function(r, a), random_function(r, b));
    Span s2(s, random_function(s, b), random_function(s, c));
    auto m1 = span_to_matrix(s1), m2 = span_to_matrix(s2);
    std::vector<std::vector<long>> expect(a.size(), std::vector<long>(c.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < c.size(); ++k)
        for (std::size_t j = 0; j < b.size(); ++j) expect[i][k] += m1[i][j] * m2[j][k];
    EXPECT_EQ(span_to_matrix(span_compose(s1, s2)), expect);
  }
}

// The fourteen isomorphisms as cardinality equalities, all sets of size <= 3.
TEST(ArithmeticOfSets, FourteenIsomorphisms) {
  FinSet zero, one{"*"};
  auto sz = [](const FinSet& s) { return s.size(); };
  auto plus = [](const FinSet& x, const FinSet& y) { return coproduct(x, y).apex; };
  auto times = [](const FinSet& x, const FinSet& y) { return product(x, y).apex; };
  auto power = [](const FinSet& base, const FinSet& exp) { return exponential(exp, base); };
  for (std::size_t na = 0; na <= 3; ++na)
    for (std::size_t nb = 0; nb <= 3; ++nb)
      for (std::size_t nc = 0; nc <= 3; ++nc) {
        auto A = named_set("a", na), B = named_set("b", nb), C = named_set("c", nc);
        EXPECT_EQ(sz(plus(A, zero)), sz(A));
        EXPECT_EQ(sz(plus(A, B)), sz(plus(B, A)));
        EXPECT_EQ(sz(plus(plus(A, B), C)), sz(plus(A, plus(B, C))));
        EXPECT_EQ(sz(times(A, zero)), 0u);
        EXPECT_EQ(sz(times(A, one)), sz(A));
        EXPECT_EQ(sz(times(A, B)), sz(times(B, A)));
        EXPECT_EQ(sz(times(times(A, B), C)), sz(times(A, times(B, C))));
        EXPECT_EQ(sz(times(A, plus(B, C))), sz(plus(times(A, B), times(A, C))));
        EXPECT_EQ(sz(power(A, zero)), 1u);
        EXPECT_EQ(sz(power(A, one)), sz(A));
        if (na > 0) {
          EXPECT_EQ(sz(power(zero, A)), 0u);
        }
        EXPECT_EQ(sz(power(one, A)), 1u);
        EXPECT_EQ(sz(power(A, plus(B, C))), sz(times(power(A, B), power(A, C))));
        EXPECT_EQ(sz(power(power(A, B), C)), sz(power(A, times(B, C))));
        EXPECT_EQ(sz(power(A, times(B, C))), ipow(na, nb * nc));
      }
}

TEST(MonoEpi, InjectiveIffLeftCancellable) {
  for (std::size_t nx = 0; nx <= 3; ++nx)
    for (std::size_t ny = 0; ny <= 3; ++ny)
      for (const auto& f : all_tables(nx, ny)) {
        bool injective = FinFunction(named_set("x", nx), named_set("y", ny), f).injective();
        bool mono = true;
        for (std::size_t nt = 0; nt <= 3 && mono; ++nt) {
          auto tests = all_tables(nt, nx);
          for (const auto& g : tests)
            for (const auto& h : tests)
              if (g != h && after(f, g) == after(f, h)) mono = false;
        }
        EXPECT_EQ(injective, mono);
      }
}

TEST(MonoEpi, SurjectiveIffRightCancellable) {
  for (std::size_t nx = 0; nx <= 3; ++nx)
    for (std::size_t ny = 0; ny <= 3; ++ny)
      for (const auto& f : all_tables(nx, ny)) {
        bool surjective = FinFunction(named_set("x", nx), named_set("y", ny), f).surjective();
        bool epi = true;
        for (std::size_t nt = 0; nt <= 3 && epi; ++nt) {
          auto tests = all_tables(ny, nt);
          for (const auto& g : tests)
            for (const auto& h : tests)
              if (g != h && after(g, f) == after(h, f)) epi = false;
        }
        EXPECT_EQ(surjective, epi);
      }
}

TEST(Pullbacks, PreserveMonomorphisms) {
  for (int round = 0; round < 200; ++round) {
    auto z = named_set("z", random_size(1, 4));
    auto x = named_set("x", random_size(0, z.size()));
    std::vector<std::size_t> idx(z.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng());
    idx.resize(x.size());
    FinFunction f(x, z, idx);
    auto y = named_set("y", random_size(0, 4));
    auto g = random_function(y, z);
    ASSERT_TRUE(f.injective());
    EXPECT_TRUE(pullback(f, g).legs[1].injective());
  }
}

// A ×_B (B ×_C C') ≅ A ×_C C' with A -> C the composite.
TEST(Pullbacks, Pasting) {
  for (int round = 0; round < 200; ++round) {
    auto a = named_set("a", random_size(0, 3)), b = named_set("b", random_size(1, 3));
    auto c = named_set("c", random_size(1, 3)), cp = named_set("d", random_size(0, 3));
    auto ab = random_function(a, b), bc = random_function(b, c), cpc = random_function(cp, c);
    auto inner = pullback(bc, cpc);  // B ×_C C'
    auto outer = pullback(ab, inner.legs[0]);
    auto direct = pullback(compose(bc, ab), cpc);
    ASSERT_EQ(outer.apex.size(), direct.apex.size());
    std::multiset<std::pair<std::size_t, std::size_t>> lhs, rhs;
    for (std::size_t k = 0; k < outer.apex.size(); ++k)
      lhs.emplace(outer.legs[0](k), inner.legs[1](outer.legs[1](k)));
    for (std::size_t k = 0; k < direct.apex.size(); ++k) rhs.emplace(direct.legs[0](k), direct.legs[1](k));
    EXPECT_EQ(lhs, rhs);
  }
}

// For every test object T and every cone over the diagram, exactly one
// mediating map T -> apex exists; found by enumerating all maps.
TEST(UniversalProperty, LimitsHaveUniqueMediatingMaps) {
  for (int round = 0; round < 40; ++round) {
    auto x = named_set("x", random_size(0, 3)), y = named_set("y", random_size(0, 3)), z = named_set("z", random_size(1, 2));
    auto f = random_function(x, z), g = random_function(y, z);
    auto pb = pullback(f, g);
    auto f2 = random_function(x, z), g2 = random_function(x, z);
    auto eq = equalizer(f2, g2);
    auto pr = product(x, y);
    for (std::size_t nt = 0; nt <= 2; ++nt) {
      auto t = named_set("t", nt);
      for (const auto& p : all_functions(t, x)) {
        for (const auto& q : all_functions(t, y)) {
          bool is_cone = compose(f, p) == compose(g, q);
          std::size_t pb_count = 0, pr_count = 0;
          for (const auto& u : all_functions(t, pb.apex))
            if (compose(pb.legs[0], u) == p && compose(pb.legs[1], u) == q) ++pb_count;
          for (const auto& u : all_functions(t, pr.apex))
            if (compose(pr.legs[0], u) == p && compose(pr.legs[1], u) == q) ++pr_count;
          EXPECT_EQ(pb_count, is_cone ? 1u : 0u);
          EXPECT_EQ(pr_count, 1u);
        }
        std::size_t eq_count = 0;
        for (const auto& u : all_functions(t, eq.apex))
          if (compose(eq.legs[0], u) == p) ++eq_count;
        EXPECT_EQ(eq_count, compose(f2, p) == compose(g2, p) ? 1u : 0u);
      }
    }
    // Legs commute with the diagram.
    EXPECT_EQ(compose(f, pb.legs[0]), compose(g, pb.legs[1]));
    EXPECT_EQ(compose(f2, eq.legs[0]), compose(g2, eq.legs[0]));
  }
}

TEST(UniversalProperty, ColimitsHaveUniqueMediatingMaps) {
  for (int round = 0; round < 40; ++round) {
    auto w = named_set("w", random_size(0, 2));
    auto x = named_set("x", random_size(w.empty() ? 0 : 1, 3)), y = named_set("y", random_size(1, 3));
    auto f = random_function(w, x), g = random_function(w, y);
    auto po = pushout(f, g);
    auto cp = coproduct(x, y);
    auto ce_f = random_function(x, y), ce_g = random_function(x, y);
    auto ce = coequalizer(ce_f, ce_g);
    for (std::size_t nt = 1; nt <= 2; ++nt) {
      auto t = named_set("t", nt);
      for (const auto& p : all_functions(x, t))
        for (const auto& q : all_functions(y, t)) {
          bool is_cocone = compose(p, f) == compose(q, g);
          std::size_t po_count = 0, cp_count = 0;
          for (const auto& u : all_functions(po.apex, t))
            if (compose(u, po.legs[0]) == p && compose(u, po.legs[1]) == q) ++po_count;
          for (const auto& u : all_functions(cp.apex, t))
            if (compose(u, cp.legs[0]) == p && compose(u, cp.legs[1]) == q) ++cp_count;
          EXPECT_EQ(po_count, is_cocone ? 1u : 0u);
          EXPECT_EQ(cp_count, 1u);
        }
      for (const auto& q : all_functions(y, t)) {
        std::size_t ce_count = 0;
        for (const auto& u : all_functions(ce.apex, t))
          if (compose(u, ce.legs[0]) == q) ++ce_count;
        EXPECT_EQ(ce_count, compose(q, ce_f) == compose(q, ce_g) ? 1u : 0u);
      }
    }
    EXPECT_EQ(compose(po.legs[0], f), compose(po.legs[1], g));
    EXPECT_EQ(compose(ce.legs[0], ce_f), compose(ce.legs[0], ce_g));
  }
}

TEST(Limits, GeneralDiagramLegsCommute) {
  for (int round = 0; round < 50; ++round) {
    FinDiagram d;
    auto n = random_size(1, 4);
    for (std::size_t v = 0; v < n; ++v) d.add_vertex("V" + std::to_string(v), named_set("v" + std::to_string(v) + "_", random_size(1, 3)));
    auto arrows = random_size(0, 4);
    for (std::size_t a = 0; a < arrows; ++a) {
      auto s = random_size(0, n - 1), t = random_size(0, n - 1);
      d.add_arrow("a" + std::to_string(a), s, t, random_function(d.sets[s], d.sets[t]));
    }
    auto lim = limit_of_diagram(d);
    auto col = colimit_of_diagram(d);
    for (std::size_t a = 0; a < d.arrows.size(); ++a) {
      const auto& ar = d.arrows[a];
      EXPECT_EQ(compose(d.maps[a], lim.legs[ar.src]), lim.legs[ar.tgt]);
      EXPECT_EQ(compose(col.legs[ar.tgt], d.maps[a]), col.legs[ar.src]);
    }
    // Oracle: brute-force count of compatible tuples.
    std::size_t total = 1;
    for (const auto& s : d.sets) total *= s.size();
    std::size_t count = 0;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::size_t> t(n);
      auto c = code;
      for (std::size_t v = 0; v < n; ++v) t[v] = c % d.sets[v].size(), c /= d.sets[v].size();
      bool ok = true;
      for (std::size_t a = 0; a < d.arrows.size(); ++a)
        if (d.maps[a](t[d.arrows[a].src]) != t[d.arrows[a].tgt]) ok = false;
      count += ok;
    }
    EXPECT_EQ(lim.apex.size(), count);
  }
}
