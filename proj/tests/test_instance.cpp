#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace catdb;
using namespace catdb::testing;

namespace {

Schema dept() { return load("dept/schema.cat"); }
Instance dept_inst() { return load_inst(dept(), "dept/instance"); }
Schema graph_schema() { return load("graph/schema.cat"); }
Schema loop() { return load("loop/schema.cat"); }

// "B.g1.i" -> "i(g1(☺))"
std::string applicative(const std::string& path) {
  std::string out = "☺";
  std::size_t pos = path.find('.');
  while (pos != std::string::npos && pos + 1 < path.size()) {
    auto next = path.find('.', pos + 1);
    out = path.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1) + "(" + out + ")";
    pos = next;
  }
  return out;
}

Table renamed(Table t) {
  for (auto& row : t.rows)
    for (auto& cell : row) cell = applicative(cell);
  return t;
}

Instance with_cell(const Instance& i, const std::string& vertex, const std::string& row, const std::string& col,
                   const std::string& value) {
  auto tables = i.to_tables();
  auto& t = tables.at(vertex);
  auto c = static_cast<std::size_t>(std::find(t.header.begin(), t.header.end(), col) - t.header.begin());
  for (auto& r : t.rows)
    if (r[0] == row) r[c] = value;
  return instance_from_tables(i.schema(), tables);
}

// Same instance with every row id prefixed.
Instance relabel(const Instance& i, const std::string& prefix) {
  auto tables = i.to_tables();
  for (auto& [_, t] : tables)
    for (auto& row : t.rows)
      for (auto& cell : row) cell = prefix + cell;
  return instance_from_tables(i.schema(), tables);
}

}  // namespace

TEST(Instance, DepartmentStoreIsValid) {
  auto i = dept_inst();
  EXPECT_TRUE(validate_instance(i));
  EXPECT_EQ(i.total_rows(), 18u);
  auto s = i.schema();
  auto wi = eval_path(i, s.parse_path("Employee.manager.worksIn"));
  EXPECT_EQ(wi.apply("101"), "q10");
  EXPECT_EQ(eval_path(i, s.parse_path("Employee.worksIn")).apply("101"), "q10");
}

TEST(Instance, PedViolationNamesRuleAndRow) {
  auto bad = with_cell(dept_inst(), "Employee", "101", "manager", "102");
  auto v = validate_instance(bad);
  ASSERT_FALSE(v);
  EXPECT_EQ(v.code, "PEDViolation");
  EXPECT_NE(v.detail.find("PED 1"), std::string::npos);
  EXPECT_NE(v.detail.find("'101'"), std::string::npos);
  EXPECT_NE(v.detail.find("x02 vs q10"), std::string::npos);
}

TEST(Instance, StructuralErrors) {
  auto s = dept();
  auto tables = dept_inst().to_tables();
  auto missing = tables;
  missing.at("Employee").rows[0][4] = "";
  EXPECT_EQ(check_tables(s, missing).code, "MissingCell");
  auto dangling = tables;
  dangling.at("Employee").rows[0][4] = "z99";
  EXPECT_EQ(check_tables(s, dangling).code, "ForeignKeyViolation");
  auto dup = tables;
  dup.at("FirstNameString").rows.push_back({"Alan"});
  EXPECT_EQ(check_tables(s, dup).code, "DuplicateRow");
  auto header = tables;
  header.at("Department").header = {"id", "secretary", "name"};
  EXPECT_EQ(check_tables(s, header).code, "BadHeader");
  EXPECT_THROW(instance_from_tables(s, dangling), Error);
}

TEST(Instance, EmptyIsValid) { EXPECT_TRUE(validate_instance(Instance::empty(dept()))); }

TEST(EvalPath, Examples) {
  auto i = dept_inst();
  const auto& s = i.schema();
  EXPECT_EQ(eval_path(i, s.parse_path("Employee.worksIn.secretary.last")).apply("101"), "Hilbert");
  auto dds = load_inst(loop(), "loop/I");
  EXPECT_EQ(eval_path(dds, loop().parse_path("s.f.f")).apply("A"), "C");
  for (const auto& v : s.vertices()) {
    auto id = eval_path(i, s.parse_path(v + "."));
    EXPECT_EQ(id, FinFunction::identity(i.pk(v)));
  }
  EXPECT_THROW(eval_path(i, Path{0, {4}}), Error);
}

TEST(NatTrans, FsmRefinement) {
  auto s = load("fsm/schema.cat");
  auto x = load_inst(s, "fsm/X"), y = load_inst(s, "fsm/Y");
  auto alpha = load_instance_morphism(data_dir() / "fsm/alpha", y, x);
  EXPECT_TRUE(check_nat_trans(y, x, alpha));
  for (const auto& a : {"a", "b"}) {
    auto expected = parse_table(detail::read_file(data_dir() / "fsm/expected" / (std::string("naturality_") + a + ".csv")));
    auto t = naturality_table(y, x, alpha, s.arrow(a), "Y", "X", "alpha");
    EXPECT_EQ(t, expected);
    for (const auto& row : t.rows) EXPECT_EQ(row[2], row[4]);
  }
  // Sending State 1A to State 2 breaks the square for a at State 0.
  auto broken = alpha;
  broken.components[0] = FinFunction::from_pairs(
      y.pk(0), x.pk(0),
      {{"State 0", "State 0"}, {"State 1A", "State 2"}, {"State 1B", "State 1"}, {"State 1C", "State 1"},
       {"State 2A", "State 2"}, {"State 2B", "State 2"}});
  auto v = check_nat_trans(y, x, broken);
  EXPECT_EQ(v.code, "NaturalityViolation");
  EXPECT_EQ(v.detail, "arrow 'a', row 'State 0'");
}

TEST(NatTrans, GraphHomomorphismsAreNaturalTransformations) {
  auto s = graph_schema();
  auto i = load_inst(s, "graph/I"), j = load_inst(s, "graph/J");
  auto homs = enumerate_nat_trans(i, j);
  EXPECT_EQ(homs.size(), 4u);
  EXPECT_EQ(count_nat_trans(i, j), 4u);
  for (const auto& m : homs) EXPECT_TRUE(check_nat_trans(i, j, m));
  auto y_arrow = representable(s, "Arrow");
  EXPECT_EQ(y_arrow.pk("Vertex").size(), 2u);
  EXPECT_EQ(count_nat_trans(y_arrow, i), 3u);
}

TEST(NatTrans, CountMatchesBruteForce) {
  auto s = loop();
  auto small = small_instances(s, 3);
  for (int round = 0; round < 40; ++round) {
    const auto& i = small[random_size(0, small.size() - 1)];
    const auto& j = small[random_size(0, small.size() - 1)];
    std::size_t brute = 0;
    for (const auto& t : all_tables(i.pk(0).size(), j.pk(0).size()))
      brute += static_cast<bool>(check_nat_trans(i, j, InstanceMorphism{{FinFunction(i.pk(0), j.pk(0), t)}}));
    EXPECT_EQ(count_nat_trans(i, j), brute);
  }
}

TEST(NatTrans, CountInvariantUnderRenaming) {
  auto s = graph_schema();
  auto i = load_inst(s, "graph/I"), j = load_inst(s, "graph/J");
  EXPECT_EQ(count_nat_trans(relabel(i, "r_"), j), 4u);
  EXPECT_EQ(count_nat_trans(i, relabel(j, "z")), 4u);
  auto x = load_inst(loop(), "loop/I"), y = load_inst(loop(), "loop/J");
  EXPECT_EQ(count_nat_trans(relabel(x, "p"), relabel(y, "q")), count_nat_trans(x, y));
}

TEST(NatTrans, VerticalCompositionIsACategory) {
  auto small = small_instances(loop(), 2);
  for (const auto& a : small)
    for (const auto& b : small)
      for (const auto& alpha : enumerate_nat_trans(a, b)) {
        EXPECT_EQ(compose(alpha, identity_morphism(a)), alpha);
        EXPECT_EQ(compose(identity_morphism(b), alpha), alpha);
        for (const auto& c : small)
          for (const auto& beta : enumerate_nat_trans(b, c)) {
            EXPECT_TRUE(check_nat_trans(a, c, compose(beta, alpha)));
            for (const auto& d : small)
              for (const auto& gamma : enumerate_nat_trans(c, d))
                EXPECT_EQ(compose(gamma, compose(beta, alpha)), compose(compose(gamma, beta), alpha));
          }
      }
}

TEST(InstanceLimits, GraphProductMatchesTable) {
  auto s = graph_schema();
  auto p = instance_product(load_inst(s, "graph/I"), load_inst(s, "graph/J4"));
  auto expected = load_tables(data_dir() / "graph/expected/product", s);
  auto got = p.apex.to_tables();
  EXPECT_EQ(got.at("Arrow"), expected.at("Arrow"));
  EXPECT_EQ(got.at("Vertex"), expected.at("Vertex"));
  EXPECT_EQ(p.apex.pk("Vertex").size(), 12u);
  EXPECT_EQ(p.apex.pk("Arrow").size(), 12u);
}

TEST(InstanceLimits, DdsProductProjectsColumnwise) {
  auto i = load_inst(loop(), "loop/I"), j = load_inst(loop(), "loop/J");
  auto p = instance_product(i, j);
  ASSERT_EQ(p.apex.pk(0).size(), 9u);
  EXPECT_TRUE(check_nat_trans(p.apex, i, p.legs[0]));
  EXPECT_TRUE(check_nat_trans(p.apex, j, p.legs[1]));
  for (std::size_t r = 0; r < 9; ++r) {
    auto next = p.apex.fk(0)(r);
    EXPECT_EQ(p.legs[0].components[0](next), i.fk(0)(p.legs[0].components[0](r)));
    EXPECT_EQ(p.legs[1].components[0](next), j.fk(0)(p.legs[1].components[0](r)));
  }
  EXPECT_EQ(p.apex.to_tables().at("s").rows[0], (std::vector<std::string>{"(A,x)", "(C,y)"}));
}

TEST(InstanceLimits, CoproductWithEmptyIsOriginal) {
  auto i = dept_inst();
  auto c = instance_coproduct(i, Instance::empty(i.schema()));
  EXPECT_TRUE(validate_instance(c.apex));
  EXPECT_EQ(c.apex.total_rows(), i.total_rows());
  for (std::size_t v = 0; v < i.pks().size(); ++v) {
    EXPECT_TRUE(c.legs[0].components[v].injective());
    EXPECT_TRUE(c.legs[0].components[v].surjective());
  }
  EXPECT_TRUE(check_nat_trans(i, c.apex, c.legs[0]));
}

TEST(InstanceLimits, ProductUniversalProperty) {
  auto i = load_inst(loop(), "loop/I"), j = load_inst(loop(), "loop/J");
  auto p = instance_product(i, j);
  for (const auto& t : small_instances(loop(), 3)) {
    auto to_p = enumerate_nat_trans(t, p.apex);
    auto to_i = enumerate_nat_trans(t, i), to_j = enumerate_nat_trans(t, j);
    EXPECT_EQ(to_p.size(), to_i.size() * to_j.size());
    for (const auto& a : to_i)
      for (const auto& b : to_j) {
        std::size_t mediating = 0;
        for (const auto& u : to_p)
          if (compose(p.legs[0], u) == a && compose(p.legs[1], u) == b) ++mediating;
        EXPECT_EQ(mediating, 1u);
      }
  }
}

TEST(InstanceLimits, CoproductUniversalProperty) {
  auto i = load_inst(loop(), "loop/I"), j = load_inst(loop(), "loop/J");
  auto c = instance_coproduct(i, j);
  for (const auto& t : small_instances(loop(), 3)) {
    auto from_c = enumerate_nat_trans(c.apex, t);
    auto from_i = enumerate_nat_trans(i, t), from_j = enumerate_nat_trans(j, t);
    EXPECT_EQ(from_c.size(), from_i.size() * from_j.size());
    for (const auto& a : from_i)
      for (const auto& b : from_j) {
        std::size_t mediating = 0;
        for (const auto& u : from_c)
          if (compose(u, c.legs[0]) == a && compose(u, c.legs[1]) == b) ++mediating;
        EXPECT_EQ(mediating, 1u);
      }
  }
}

TEST(InstanceLimits, ProductsOnSchemaWithPedsAreValid) {
  auto i = dept_inst();
  auto p = instance_product(i, i);
  EXPECT_TRUE(validate_instance(p.apex));
  EXPECT_EQ(p.apex.pk("Employee").size(), 9u);
}

TEST(Representable, SirsMatchesTables) {
  auto s = load("sirs/schema.cat");
  auto y = representable(s, "B");
  auto expected = load_tables(data_dir() / "sirs/yB", s);
  for (const auto& [v, t] : y.to_tables()) EXPECT_EQ(renamed(t), expected.at(v)) << v;
  EXPECT_EQ(y.pk("A").size(), 0u);
  EXPECT_EQ(y.pk("C").size(), 2u);
  EXPECT_EQ(y.pk("D").size(), 2u);
  EXPECT_EQ(y.pk("E").size(), 1u);
}

TEST(Representable, SinkAndInfinite) {
  auto s = load("sirs/schema.cat");
  auto d = representable(s, "D");
  for (const auto& v : s.vertices()) EXPECT_EQ(d.pk(v).size(), v == "D" ? 1u : 0u);
  EXPECT_THROW(representable(loop(), "s", 6), PossiblyInfiniteError);
}

TEST(Yoneda, Bijections) {
  auto s = graph_schema();
  auto i = load_inst(s, "graph/I");
  for (const auto& c : {"Vertex", "Arrow"}) {
    auto r = yoneda_check(s, s.vertex(c), i);
    EXPECT_TRUE(r.bijective);
    EXPECT_EQ(r.morphisms, 3u);
  }
  auto sirs = load("sirs/schema.cat");
  for (std::size_t c = 0; c < sirs.vertices().size(); ++c) {
    auto r = yoneda_check(sirs, c, representable(sirs, c));
    EXPECT_TRUE(r.bijective);
    EXPECT_EQ(r.morphisms, 1u);
  }
  auto d = dept();
  EXPECT_THROW(yoneda_check(d, d.vertex("Department"), dept_inst(), 8), PossiblyInfiniteError);
}

TEST(Elements, DepartmentStore) {
  auto i = dept_inst();
  auto e = category_of_elements(i);
  EXPECT_EQ(e.graph.vertices().size(), 18u);
  EXPECT_EQ(e.graph.arrows().size(), 16u);
  EXPECT_TRUE(is_graph_hom(e.graph, i.schema().graph(), e.projection));
  auto rdf = export_rdf(i);
  ASSERT_EQ(rdf.size(), 16u);
  EXPECT_TRUE(std::is_sorted(rdf.begin(), rdf.end()));
  EXPECT_NE(std::find(rdf.begin(), rdf.end(), RdfTriple{"102", "first", "Bertrand"}), rdf.end());
  EXPECT_NE(std::find(rdf.begin(), rdf.end(), RdfTriple{"101", "manager", "103"}), rdf.end());
}

TEST(Elements, DiscreteSchemaIsAHistogram) {
  Schema s(discrete_graph({"City", "Empty", "River", "Sea"}));
  std::vector<FinSet> pk{FinSet{"Paris", "Rome", "Oslo"}, FinSet{}, FinSet{"Nile", "Amazon"}, FinSet{"Red", "Black"}};
  Instance i(s, pk, {});
  auto e = category_of_elements(i);
  EXPECT_EQ(e.graph.vertices().size(), 7u);
  EXPECT_TRUE(e.graph.arrows().empty());
  EXPECT_TRUE(export_rdf(i).empty());
}

TEST(Elements, FsmGivesStateTransitionDiagram) {
  auto s = load("fsm/schema.cat");
  auto x = load_inst(s, "fsm/X");
  auto e = category_of_elements(x);
  EXPECT_EQ(e.graph.vertices().size(), 3u);
  EXPECT_EQ(e.graph.arrows().size(), 6u);
  auto k = e.graph.arrow("(State 1,a)");
  EXPECT_EQ(e.graph.vertices()[e.graph.src(k)], "(State,State 1)");
  EXPECT_EQ(e.graph.vertices()[e.graph.tgt(k)], "(State,State 2)");
}

// Elements round-trip exactly; RDF round-trips every row that occurs in a triple.
TEST(Elements, RoundTripOnGoldenInstances) {
  std::vector<Instance> golden{dept_inst(),
                               load_inst(graph_schema(), "graph/I"),
                               load_inst(graph_schema(), "graph/J"),
                               load_inst(loop(), "loop/I"),
                               load_inst(loop(), "loop/J"),
                               load_inst(load("fsm/schema.cat"), "fsm/X"),
                               load_inst(load("fsm/schema.cat"), "fsm/Y")};
  for (const auto& i : golden) {
    EXPECT_EQ(instance_from_elements(i.schema(), category_of_elements(i)), i);
    auto back = tables_from_rdf(i.schema(), export_rdf(i));
    for (const auto& [v, t] : i.to_tables()) {
      std::set<std::string> mentioned;
      for (const auto& tr : export_rdf(i)) {
        mentioned.insert(tr.subject);
        mentioned.insert(tr.object);
      }
      Table kept{t.header, {}};
      for (const auto& row : t.rows)
        if (mentioned.count(row[0])) kept.rows.push_back(row);
      EXPECT_EQ(sorted_rows(back.at(v)), sorted_rows(kept)) << v;
    }
  }
}

TEST(Io, ActionTablesRoundTripBitExactly) {
  for (const auto* rel : {"fsm/X/State.csv", "fsm/Y/State.csv", "loop/I/s.csv", "loop/J/s.csv"}) {
    auto text = detail::read_file(data_dir() / rel);
    EXPECT_EQ(print_table(parse_table(text)), text) << rel;
  }
  auto s = load("fsm/schema.cat");
  auto x = load_inst(s, "fsm/X");
  auto dir = std::filesystem::temp_directory_path() / "catdb_roundtrip_fsm";
  std::filesystem::remove_all(dir);
  save_tables(dir, x.to_tables());
  EXPECT_EQ(load_instance(dir, s), x);
  std::filesystem::remove_all(dir);
}
