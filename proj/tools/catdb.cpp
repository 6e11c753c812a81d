// Command-line front end. Exit codes: 0 success, 1 validation failure or
// inequality, 2 budget exhausted or possibly infinite, 3 parse or usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "catdb.hpp"

namespace fs = std::filesystem;
using namespace catdb;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kBudget = 2, kUsage = 3 };

struct Common {
  std::string schema;
  std::string instance;
  std::size_t bound = kDefaultBound;
  std::string monad;
};

void add_common(CLI::App* cmd, Common& c, bool needs_instance) {
  cmd->add_option("--schema", c.schema, "schema file")->required();
  auto* inst = cmd->add_option("--instance", c.instance, "instance directory");
  if (needs_instance) inst->required();
  cmd->add_option("--bound", c.bound, "path length bound")->capture_default_str();
  cmd->add_option("--monad", c.monad, "monad for Kleisli instances, e.g. \"maybe\" or \"list 4\"");
}

std::optional<MonadDecl> monad_of(const Common& c, const SchemaDocument& doc) {
  if (!c.monad.empty()) return parse_monad_decl(c.monad);
  return doc.monad;
}

void print_verdict(const Verdict& v) {
  if (v)
    std::cout << "valid\n";
  else
    std::cout << "invalid " << v.message() << "\n";
}

int emit_instance(const Instance& i, const std::string& out) {
  if (out.empty())
    std::cout << print_instance(i);
  else
    save_tables(out, i.to_tables());
  return kOk;
}

std::string render_morphism(const Instance& i, const Instance& j, const InstanceMorphism& m) {
  const auto& g = i.schema().graph();
  std::vector<std::string> parts;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    std::string s = g.vertices()[v] + ":";
    for (std::size_t x = 0; x < i.pk(v).size(); ++x) s += " " + i.pk(v)[x] + "↦" + j.pk(v)[m.components[v](x)];
    parts.push_back(s);
  }
  return detail::join(parts, "; ");
}

int cmd_validate(const Common& c) {
  auto doc = load_schema(c.schema);
  if (c.instance.empty()) {
    std::cout << "schema ok: " << doc.schema.vertices().size() << " vertices, " << doc.schema.arrows().size() << " arrows, "
              << doc.schema.peds().size() << " PEDs\n";
    return kOk;
  }
  auto tables = load_tables(c.instance, doc.schema);
  Verdict v;
  if (auto m = monad_of(c, doc)) {
    v = with_monad(*m, [&](const auto& monad) {
      try {
        return validate_kleisli_instance(kleisli_from_tables(doc.schema, monad, tables));
      } catch (const ParseError& e) {
        return Verdict::fail(e.code(), e.detail());
      }
    });
  } else {
    v = validate_instance(doc.schema, tables);
  }
  print_verdict(v);
  return v ? kOk : kInvalid;
}

int cmd_eq(const Common& c, const std::string& p, const std::string& q, std::size_t budget) {
  auto s = load_schema(c.schema).schema;
  auto r = paths_equal(s, s.parse_path(p), s.parse_path(q), c.bound, budget);
  std::cout << to_string(r.verdict) << "\n";
  for (const auto& step : r.trace)
    std::cout << "  PED " << step.ped + 1 << (step.forward ? " ->" : " <-") << " at " << step.position << ": "
              << s.render(step.result) << "\n";
  switch (r.verdict) {
    case EqVerdict::Equal: return kOk;
    case EqVerdict::NotEqualWithinBound: return kInvalid;
    case EqVerdict::ExhaustedBudget: return kBudget;
  }
  return kUsage;
}

int cmd_hom(const Common& c, const std::string& from, const std::string& to) {
  auto s = load_schema(c.schema).schema;
  auto h = hom_set(s, from, to, c.bound);
  const auto& g = s.graph();
  std::sort(h.classes.begin(), h.classes.end(), [&](const Path& a, const Path& b) { return g.shortlex_less(a, b); });
  for (const auto& p : h.classes) std::cout << s.render(p) << "\n";
  std::cout << h.classes.size() << " classes, " << to_string(h.verdict) << "\n";
  return h.verdict == HomVerdict::Stable ? kOk : kBudget;
}

int cmd_nat(const Common& c, const std::string& from, const std::string& to, const std::string& morphism) {
  auto s = load_schema(c.schema).schema;
  auto i = load_instance(from, s);
  auto j = load_instance(to, s);
  if (!morphism.empty()) {
    auto alpha = load_instance_morphism(morphism, i, j);
    for (std::size_t a = 0; a < s.arrows().size(); ++a)
      std::cout << "# " << s.arrows()[a] << "\n"
                << print_table(naturality_table(i, j, alpha, a, fs::path(from).filename().string(),
                                                fs::path(to).filename().string(), fs::path(morphism).filename().string()));
    auto v = check_nat_trans(i, j, alpha);
    print_verdict(v);
    return v ? kOk : kInvalid;
  }
  std::vector<std::string> lines;
  for (const auto& m : enumerate_nat_trans(i, j)) lines.push_back(render_morphism(i, j, m));
  std::sort(lines.begin(), lines.end());
  std::cout << lines.size() << " natural transformations\n";
  for (const auto& l : lines) std::cout << l << "\n";
  return kOk;
}

int cmd_migrate(const Common& c, const std::string& target, const std::string& morphism, const std::string& kind,
                const std::string& out) {
  auto src = load_schema(c.schema).schema;
  auto tgt = load_schema(target).schema;
  auto f = load_morphism(morphism, src, tgt);
  if (auto v = check_schema_morphism(f, c.bound); !v) {
    print_verdict(v);
    return kInvalid;
  }
  if (kind == "delta") {
    auto j = load_instance(c.instance, tgt);
    require(validate_instance(j));
    return emit_instance(delta(f, j), out);
  }
  auto i = load_instance(c.instance, src);
  require(validate_instance(i));
  if (kind == "sigma") return emit_instance(sigma(f, i, c.bound), out);
  return emit_instance(pi(f, i, c.bound), out);
}

int cmd_limits(const Common& c, const std::string& other, const std::string& kind, const std::string& out) {
  auto s = load_schema(c.schema).schema;
  auto i = load_instance(c.instance, s);
  auto j = load_instance(other, s);
  require(validate_instance(i));
  require(validate_instance(j));
  auto cone = kind == "product" ? instance_product(i, j) : instance_coproduct(i, j);
  return emit_instance(cone.apex, out);
}

int cmd_repr(const Common& c, const std::string& vertex, const std::string& out) {
  auto s = load_schema(c.schema).schema;
  return emit_instance(representable(s, vertex, c.bound), out);
}

int cmd_elements(const Common& c) {
  auto s = load_schema(c.schema).schema;
  auto i = load_instance(c.instance, s);
  require(validate_instance(i));
  auto e = category_of_elements(i);
  const auto& g = e.graph;
  std::cout << "# objects\n";
  for (const auto& v : g.vertices()) std::cout << v << "\n";
  std::cout << "# arrows\n";
  for (std::size_t a = 0; a < g.arrows().size(); ++a)
    std::cout << g.arrows()[a] << " : " << g.vertices()[g.src(a)] << " -> " << g.vertices()[g.tgt(a)] << "\n";
  return kOk;
}

int cmd_export_rdf(const Common& c) {
  auto s = load_schema(c.schema).schema;
  auto i = load_instance(c.instance, s);
  require(validate_instance(i));
  for (const auto& t : export_rdf(i)) std::cout << t.render() << "\n";
  return kOk;
}

int cmd_markov(const Common& c, std::size_t steps) {
  auto doc = load_schema(c.schema);
  auto tables = load_tables(c.instance, doc.schema);
  auto k = kleisli_from_tables(doc.schema, DistMonad{}, tables);
  require(validate_kleisli_instance(k));
  std::cout << print_table(markov_matrix(k.pk.at(0), markov_power(k, steps)));
  return kOk;
}

int cmd_monad_check(const std::string& monad, std::size_t size) {
  auto decl = parse_monad_decl(monad);
  std::vector<std::size_t> sizes;
  for (std::size_t n = 0; n <= size; ++n) sizes.push_back(n);
  bool ok = with_monad(decl, [&](const auto& m) {
    auto laws = monad_laws_check(m, sizes);
    std::cout << "monad laws: " << (laws ? "pass" : "fail " + laws.message()) << "\n";
    bool all = static_cast<bool>(laws);
    for (auto n : sizes) {
      auto k = kleisli_laws_check(m, n);
      std::cout << "kleisli laws, size " << n << ": " << (k ? "pass" : "fail " + k.message()) << "\n";
      all = all && static_cast<bool>(k);
    }
    return all;
  });
  return ok ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catdb: schemas, instances and data migration"};
  app.require_subcommand(1);
  Common common;

  auto* validate = app.add_subcommand("validate", "check a schema, or an instance against it");
  add_common(validate, common, false);

  std::string lhs, rhs;
  std::size_t budget = kDefaultNodeBudget;
  auto* eq = app.add_subcommand("eq", "decide whether two paths are equivalent");
  add_common(eq, common, false);
  eq->add_option("lhs", lhs, "path literal, e.g. Employee.manager.worksIn")->required();
  eq->add_option("rhs", rhs, "path literal")->required();
  eq->add_option("--budget", budget, "search node budget")->capture_default_str();

  std::string from, to;
  auto* hom = app.add_subcommand("hom", "list the path classes between two vertices");
  add_common(hom, common, false);
  hom->add_option("from", from, "source vertex")->required();
  hom->add_option("to", to, "target vertex")->required();

  std::string nat_from, nat_to, nat_morphism;
  auto* nat = app.add_subcommand("nat", "enumerate or check instance morphisms");
  add_common(nat, common, false);
  nat->add_option("--from", nat_from, "source instance directory")->required();
  nat->add_option("--to", nat_to, "target instance directory")->required();
  nat->add_option("--morphism", nat_morphism, "component directory to check instead of enumerating");

  std::string target, morphism, kind, out;
  auto* migrate = app.add_subcommand("migrate", "pull back or push forward an instance along a schema morphism");
  add_common(migrate, common, true);
  migrate->add_option("--target", target, "target schema file")->required();
  migrate->add_option("--morphism", morphism, "schema morphism file")->required();
  migrate->add_option("--kind", kind, "delta, sigma or pi")->required()->check(CLI::IsMember({"delta", "sigma", "pi"}));
  migrate->add_option("--out", out, "write tables into this directory");

  std::string other, limit_kind;
  auto* limits = app.add_subcommand("limits", "product or coproduct of two instances");
  add_common(limits, common, true);
  limits->add_option("--other", other, "second instance directory")->required();
  limits->add_option("--kind", limit_kind, "product or coproduct")->required()->check(CLI::IsMember({"product", "coproduct"}));
  limits->add_option("--out", out, "write tables into this directory");

  std::string vertex;
  auto* repr = app.add_subcommand("repr", "the representable instance on a vertex");
  add_common(repr, common, false);
  repr->add_option("--vertex", vertex, "representing vertex")->required();
  repr->add_option("--out", out, "write tables into this directory");

  auto* elements = app.add_subcommand("elements", "the category of elements of an instance");
  add_common(elements, common, true);

  auto* rdf = app.add_subcommand("export-rdf", "sorted triples, one per foreign-key cell");
  add_common(rdf, common, true);

  std::size_t steps = 1;
  auto* markov = app.add_subcommand("markov", "n-step transition matrix of a Dist instance on a loop");
  add_common(markov, common, true);
  markov->add_option("--steps", steps, "number of steps")->capture_default_str();

  std::string monad_name;
  std::size_t size = 2;
  auto* monad_check = app.add_subcommand("monad-check", "check monad and Kleisli laws on small sets");
  monad_check->add_option("--monad", monad_name, "monad, e.g. \"maybe\" or \"exceptions e1 e2\"")->required();
  monad_check->add_option("--size", size, "largest set size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(common);
    if (*eq) return cmd_eq(common, lhs, rhs, budget);
    if (*hom) return cmd_hom(common, from, to);
    if (*nat) return cmd_nat(common, nat_from, nat_to, nat_morphism);
    if (*migrate) return cmd_migrate(common, target, morphism, kind, out);
    if (*limits) return cmd_limits(common, other, limit_kind, out);
    if (*repr) return cmd_repr(common, vertex, out);
    if (*elements) return cmd_elements(common);
    if (*rdf) return cmd_export_rdf(common);
    if (*markov) return cmd_markov(common, steps);
    if (*monad_check) return cmd_monad_check(monad_name, size);
  } catch (const ParseError& e) {
    std::cerr << "parse error " << e.code();
    if (e.line() > 0) std::cerr << " at " << e.line() << ":" << e.column();
    std::cerr << ": " << e.detail() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Validation: return kInvalid;
      case ErrorKind::Budget:
      case ErrorKind::PossiblyInfinite: return kBudget;
      default: return kUsage;
    }
  }
  return kUsage;
}
