#pragma once

// Text formats: schema files, morphism files, CSV instance directories and
// Kleisli cells.
//
// Schema file, one declaration per line ('#' starts a comment):
//   monad maybe | exceptions e1 e2 ... | list N | powerset | dist   (optional)
//   vertex Employee
//   arrow manager : Employee -> Employee
//   Employee.manager.worksIn = Employee.worksIn
//
// Morphism file:
//   vertex T1 -> T
//   arrow SSN1 -> T.SSN
//
// Instance directory: one `<vertex>.csv` per vertex with header `id,<arrows>`.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "catdb/error.hpp"
#include "catdb/instance.hpp"
#include "catdb/kleisli.hpp"
#include "catdb/schema.hpp"

namespace catdb {

/// Monad named in a schema header.
struct MonadDecl {
  std::string kind;  // maybe, exceptions, list, powerset, dist
  std::vector<std::string> exceptions;
  std::size_t list_bound = 8;
  friend bool operator==(const MonadDecl&, const MonadDecl&) = default;
};

struct SchemaDocument {
  Schema schema;
  std::optional<MonadDecl> monad;
};

namespace detail {

struct Token {
  std::string text;
  int column;
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return out;
}

inline std::string strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

inline bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name)
    if (c == '.' || c == ',' || c == '=' || c == '#' || c == '"' || c == '/' || c == '\\' ||
        static_cast<unsigned char>(c) <= ' ')
      return false;
  return true;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("MissingFile", "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) out.emplace_back(text.substr(pos));
      break;
    }
    out.emplace_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Schemas

inline SchemaDocument parse_schema(std::string_view text) {
  std::vector<std::string> vertices;
  std::vector<ArrowDecl> arrows;
  std::set<std::string> vnames, anames;
  struct PedLine {
    std::string lhs, rhs;
    int line, lcol, rcol;
  };
  std::vector<PedLine> peds;
  std::optional<MonadDecl> monad;
  auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const int line = static_cast<int>(ln) + 1;
    auto toks = detail::tokenize(detail::strip_comment(lines[ln]));
    if (toks.empty()) continue;
    auto fail = [&](const std::string& code, const std::string& what, int col) { return ParseError(code, what, line, col); };
    const auto& head = toks[0].text;
    auto check_name = [&](const detail::Token& t) {
      if (!detail::valid_name(t.text)) throw fail("BadName", "'" + t.text + "' is not a valid name", t.column);
    };
    if (head == "monad") {
      if (monad) throw fail("DuplicateName", "second monad header", toks[0].column);
      if (toks.size() < 2) throw fail("BadMonad", "monad header needs a name", toks[0].column);
      MonadDecl m{toks[1].text, {}, 8};
      if (m.kind == "exceptions") {
        for (std::size_t k = 2; k < toks.size(); ++k) m.exceptions.push_back(toks[k].text);
        if (m.exceptions.empty()) throw fail("BadMonad", "exceptions needs at least one name", toks[1].column);
      } else if (m.kind == "list") {
        if (toks.size() > 3) throw fail("BadMonad", "list takes one bound", toks[3].column);
        if (toks.size() == 3) {
          try {
            m.list_bound = std::stoul(toks[2].text);
          } catch (const std::exception&) {
            throw fail("BadMonad", "list bound must be a number", toks[2].column);
          }
        }
      } else if (m.kind == "maybe" || m.kind == "powerset" || m.kind == "dist") {
        if (toks.size() > 2) throw fail("BadMonad", m.kind + " takes no arguments", toks[2].column);
      } else {
        throw fail("BadMonad", "unknown monad '" + m.kind + "'", toks[1].column);
      }
      monad = m;
    } else if (head == "vertex") {
      if (toks.size() != 2) throw fail("BadDeclaration", "expected 'vertex <name>'", toks[0].column);
      check_name(toks[1]);
      if (!vnames.insert(toks[1].text).second) throw fail("DuplicateName", "vertex '" + toks[1].text + "' declared twice", toks[1].column);
      vertices.push_back(toks[1].text);
    } else if (head == "arrow") {
      if (toks.size() != 6 || toks[2].text != ":" || toks[4].text != "->")
        throw fail("BadDeclaration", "expected 'arrow <name> : <src> -> <tgt>'", toks[0].column);
      check_name(toks[1]);
      if (!anames.insert(toks[1].text).second) throw fail("DuplicateName", "arrow '" + toks[1].text + "' declared twice", toks[1].column);
      if (!vnames.count(toks[3].text)) throw fail("UnknownVertex", "unknown vertex '" + toks[3].text + "'", toks[3].column);
      if (!vnames.count(toks[5].text)) throw fail("UnknownVertex", "unknown vertex '" + toks[5].text + "'", toks[5].column);
      arrows.push_back({toks[1].text, toks[3].text, toks[5].text});
    } else if (toks.size() == 3 && toks[1].text == "=") {
      peds.push_back({toks[0].text, toks[2].text, line, toks[0].column, toks[2].column});
    } else {
      throw fail("BadDeclaration", "unrecognised line", toks[0].column);
    }
  }
  Schema bare(Graph(vertices, arrows));
  std::vector<Ped> ps;
  for (const auto& p : peds) {
    auto parse = [&](const std::string& lit, int col) {
      try {
        return bare.parse_path(lit);
      } catch (const ParseError& e) {
        throw ParseError(e.code(), e.detail(), p.line, col);
      }
    };
    auto l = parse(p.lhs, p.lcol);
    auto r = parse(p.rhs, p.rcol);
    if (l.start != r.start || bare.graph().end_of(l) != bare.graph().end_of(r))
      throw ParseError("EndpointMismatch", "PED sides have different endpoints", p.line, p.lcol);
    ps.push_back({l, r});
  }
  return SchemaDocument{Schema(bare.graph(), std::move(ps)), monad};
}

inline std::string print_monad(const MonadDecl& m) {
  std::string s = "monad " + m.kind;
  if (m.kind == "exceptions")
    for (const auto& e : m.exceptions) s += " " + e;
  if (m.kind == "list") s += " " + std::to_string(m.list_bound);
  return s;
}

/// Normal form: monad header, vertices, arrows, PEDs, each in declaration order.
inline std::string print_schema(const Schema& s, const std::optional<MonadDecl>& monad = std::nullopt) {
  std::string out;
  if (monad) out += print_monad(*monad) + "\n";
  const auto& g = s.graph();
  for (const auto& v : g.vertices()) out += "vertex " + v + "\n";
  for (std::size_t a = 0; a < g.arrows().size(); ++a)
    out += "arrow " + g.arrows()[a] + " : " + g.vertices()[g.src(a)] + " -> " + g.vertices()[g.tgt(a)] + "\n";
  for (std::size_t i = 0; i < s.peds().size(); ++i) out += s.render_ped(i) + "\n";
  return out;
}

inline SchemaDocument load_schema(const std::filesystem::path& p) { return parse_schema(detail::read_file(p)); }

/// Parses the text after `monad` in a header, e.g. "list 4" or "exceptions e1 e2".
inline MonadDecl parse_monad_decl(std::string_view text) {
  auto doc = parse_schema("monad " + std::string(text));
  return *doc.monad;
}

/// Calls f with the built-in monad a header names.
template <class F>
decltype(auto) with_monad(const MonadDecl& d, F&& f) {
  if (d.kind == "maybe") return f(ExceptionsMonad::maybe());
  if (d.kind == "exceptions") return f(ExceptionsMonad{d.exceptions});
  if (d.kind == "list") return f(ListMonad{d.list_bound});
  if (d.kind == "powerset") return f(PowersetMonad{});
  if (d.kind == "dist") return f(DistMonad{});
  throw ParseError("BadMonad", "unknown monad '" + d.kind + "'");
}

// ---------------------------------------------------------------------------
// Morphisms

inline SchemaMorphism parse_morphism(std::string_view text, const Schema& source, const Schema& target) {
  std::map<std::string, std::string> vs, as;
  auto lines = detail::lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const int line = static_cast<int>(ln) + 1;
    auto toks = detail::tokenize(detail::strip_comment(lines[ln]));
    if (toks.empty()) continue;
    if (toks.size() != 4 || toks[2].text != "->" || (toks[0].text != "vertex" && toks[0].text != "arrow"))
      throw ParseError("BadDeclaration", "expected 'vertex <c> -> <d>' or 'arrow <a> -> <path>'", line, toks[0].column);
    auto& m = toks[0].text == "vertex" ? vs : as;
    const auto& names = toks[0].text == "vertex" ? source.vertices() : source.arrows();
    if (!names.contains(toks[1].text))
      throw ParseError(toks[0].text == "vertex" ? "UnknownVertex" : "UnknownArrow", "'" + toks[1].text + "' is not in the source schema",
                       line, toks[1].column);
    if (!m.emplace(toks[1].text, toks[3].text).second)
      throw ParseError("DuplicateName", "'" + toks[1].text + "' mapped twice", line, toks[1].column);
    if (toks[0].text == "vertex" && !target.vertices().contains(toks[3].text))
      throw ParseError("UnknownVertex", "'" + toks[3].text + "' is not in the target schema", line, toks[3].column);
    if (toks[0].text == "arrow") {
      try {
        target.parse_path(toks[3].text);
      } catch (const ParseError& e) {
        throw ParseError(e.code(), e.detail(), line, toks[3].column);
      }
    }
  }
  for (const auto& v : source.vertices())
    if (!vs.count(v)) throw ParseError("NotTotal", "no image for vertex '" + v + "'");
  for (const auto& a : source.arrows())
    if (!as.count(a)) throw ParseError("NotTotal", "no image for arrow '" + a + "'");
  return SchemaMorphism::from_names(source, target, vs, as);
}

inline std::string print_morphism(const SchemaMorphism& f) {
  std::string out;
  const auto& sg = f.source.graph();
  for (std::size_t c = 0; c < sg.vertices().size(); ++c)
    out += "vertex " + sg.vertices()[c] + " -> " + f.target.vertices()[f.on_vertices(c)] + "\n";
  for (std::size_t a = 0; a < sg.arrows().size(); ++a)
    out += "arrow " + sg.arrows()[a] + " -> " + f.target.render(f.on_arrows[a]) + "\n";
  return out;
}

inline SchemaMorphism load_morphism(const std::filesystem::path& p, const Schema& source, const Schema& target) {
  return parse_morphism(detail::read_file(p), source, target);
}

// ---------------------------------------------------------------------------
// CSV

inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, in_field = false;
  int line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = in_field = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      in_field = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (in_field || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      in_field = false;
      ++line;
    } else {
      field += c;
      in_field = true;
    }
  }
  if (quoted) throw ParseError("BadCsv", "unterminated quoted field", line, 0);
  if (in_field || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string print_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += csv_field(row[k]);
    }
    out += '\n';
  }
  return out;
}

inline Table parse_table(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty()) throw ParseError("BadHeader", "table has no header");
  Table t{rows[0], {}};
  t.rows.assign(rows.begin() + 1, rows.end());
  return t;
}

inline std::string print_table(const Table& t) {
  std::vector<std::vector<std::string>> rows{t.header};
  rows.insert(rows.end(), t.rows.begin(), t.rows.end());
  return print_csv(rows);
}

/// Reads `<vertex>.csv` for every vertex of the schema.
inline TableSet load_tables(const std::filesystem::path& dir, const Schema& s) {
  TableSet out;
  for (const auto& v : s.vertices()) {
    auto p = dir / (v + ".csv");
    if (!std::filesystem::exists(p)) throw ParseError("MissingTable", "no table file '" + p.string() + "'");
    try {
      out.emplace(v, parse_table(detail::read_file(p)));
    } catch (const ParseError& e) {
      throw ParseError(e.code(), p.string() + ": " + e.detail(), e.line(), e.column());
    }
  }
  return out;
}

inline void save_tables(const std::filesystem::path& dir, const TableSet& tables) {
  std::filesystem::create_directories(dir);
  for (const auto& [v, t] : tables) {
    std::ofstream out(dir / (v + ".csv"), std::ios::binary);
    if (!out) throw Error(ErrorKind::Precondition, "WriteFailed", "cannot write into '" + dir.string() + "'");
    out << print_table(t);
  }
}

/// Tables in schema vertex order, each preceded by "# <vertex>".
inline std::string print_instance(const Instance& i) {
  auto tables = i.to_tables();
  std::string out;
  for (const auto& v : i.schema().vertices()) out += "# " + v + "\n" + print_table(tables.at(v));
  return out;
}

/// Loads tables and checks them structurally; PEDs are left to validate_instance.
inline Instance load_instance(const std::filesystem::path& dir, const Schema& s) {
  return instance_from_tables(s, load_tables(dir, s));
}

// ---------------------------------------------------------------------------
// Instance morphisms: one `<vertex>.csv` per vertex with header `id,value`.

inline InstanceMorphism morphism_from_tables(const Instance& i, const Instance& j, const TableSet& tables) {
  const auto& g = i.schema().graph();
  InstanceMorphism m;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    const auto& name = g.vertices()[v];
    auto it = tables.find(name);
    if (it == tables.end()) throw ParseError("MissingTable", "no component for vertex '" + name + "'");
    if (it->second.header != std::vector<std::string>{"id", "value"})
      throw ParseError("BadHeader", "component '" + name + "' must have header id,value");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& row : it->second.rows) {
      if (row.size() != 2) throw ParseError("BadCell", "component '" + name + "' needs two cells per row");
      pairs.emplace_back(row[0], row[1]);
    }
    try {
      m.components.push_back(FinFunction::from_pairs(i.pk(v), j.pk(v), pairs));
    } catch (const Error& e) {
      throw ParseError("BadCell", "component '" + name + "': " + e.what());
    }
  }
  return m;
}

inline InstanceMorphism load_instance_morphism(const std::filesystem::path& dir, const Instance& i, const Instance& j) {
  TableSet tables;
  for (const auto& v : i.schema().vertices()) {
    auto p = dir / (v + ".csv");
    if (!std::filesystem::exists(p)) throw ParseError("MissingTable", "no component file '" + p.string() + "'");
    tables.emplace(v, parse_table(detail::read_file(p)));
  }
  return morphism_from_tables(i, j, tables);
}

/// Components in vertex order, each preceded by "# <vertex>".
inline std::string print_instance_morphism(const Instance& i, const Instance& j, const InstanceMorphism& m) {
  std::string out;
  const auto& g = i.schema().graph();
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    Table t{{"id", "value"}, {}};
    for (std::size_t x = 0; x < i.pk(v).size(); ++x) t.rows.push_back({i.pk(v)[x], j.pk(v)[m.components[v](x)]});
    out += "# " + g.vertices()[v] + "\n" + print_table(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kleisli instances

/// Headers and ids as for ordinary instances; cells use the monad's syntax.
template <class M>
KleisliInstance<M> kleisli_from_tables(const Schema& s, const M& monad, const TableSet& tables) {
  const auto& g = s.graph();
  KleisliInstance<M> k{s, monad, {}, std::vector<KleisliArrow<M>>(g.arrows().size())};
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    auto it = tables.find(g.vertices()[v]);
    if (it == tables.end()) throw ParseError("MissingTable", "no table for vertex '" + g.vertices()[v] + "'");
    if (it->second.header != header_of(g, v))
      throw ParseError("BadHeader", "table '" + g.vertices()[v] + "' must have header " + detail::join(header_of(g, v), ","));
    std::vector<std::string> ids;
    for (const auto& row : it->second.rows) ids.push_back(row.empty() ? std::string() : row[0]);
    try {
      k.pk.emplace_back(std::move(ids));
    } catch (const Error& e) {
      throw ParseError("BadCell", "table '" + g.vertices()[v] + "': " + e.what());
    }
  }
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    auto cols = columns_of(g, v);
    for (const auto& row : tables.at(g.vertices()[v]).rows) {
      if (row.size() > cols.size() + 1) throw ParseError("BadCell", "row '" + row[0] + "' has more cells than columns");
      for (std::size_t c = 0; c < cols.size(); ++c) {
        std::string cell = c + 1 < row.size() ? row[c + 1] : std::string();
        k.fk[cols[c]].push_back(monad.parse(cell, k.pk[g.tgt(cols[c])]));
      }
    }
  }
  return k;
}

template <class M>
TableSet kleisli_to_tables(const KleisliInstance<M>& k) {
  const auto& g = k.schema.graph();
  TableSet out;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    Table t{header_of(g, v), {}};
    auto cols = columns_of(g, v);
    for (std::size_t x = 0; x < k.pk[v].size(); ++x) {
      std::vector<std::string> row{k.pk[v][x]};
      for (auto a : cols) row.push_back(k.monad.render(k.fk[a][x], k.pk[g.tgt(a)]));
      t.rows.push_back(std::move(row));
    }
    out.emplace(g.vertices()[v], std::move(t));
  }
  return out;
}

/// Rows of a Kleisli arrow as CSV: `id,<value>`.
template <class M>
std::string print_kleisli_arrow(const M& m, const FinSet& dom, const FinSet& cod, const KleisliArrow<M>& f) {
  std::vector<std::vector<std::string>> rows{{"id", "value"}};
  for (std::size_t x = 0; x < f.size(); ++x) rows.push_back({dom[x], m.render(f[x], cod)});
  return print_csv(rows);
}

}  // namespace catdb
