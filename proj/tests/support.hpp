#pragma once

// Shared generators and fixtures for the test executables.

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "catdb.hpp"

namespace catdb::testing {

inline std::filesystem::path data_dir() { return CATDB_DATA_DIR; }

inline SchemaDocument load_doc(const std::string& rel) { return load_schema(data_dir() / rel); }
inline Schema load(const std::string& rel) { return load_doc(rel).schema; }
inline Instance load_inst(const Schema& s, const std::string& rel) { return load_instance(data_dir() / rel, s); }

/// Fixed seed so every run sees the same cases.
inline std::mt19937& rng() {
  static std::mt19937 gen(20240611u);
  return gen;
}

/// Sets named "<prefix>1".."<prefix>n".
inline FinSet named_set(const std::string& prefix, std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back(prefix + std::to_string(i));
  return FinSet(std::move(v));
}

/// Every function table {0..n-1} -> {0..m-1}, in lexicographic order.
inline std::vector<std::vector<std::size_t>> all_tables(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  if (m == 0 && n > 0) return out;
  std::vector<std::size_t> t(n, 0);
  while (true) {
    out.push_back(t);
    std::size_t i = n;
    while (i > 0 && ++t[i - 1] == m) t[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

inline std::vector<FinFunction> all_functions(const FinSet& x, const FinSet& y) {
  std::vector<FinFunction> out;
  for (auto& t : all_tables(x.size(), y.size())) out.emplace_back(x, y, std::move(t));
  return out;
}

inline FinFunction random_function(const FinSet& x, const FinSet& y) {
  std::vector<std::size_t> t(x.size());
  if (x.empty()) return FinFunction(x, y, std::move(t));
  std::uniform_int_distribution<std::size_t> pick(0, y.size() - 1);
  for (auto& v : t) v = pick(rng());
  return FinFunction(x, y, std::move(t));
}

inline std::size_t random_size(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng());
}

/// m with f.f = f.
inline Schema idempotent_loop() {
  Graph g({"m"}, {{"f", "m", "m"}});
  return Schema(g, {{Path{0, {0, 0}}, Path{0, {0}}}});
}

/// Discrete schema on n vertices to one on m; vertex k goes to images[k].
inline SchemaMorphism discrete_map(std::size_t n, std::size_t m, const std::vector<std::string>& images) {
  auto src = discrete_schema(n), tgt = discrete_schema(m);
  std::map<std::string, std::string> vs;
  for (std::size_t k = 0; k < n; ++k) vs[src.vertices()[k]] = images[k];
  return SchemaMorphism::from_names(src, tgt, vs, {});
}

/// The three morphisms the adjunction checks run over: a fold 2 -> 1, a
/// partial fold 3 -> 2, and the arrow [1] onto an idempotent loop.
inline std::vector<SchemaMorphism> fixed_morphisms() {
  auto chain = Schema(chain_graph(1));
  auto idem = idempotent_loop();
  return {discrete_map(2, 1, {"1", "1"}), discrete_map(3, 2, {"1", "2", "2"}),
          SchemaMorphism::from_names(chain, idem, {{"v0", "m"}, {"v1", "m"}}, {{"a1", "m.f"}})};
}

/// Every instance on `s` whose tables each have at most `max_rows` rows,
/// with rows named "<vertex><k>". PEDs are enforced.
inline std::vector<Instance> small_instances(const Schema& s, std::size_t max_rows) {
  const auto& g = s.graph();
  std::vector<Instance> out;
  std::vector<std::size_t> sizes(g.vertices().size(), 0);
  while (true) {
    std::vector<FinSet> pk;
    for (std::size_t v = 0; v < sizes.size(); ++v) pk.push_back(named_set(g.vertices()[v], sizes[v]));
    std::vector<std::vector<std::vector<std::size_t>>> choices;
    bool possible = true;
    for (std::size_t a = 0; a < g.arrows().size(); ++a) {
      choices.push_back(all_tables(sizes[g.src(a)], sizes[g.tgt(a)]));
      if (choices.back().empty()) possible = false;
    }
    if (possible) {
      std::vector<std::size_t> pick(choices.size(), 0);
      while (true) {
        std::vector<FinFunction> fk;
        for (std::size_t a = 0; a < choices.size(); ++a) fk.emplace_back(pk[g.src(a)], pk[g.tgt(a)], choices[a][pick[a]]);
        Instance i(s, pk, std::move(fk));
        if (validate_instance(i)) out.push_back(std::move(i));
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
        if (k == pick.size()) break;
      }
    }
    std::size_t v = 0;
    while (v < sizes.size() && ++sizes[v] > max_rows) sizes[v++] = 0;
    if (v == sizes.size()) break;
  }
  return out;
}

/// Table rows as a sorted multiset, for comparisons that ignore row order.
inline std::vector<std::vector<std::string>> sorted_rows(Table t) {
  std::sort(t.rows.begin(), t.rows.end());
  return t.rows;
}

}  // namespace catdb::testing
