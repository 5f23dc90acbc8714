// Independent reference implementations for the tests: a naive recursive
// evaluator, its own Gaifman/BFS machinery built straight from the tuple
// sets, and seeded random structure/formula generators. Deliberately shares
// no logic with the library evaluator beyond the AST data type.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "fostat/core.hpp"
#include "fostat/formula.hpp"
#include "fostat/rational.hpp"

namespace oracle {

inline std::vector<std::set<int>> gaifman(const fostat::Structure& s) {
  std::vector<std::set<int>> adj(s.size());
  for (size_t rel = 0; rel < s.signature().relations.size(); ++rel)
    for (const auto& t : s.tuples(static_cast<int>(rel)))
      for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = 0; j < t.size(); ++j)
          if (t[i] != t[j]) adj[t[i]].insert(t[j]);
  return adj;
}

// plain queue-free BFS: repeated relaxation until stable (slow, simple)
inline std::vector<int> distances(const std::vector<std::set<int>>& adj, int src) {
  const int inf = 1 << 29;
  std::vector<int> d(adj.size(), inf);
  d[src] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t v = 0; v < adj.size(); ++v)
      for (int w : adj[v])
        if (d[v] + 1 < d[w]) {
          d[w] = d[v] + 1;
          changed = true;
        }
  }
  for (auto& x : d)
    if (x >= inf) x = -1;
  return d;
}

inline void collect_free(const fostat::Formula& f, std::set<int>& out) {
  using fostat::FormulaKind;
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Rel:
    case FormulaKind::Eq:
    case FormulaKind::Dist:
      for (int v : f->args) out.insert(v);
      return;
    case FormulaKind::Not:
      collect_free(f->left, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      collect_free(f->left, out);
      collect_free(f->right, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::CountGE:
    case FormulaKind::CountLE: {
      std::set<int> inner;
      collect_free(f->left, inner);
      inner.erase(f->var);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

struct Evaluator {
  const fostat::Structure& s;
  std::vector<std::set<int>> adj;
  std::map<int, std::vector<int>> dist_rows;

  explicit Evaluator(const fostat::Structure& str) : s(str), adj(gaifman(str)) {}

  int dist(int u, int v) {
    auto it = dist_rows.find(u);
    if (it == dist_rows.end()) it = dist_rows.emplace(u, distances(adj, u)).first;
    return it->second[v];
  }

  bool holds(const fostat::Formula& f, std::map<int, int>& env) {
    using fostat::FormulaKind;
    switch (f->kind) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Rel: {
        int rel = s.signature().index_of(f->rel);
        fostat::Tuple t;
        for (int v : f->args) t.push_back(env.at(v));
        for (const auto& have : s.tuples(rel))
          if (have == t) return true;
        return false;
      }
      case FormulaKind::Eq:
        return env.at(f->args[0]) == env.at(f->args[1]);
      case FormulaKind::Dist: {
        int d = dist(env.at(f->args[0]), env.at(f->args[1]));
        bool finite = d >= 0;
        switch (f->cmp) {
          case fostat::DistCmp::Leq:
            return finite && d <= f->bound;
          case fostat::DistCmp::Gt:
            return !finite || d > f->bound;
          case fostat::DistCmp::Eq:
            return finite && d == f->bound;
        }
        return false;
      }
      case FormulaKind::Not:
        return !holds(f->left, env);
      case FormulaKind::And:
        return holds(f->left, env) && holds(f->right, env);
      case FormulaKind::Or:
        return holds(f->left, env) || holds(f->right, env);
      case FormulaKind::Implies:
        return !holds(f->left, env) || holds(f->right, env);
      case FormulaKind::Exists:
      case FormulaKind::Forall:
      case FormulaKind::CountGE:
      case FormulaKind::CountLE: {
        long long hits = 0;
        auto saved = env.find(f->var) != env.end() ? std::optional<int>(env[f->var])
                                                   : std::optional<int>();
        for (int v = 0; v < s.size(); ++v) {
          env[f->var] = v;
          if (holds(f->left, env)) ++hits;
        }
        if (saved)
          env[f->var] = *saved;
        else
          env.erase(f->var);
        switch (f->kind) {
          case FormulaKind::Exists:
            return hits > 0;
          case FormulaKind::Forall:
            return hits == s.size();
          case FormulaKind::CountGE:
            return hits >= f->bound;
          default:
            return hits <= f->bound;
        }
      }
    }
    return false;
  }
};

// |Omega| over assignments to the free variables, plus the n^|Fv| denominator
inline std::pair<fostat::Integer, fostat::Integer> count(const fostat::Structure& s,
                                                         const fostat::Formula& f) {
  std::set<int> fv;
  collect_free(f, fv);
  std::vector<int> vars(fv.begin(), fv.end());
  Evaluator ev(s);
  fostat::Integer total = 0;
  fostat::Integer den = 1;
  for (size_t i = 0; i < vars.size(); ++i) den *= s.size();

  std::map<int, int> env;
  std::vector<int> tuple(vars.size(), 0);
  while (true) {
    for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = tuple[i];
    if (ev.holds(f, env)) ++total;
    if (vars.empty()) break;
    size_t slot = vars.size() - 1;
    while (true) {
      if (++tuple[slot] < s.size()) break;
      tuple[slot] = 0;
      if (slot == 0) goto done;
      --slot;
    }
  }
done:
  return {total, den};
}

inline fostat::Rational pairing(const fostat::Structure& s, const fostat::Formula& f) {
  auto [num, den] = count(s, f);
  return fostat::Rational(num, den);
}

// --- seeded random inputs ---

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int below(int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }
  bool coin() { return (gen() & 1) != 0; }
};

inline fostat::Structure random_graph(Rng& rng, int n, int percent_edges) {
  std::vector<fostat::Tuple> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.below(100) < percent_edges) edges.push_back({i, j});
  return fostat::Structure({{{"adj", 2, true}}}, n, {std::move(edges)});
}

inline fostat::Structure random_rooted_tree(Rng& rng, int n) {
  std::vector<fostat::Tuple> edges;
  for (int i = 1; i < n; ++i) edges.push_back({rng.below(i), i});
  return fostat::Structure({{{"adj", 2, true}, {"R", 1, false}}}, n,
                           {std::move(edges), {{0}}});
}

// random formula over a signature: bounded depth, variable pool x1..x_pool
inline fostat::Formula random_formula(Rng& rng, const fostat::Signature& sig, int pool,
                                      int depth) {
  using namespace fostat;
  auto var = [&] { return 1 + rng.below(pool); };
  if (depth <= 0) {
    int pick = rng.below(static_cast<int>(sig.relations.size()) + 2);
    if (pick < static_cast<int>(sig.relations.size())) {
      const auto& rel = sig.relations[pick];
      std::vector<int> args;
      for (int i = 0; i < rel.arity; ++i) args.push_back(var());
      return f_rel(rel.name, args);
    }
    if (pick == static_cast<int>(sig.relations.size())) return f_eq(var(), var());
    return f_dist(var(), var(), DistCmp::Leq, 1 + rng.below(3));
  }
  switch (rng.below(6)) {
    case 0:
      return f_not(random_formula(rng, sig, pool, depth - 1));
    case 1:
      return f_and(random_formula(rng, sig, pool, depth - 1),
                   random_formula(rng, sig, pool, depth - 1));
    case 2:
      return f_or(random_formula(rng, sig, pool, depth - 1),
                  random_formula(rng, sig, pool, depth - 1));
    case 3:
      return f_exists(var(), random_formula(rng, sig, pool, depth - 1));
    case 4:
      return f_forall(var(), random_formula(rng, sig, pool, depth - 1));
    default:
      return f_count_ge(1 + rng.below(3), var(), random_formula(rng, sig, pool, depth - 1));
  }
}

}  // namespace oracle
