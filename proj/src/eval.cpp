#include "fostat/eval.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <thread>
#include <unordered_map>

namespace fostat {

namespace {

// Per-structure evaluation engine: caches per-source BFS distances and
// memoizes quantified sub-formulas keyed by (node id, relevant assignment).
class Evaluator {
 public:
  Evaluator(const Structure& s, const EvalOptions& opts) : s_(s), opts_(opts) {
    dist_cache_.resize(s.size());
  }

  bool eval(const Formula& f, std::vector<int>& env) {
    switch (f->kind) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Rel: {
        int rel = rel_index(f);
        Tuple t(f->args.size());
        for (size_t i = 0; i < f->args.size(); ++i) t[i] = vertex(f->args[i], env);
        return s_.has_tuple(rel, t);
      }
      case FormulaKind::Eq:
        return vertex(f->args[0], env) == vertex(f->args[1], env);
      case FormulaKind::Dist: {
        int d = dist(vertex(f->args[0], env), vertex(f->args[1], env));
        int b = static_cast<int>(f->bound);
        switch (f->cmp) {
          case DistCmp::Leq: return distance_leq(d, b);
          case DistCmp::Gt: return !distance_leq(d, b);
          case DistCmp::Eq: return d != kInfiniteDistance && d == b;
        }
        return false;
      }
      case FormulaKind::Not:
        return !eval(f->left, env);
      case FormulaKind::And:
        return eval(f->left, env) && eval(f->right, env);
      case FormulaKind::Or:
        return eval(f->left, env) || eval(f->right, env);
      case FormulaKind::Implies:
        return !eval(f->left, env) || eval(f->right, env);
      case FormulaKind::Exists:
      case FormulaKind::Forall:
      case FormulaKind::CountGE:
      case FormulaKind::CountLE:
        return quantified(f, env);
    }
    return false;
  }

 private:
  int vertex(int var, const std::vector<int>& env) const {
    if (var >= static_cast<int>(env.size()) || env[var] < 0)
      throw DomainError("free variable x" + std::to_string(var) + " is not assigned");
    return env[var];
  }

  int rel_index(const Formula& f) {
    auto it = rel_index_.find(f->rel);
    if (it != rel_index_.end()) return it->second;
    int idx = s_.signature().index_of(f->rel);
    if (idx < 0) throw DomainError("formula uses relation '" + f->rel + "' absent from signature");
    if (s_.signature().relations[idx].arity != static_cast<int>(f->args.size()))
      throw DomainError("relation '" + f->rel + "' arity mismatch");
    rel_index_.emplace(f->rel, idx);
    return idx;
  }

  int dist(int u, int v) {
    if (u == v) return 0;
    if (dist_cache_[u].empty()) dist_cache_[u] = bfs_distances(s_, {u});
    return dist_cache_[u][v];
  }

  bool quantified(const Formula& f, std::vector<int>& env) {
    const auto& fv = node_free_vars(f);
    CacheKey key;
    key.node = f->id;
    key.assignment.reserve(fv.size());
    for (int v : fv) key.assignment.push_back(vertex(v, env));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    if (static_cast<int>(env.size()) <= f->var) env.resize(f->var + 1, -1);
    int saved = env[f->var];
    long long hits = 0;
    bool result;
    long long bound = f->bound;
    bool done = false;
    result = (f->kind == FormulaKind::Forall) || (f->kind == FormulaKind::CountLE) ||
             (f->kind == FormulaKind::CountGE && bound == 0);
    for (int v = 0; v < s_.size() && !done; ++v) {
      env[f->var] = v;
      bool sat = eval(f->left, env);
      switch (f->kind) {
        case FormulaKind::Exists:
          if (sat) {
            result = true;
            done = true;
          }
          break;
        case FormulaKind::Forall:
          if (!sat) {
            result = false;
            done = true;
          }
          break;
        case FormulaKind::CountGE:
          if (sat && ++hits >= bound) {
            result = true;
            done = true;
          }
          break;
        case FormulaKind::CountLE:
          if (sat && ++hits > bound) {
            result = false;
            done = true;
          }
          break;
        default:
          break;
      }
    }
    env[f->var] = saved;

    if (cache_.size() >= opts_.cache_capacity) cache_.clear();
    cache_.emplace(std::move(key), result);
    return result;
  }

  const std::vector<int>& node_free_vars(const Formula& f) {
    auto it = free_vars_.find(f->id);
    if (it != free_vars_.end()) return it->second;
    return free_vars_.emplace(f->id, free_vars(f)).first->second;
  }

  struct CacheKey {
    std::uint64_t node;
    std::vector<int> assignment;
    friend bool operator==(const CacheKey&, const CacheKey&) = default;
  };
  struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const {
      std::size_t h = std::hash<std::uint64_t>{}(k.node);
      for (int v : k.assignment) h = h * 1000003u + static_cast<std::size_t>(v) + 0x9e3779b9u;
      return h;
    }
  };

  const Structure& s_;
  const EvalOptions& opts_;
  std::vector<std::vector<int>> dist_cache_;
  std::unordered_map<std::string, int> rel_index_;
  std::unordered_map<std::uint64_t, std::vector<int>> free_vars_;
  std::unordered_map<CacheKey, bool, CacheKeyHash> cache_;
};

void check_work(const Structure& s, const Formula& f, const EvalOptions& opts) {
  if (opts.override_work_limit) return;
  auto fv = free_vars(f);
  Integer work = ipow(Integer(std::max(s.size(), 1)),
                      static_cast<unsigned>(fv.size() + static_cast<size_t>(qrank(f))));
  if (work > opts.work_limit)
    throw WorkLimitError("enumeration size " + work.str() + " exceeds work limit " +
                         opts.work_limit.str() + " (override to proceed)");
}

// Count solutions of a packed formula with free vars x1..xp over all tuples
// with the first variable restricted to [lo,hi).
Integer count_range(const Structure& s, const Formula& f, int p, int lo, int hi,
                    const EvalOptions& opts) {
  Evaluator ev(s, opts);
  std::vector<int> env(p + 1, -1);
  Integer count = 0;

  std::optional<int> local_radius;
  if (opts.use_locality && p >= 1) {
    auto m = meta(f);
    local_radius = m.locality_radius;
  }

  std::vector<int> tuple(p, 0);
  auto run_tuple = [&]() {
    if (local_radius) {
      VertexSet centers(tuple.begin(), tuple.end());
      std::sort(centers.begin(), centers.end());
      centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
      auto br = induced(s, ball(s, centers, *local_radius));
      std::vector<int> relabel(s.size(), -1);
      for (size_t i = 0; i < br.vertex_map.size(); ++i) relabel[br.vertex_map[i]] = (int)i;
      Evaluator inner(br.structure, opts);
      std::vector<int> ienv(p + 1, -1);
      for (int i = 0; i < p; ++i) ienv[i + 1] = relabel[tuple[i]];
      if (inner.eval(f, ienv)) ++count;
    } else {
      for (int i = 0; i < p; ++i) env[i + 1] = tuple[i];
      if (ev.eval(f, env)) ++count;
    }
  };

  // odometer over the tuple space, leftmost slot restricted to [lo,hi)
  if (p == 0) return Integer(ev.eval(f, env) ? 1 : 0);
  for (tuple[0] = lo; tuple[0] < hi; ++tuple[0]) {
    int slot = 1;
    std::fill(tuple.begin() + 1, tuple.end(), 0);
    while (true) {
      run_tuple();
      slot = p - 1;
      while (slot >= 1 && ++tuple[slot] == s.size()) {
        tuple[slot] = 0;
        --slot;
      }
      if (slot < 1) break;
    }
  }
  return count;
}

Integer count_solutions(const Structure& s, const Formula& packed, int p, const EvalOptions& opts) {
  int threads = std::max(1, opts.threads);
  if (threads == 1 || p == 0 || s.size() < 2 * threads)
    return count_range(s, packed, p, 0, s.size(), opts);

  std::vector<Integer> partial(threads, Integer(0));
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  int chunk = (s.size() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int lo = t * chunk;
    int hi = std::min(s.size(), lo + chunk);
    workers.emplace_back([&, t, lo, hi] {
      try {
        if (lo < hi) partial[t] = count_range(s, packed, p, lo, hi, opts);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Integer total = 0;
  for (const auto& c : partial) total += c;  // integer sum: order-independent
  return total;
}

// Group packed-conjunction factors by shared free variables; singleton-free
// grouping enables the product law.
std::vector<Formula> independent_factors(const Formula& f) {
  std::vector<Formula> conjuncts;
  std::function<void(const Formula&)> flatten = [&](const Formula& g) {
    if (g->kind == FormulaKind::And) {
      flatten(g->left);
      flatten(g->right);
    } else {
      conjuncts.push_back(g);
    }
  };
  flatten(f);
  if (conjuncts.size() < 2) return {};

  std::vector<std::vector<int>> fvs;
  for (const auto& c : conjuncts) fvs.push_back(free_vars(c));

  // union-find over conjunct indices, joined by shared variables
  std::vector<int> parent(conjuncts.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::map<int, int> var_owner;
  for (size_t i = 0; i < conjuncts.size(); ++i)
    for (int v : fvs[i]) {
      auto [it, fresh] = var_owner.emplace(v, static_cast<int>(i));
      if (!fresh) parent[find(static_cast<int>(i))] = find(it->second);
    }

  std::map<int, Formula> groups;  // root -> conjunction, in input order
  for (size_t i = 0; i < conjuncts.size(); ++i) {
    int root = find(static_cast<int>(i));
    auto it = groups.find(root);
    if (it == groups.end())
      groups.emplace(root, conjuncts[i]);
    else
      it->second = f_and(it->second, conjuncts[i]);
  }
  if (groups.size() < 2) return {};
  std::vector<Formula> out;
  for (auto& [root, g] : groups) out.push_back(std::move(g));
  return out;
}

}  // namespace

bool satisfies(const Structure& s, const Formula& f, const Assignment& a,
               const EvalOptions& opts) {
  check_against_signature(f, s.signature());
  auto fv = free_vars(f);
  int max_var = fv.empty() ? 0 : fv.back();
  std::vector<int> env(max_var + 1, -1);
  for (int v : fv) {
    auto it = a.find(v);
    if (it == a.end())
      throw DomainError("assignment does not cover free variable x" + std::to_string(v));
    s.check_vertex(it->second);
    env[v] = it->second;
  }
  Evaluator ev(s, opts);
  return ev.eval(f, env);
}

Integer solution_count(const Structure& s, const Formula& f, const EvalOptions& opts) {
  check_against_signature(f, s.signature());
  check_work(s, f, opts);
  Formula packed = pack(f);
  int p = static_cast<int>(free_vars(packed).size());
  return count_solutions(s, packed, p, opts);
}

Pairing stone_pairing(const Structure& s, const Formula& f, const EvalOptions& opts) {
  if (s.size() < 1) throw DomainError("stone_pairing requires a non-empty domain");
  check_against_signature(f, s.signature());
  check_work(s, f, opts);
  Formula packed = pack(f);
  auto fv = free_vars(packed);
  int p = static_cast<int>(fv.size());
  Integer den = ipow(Integer(s.size()), static_cast<unsigned>(p));

  if (opts.product_rule) {
    auto factors = independent_factors(packed);
    if (!factors.empty()) {
      // Product law for conjunctions with pairwise disjoint free variables:
      // the group counts multiply and the group denominators multiply to n^p.
      Integer count = 1;
      for (const auto& g : factors) {
        Pairing part = stone_pairing(s, g, opts);
        count *= part.count;
        if (count == 0) break;
      }
      return {count, den};
    }
  }

  Integer count = count_solutions(s, packed, p, opts);
  return {count, den};
}

std::vector<Tuple> solution_set(const Structure& s, const Formula& f, int p,
                                const EvalOptions& opts) {
  if (p < 0) throw DomainError("solution_set needs a non-negative arity");
  check_against_signature(f, s.signature());
  auto fv = free_vars(f);
  if (!fv.empty() && fv.back() > p)
    throw DomainError("formula uses x" + std::to_string(fv.back()) + " beyond arity " +
                      std::to_string(p));
  if (!opts.override_work_limit) {
    Integer work = ipow(Integer(std::max(s.size(), 1)),
                        static_cast<unsigned>(p + qrank(f)));
    if (work > opts.work_limit)
      throw WorkLimitError("enumeration size " + work.str() + " exceeds work limit " +
                           opts.work_limit.str() + " (override to proceed)");
  }

  std::vector<Tuple> out;
  Evaluator ev(s, opts);
  std::vector<int> env(p + 1, -1);
  if (p == 0) {
    if (ev.eval(f, env)) out.push_back({});
    return out;
  }
  std::vector<int> tuple(p, 0);
  while (true) {
    for (int i = 0; i < p; ++i) env[i + 1] = tuple[i];
    if (ev.eval(f, env)) out.push_back(tuple);
    int slot = p - 1;
    while (slot >= 0 && ++tuple[slot] == s.size()) {
      tuple[slot] = 0;
      --slot;
    }
    if (slot < 0) break;
  }
  return out;
}

std::vector<std::pair<Formula, Pairing>> pairing_vector(const Structure& s,
                                                        const std::vector<Formula>& catalog,
                                                        const EvalOptions& opts) {
  std::vector<std::pair<Formula, Pairing>> out;
  out.reserve(catalog.size());
  for (const auto& f : catalog) out.emplace_back(f, stone_pairing(s, f, opts));
  return out;
}

bool validate_locality(const Structure& s, const Formula& f, int r, const EvalOptions& opts) {
  check_against_signature(f, s.signature());
  check_work(s, f, opts);
  Formula packed = pack(f);
  int p = static_cast<int>(free_vars(packed).size());
  if (p == 0) return true;

  Evaluator full(s, opts);
  std::vector<int> env(p + 1, -1);
  std::vector<int> tuple(p, 0);
  while (true) {
    for (int i = 0; i < p; ++i) env[i + 1] = tuple[i];
    bool whole = full.eval(packed, env);

    VertexSet centers(tuple.begin(), tuple.end());
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    auto br = induced(s, ball(s, centers, r));
    std::vector<int> relabel(s.size(), -1);
    for (size_t i = 0; i < br.vertex_map.size(); ++i) relabel[br.vertex_map[i]] = (int)i;
    Evaluator inner(br.structure, opts);
    std::vector<int> ienv(p + 1, -1);
    for (int i = 0; i < p; ++i) ienv[i + 1] = relabel[tuple[i]];
    if (inner.eval(packed, ienv) != whole) return false;

    int slot = p - 1;
    while (slot >= 0 && ++tuple[slot] == s.size()) {
      tuple[slot] = 0;
      --slot;
    }
    if (slot < 0) break;
  }
  return true;
}

}  // namespace fostat
