#include "fostat/sequence.hpp"

#include <algorithm>
#include <set>

namespace fostat {

Rational residual_index(const Structure& s, int r) {
  if (s.size() < 1) throw DomainError("residual_index requires a non-empty domain");
  if (r < 0) throw DomainError("radius must be non-negative");
  size_t best = 0;
  for (int v = 0; v < s.size(); ++v) best = std::max(best, ball(s, v, r).size());
  return Rational(Integer(best), Integer(s.size()));
}

std::vector<Rational> dispersion_profile(const Structure& s, int root, int d_max) {
  s.check_vertex(root);
  if (d_max < 0) throw DomainError("d_max must be non-negative");
  auto dist = bfs_distances(s, {root});
  std::vector<int> counts(d_max + 1, 0);
  for (int v = 0; v < s.size(); ++v)
    if (dist[v] != kInfiniteDistance && dist[v] <= d_max) ++counts[dist[v]];
  std::vector<Rational> profile(d_max + 1);
  int within = 0;
  for (int d = 0; d <= d_max; ++d) {
    within += counts[d];
    profile[d] = Rational(within, s.size());
  }
  return profile;
}

namespace {

bool disjoint_sorted(const VertexSet& a, const VertexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else
      return false;
  }
  return true;
}

}  // namespace

BreakResult break_cover(const Structure& s, const Rational& epsilon, int r) {
  if (s.size() < 1) throw DomainError("break_cover requires a non-empty domain");
  if (epsilon <= 0 || epsilon > 1) throw DomainError("epsilon must lie in (0,1]");
  if (r < 0) throw DomainError("radius must be non-negative");

  Rational threshold = epsilon * s.size();
  std::vector<VertexSet> balls(s.size());
  std::vector<int> candidates;
  for (int v = 0; v < s.size(); ++v) {
    balls[v] = ball(s, v, r);
    if (Rational(balls[v].size()) >= threshold) candidates.push_back(v);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    if (balls[a].size() != balls[b].size()) return balls[a].size() > balls[b].size();
    return a < b;
  });

  BreakResult out;
  out.epsilon = epsilon;
  out.r = r;
  std::vector<char> taken(s.size(), 0);
  for (int v : candidates) {
    bool free = true;
    for (int w : balls[v])
      if (taken[w]) {
        free = false;
        break;
      }
    if (!free) continue;
    out.centers.push_back(v);
    for (int w : balls[v]) taken[w] = 1;
  }
  out.cover = ball(s, out.centers, 2 * r);
  return out;
}

bool BreakResult::check(const Structure& s) const {
  Rational threshold = epsilon * s.size();
  if (Rational(centers.size()) > Rational(1) / epsilon) return false;
  std::vector<VertexSet> center_balls;
  for (int c : centers) {
    if (Rational(ball(s, c, 2 * r).size()) < threshold) return false;
    center_balls.push_back(ball(s, c, r));
  }
  for (size_t i = 0; i < center_balls.size(); ++i)
    for (size_t j = i + 1; j < center_balls.size(); ++j)
      if (!disjoint_sorted(center_balls[i], center_balls[j])) return false;
  for (int v : complement(s, cover))
    if (Rational(ball(s, v, r).size()) >= threshold) return false;
  return ball(s, centers, 2 * r) == cover;
}

SplitResult split_by_centers(const Structure& s, const std::vector<int>& centers, int d) {
  if (d < 0) throw DomainError("radius must be non-negative");
  for (int c : centers) s.check_vertex(c);
  if (s.signature().index_of("C") >= 0)
    throw DomainError("signature already uses the center mark 'C'");

  std::vector<char> owned(s.size(), 0);
  std::vector<VertexSet> balls;
  for (int c : centers) {
    balls.push_back(ball(s, c, d));
    for (int v : balls.back()) {
      if (owned[v])
        throw DomainError("d-balls around centers overlap at vertex " + std::to_string(v));
      owned[v] = 1;
    }
  }

  Signature marked = s.signature();
  marked.relations.push_back({"C", 1, false});

  SplitResult out;
  out.d = d;
  for (size_t i = 0; i < centers.size(); ++i) {
    auto ir = induced(s, balls[i]);
    std::vector<std::vector<Tuple>> tuples;
    for (size_t rel = 0; rel < s.signature().relations.size(); ++rel)
      tuples.push_back(ir.structure.tuples(static_cast<int>(rel)));
    int local = static_cast<int>(
        std::lower_bound(ir.vertex_map.begin(), ir.vertex_map.end(), centers[i]) -
        ir.vertex_map.begin());
    tuples.push_back({{local}});
    out.parts.emplace_back(marked, ir.structure.size(), std::move(tuples));
    out.part_vertices.push_back(std::move(ir.vertex_map));
  }

  VertexSet rest;
  for (int v = 0; v < s.size(); ++v)
    if (!owned[v]) rest.push_back(v);
  auto ir = induced(s, rest);
  out.residue = std::move(ir.structure);
  out.residue_vertices = std::move(ir.vertex_map);
  return out;
}

std::vector<Formula> formula_catalog(const Signature& sig, int n_max, int budget) {
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  if (budget < 0) throw DomainError("catalog budget must be non-negative");

  // the catalog reaches one level past n_max so that level n_max itself can
  // be refuted by a formula of the next complexity class (e.g. an atom with
  // two free variables when n_max is 1)
  std::vector<Formula> catalog;
  std::set<std::string> seen;
  auto admit = [&](const Formula& f) {
    if (static_cast<int>(catalog.size()) >= budget) return;
    if (qrank(f) + static_cast<int>(free_vars(f).size()) > n_max + 1) return;
    Formula g = normalize(f);
    if (seen.insert(print_formula(g)).second) catalog.push_back(g);
  };

  int pool = n_max + 1;

  // atoms: every relation applied to every tuple of pool variables, plus
  // equalities; generation order is frozen (tests rely on it)
  for (const auto& rel : sig.relations) {
    std::vector<int> args(rel.arity, 1);
    while (true) {
      admit(f_rel(rel.name, args));
      int slot = rel.arity - 1;
      while (slot >= 0 && ++args[slot] > pool) {
        args[slot] = 1;
        --slot;
      }
      if (slot < 0) break;
    }
  }
  for (int i = 1; i <= pool; ++i)
    for (int j = i; j <= pool; ++j) admit(f_eq(i, j));

  size_t atoms = catalog.size();
  for (size_t i = 0; i < atoms; ++i) admit(f_not(catalog[i]));
  for (size_t i = 0; i < atoms; ++i)
    for (size_t j = i; j < atoms; ++j) admit(f_and(catalog[i], catalog[j]));

  // one quantifier layer over everything built so far
  size_t open = catalog.size();
  for (size_t i = 0; i < open; ++i)
    for (int v : free_vars(catalog[i])) {
      admit(f_exists(v, catalog[i]));
      admit(f_forall(v, catalog[i]));
    }
  return catalog;
}

Rational pseudo_distance(const Structure& s1, const Structure& s2, int n_max, int catalog_budget,
                         const EvalOptions& opts) {
  if (s1.signature() != s2.signature()) throw DomainError("pseudo_distance needs equal signatures");
  auto catalog = formula_catalog(s1.signature(), n_max, catalog_budget);

  Rational worst = 0;
  for (const auto& f : catalog) {
    Rational diff = stone_pairing(s1, f, opts).value() - stone_pairing(s2, f, opts).value();
    if (diff < 0) diff = -diff;
    worst = std::max(worst, diff);
  }
  // largest n <= n_max with every catalog difference below 2^{-n}
  int star = 0;
  for (int n = n_max; n >= 1; --n) {
    if (worst < Rational(1, ipow(Integer(2), static_cast<unsigned>(n)))) {
      star = n;
      break;
    }
  }
  return Rational(1, ipow(Integer(2), static_cast<unsigned>(star)));
}

ConvergenceReport convergence_report(const std::function<Structure(int)>& family,
                                     const std::vector<int>& grid,
                                     const std::vector<Formula>& catalog,
                                     const std::vector<int>& radii, int window,
                                     const EvalOptions& opts) {
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw DomainError("grid must be strictly ascending");
  if (window < 1) throw DomainError("window must be positive");

  ConvergenceReport report;
  report.window = window;
  report.trajectories.resize(catalog.size());
  for (size_t i = 0; i < catalog.size(); ++i) report.trajectories[i].formula = catalog[i];
  report.residuals.resize(radii.size());
  for (size_t i = 0; i < radii.size(); ++i) report.residuals[i].r = radii[i];

  for (int n : grid) {
    Structure s = family(n);
    for (size_t i = 0; i < catalog.size(); ++i)
      report.trajectories[i].points.emplace_back(n, stone_pairing(s, catalog[i], opts));
    for (size_t i = 0; i < radii.size(); ++i)
      report.residuals[i].points.emplace_back(n, residual_index(s, radii[i]));
  }

  for (auto& t : report.trajectories) {
    size_t tail = std::min<size_t>(window, t.points.size());
    Rational lo, hi;
    bool first = true;
    for (size_t i = t.points.size() - tail; i < t.points.size(); ++i) {
      Rational v = t.points[i].second.value();
      if (first) {
        lo = hi = v;
        first = false;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    t.cauchy_tail = first ? Rational(0) : hi - lo;
  }
  return report;
}

}  // namespace fostat
