#pragma once

#include <functional>

#include "fostat/core.hpp"
#include "fostat/eval.hpp"
#include "fostat/formula.hpp"

namespace fostat {

/// max_v |B_r(v)| / n, exact.
Rational residual_index(const Structure& s, int r);

/// |B_d(root)| / n for d = 0..d_max.
std::vector<Rational> dispersion_profile(const Structure& s, int root, int d_max);

struct BreakResult {
  Rational epsilon;
  int r = 0;
  std::vector<int> centers;
  VertexSet cover;  // union of B_2r around the centers, sorted

  /// Re-check the guarantees on a given structure: every center has
  /// |B_2r| >= eps*n, every vertex outside the cover has |B_r| < eps*n,
  /// |centers| <= 1/eps, and the centers' r-balls are pairwise disjoint.
  bool check(const Structure& s) const;
};

/// Greedy extraction of centers of large pairwise-disjoint r-balls:
/// candidates are vertices with |B_r(v)| >= eps*n, processed by decreasing
/// ball size (ties by ascending id), accepted when the r-ball avoids all
/// previously accepted ones.
BreakResult break_cover(const Structure& s, const Rational& epsilon, int r);

struct SplitResult {
  int d = 0;
  std::vector<Structure> parts;                // induced d-balls, center marked
  std::vector<std::vector<int>> part_vertices; // original ids, aligned with parts
  Structure residue;                           // induced complement, unmarked
  std::vector<int> residue_vertices;
};

/// Cut out the d-balls around the centers (which must be pairwise disjoint)
/// as rooted parts, marking each center with a fresh unary relation C; the
/// residue is the induced rest.
SplitResult split_by_centers(const Structure& s, const std::vector<int>& centers, int d);

/// Deterministic formula catalog over a signature: relation and equality
/// atoms on variables x1..x_{n_max}, closed under negation, conjunction of
/// two earlier formulas, and a single quantifier layer; only formulas with
/// qrank + |Fv| <= n_max are kept, structurally deduplicated, truncated at
/// budget in generation order.
std::vector<Formula> formula_catalog(const Signature& sig, int n_max, int budget);

/// 2^{-n*} where n* is the largest n <= n_max such that every catalog
/// formula with qrank + |Fv| <= n has |<f,s1> - <f,s2>| < 2^{-n}. A lower
/// bound of the full pseudometric (the catalog is finite).
Rational pseudo_distance(const Structure& s1, const Structure& s2, int n_max, int catalog_budget,
                         const EvalOptions& opts = {});

struct Trajectory {
  Formula formula;
  std::vector<std::pair<int, Pairing>> points;  // (n, pairing) along the grid
  Rational cauchy_tail;                         // max spread over the last window terms
};

struct ResidualTrajectory {
  int r = 0;
  std::vector<std::pair<int, Rational>> points;
};

struct ConvergenceReport {
  std::vector<Trajectory> trajectories;
  std::vector<ResidualTrajectory> residuals;
  int window = 0;
};

/// Pairings of every catalog formula along a structure family evaluated on
/// an ascending grid, plus residual-index trajectories for the given radii.
ConvergenceReport convergence_report(const std::function<Structure(int)>& family,
                                     const std::vector<int>& grid,
                                     const std::vector<Formula>& catalog,
                                     const std::vector<int>& radii, int window = 5,
                                     const EvalOptions& opts = {});

}  // namespace fostat
