#pragma once

#include "fostat/core.hpp"
#include "fostat/eval.hpp"
#include "fostat/formula.hpp"

namespace fostat {

/// Rooted-forest axioms over {arc/2, R/1}: roots have in-degree 0, every
/// other vertex in-degree exactly 1, no directed cycle, at most one root per
/// component.
struct ForestDiagnostics {
  bool valid = false;
  std::vector<std::string> problems;
};

ForestDiagnostics validate_rooted_forest(const Structure& s);

/// Convert a rooted structure over {adj/2 sym, R/1} into a rooted forest
/// over {arc/2, R/1} by orienting every edge away from its component's root.
Structure orient_from_roots(const Structure& s);

/// Inverse of orient_from_roots: forget orientation, keep the root marks.
Structure forget_orientation(const Structure& f);

/// k-fold father map: follow the unique in-arc; roots are fixed points.
int ancestor(const Structure& f, int v, int k);

struct TransportReport {
  bool premise_out = false;   // every phi-vertex has >= a psi-neighbors
  bool premise_in = false;    // every psi-vertex has <= b phi-neighbors
  bool conclusion = false;    // a*<phi> <= b*<psi>
  bool vacuous = false;       // some premise failed; conclusion not implied
  Integer edges = 0;          // |edges between the two solution sets|
  Integer out_sum = 0;        // sum over phi-vertices of psi-neighbor counts
  Integer in_sum = 0;         // sum over psi-vertices of phi-neighbor counts
  Rational lhs;               // a*<phi> resp. a*|X|
  Rational rhs;
};

/// Mass-transport check for unary formulas: neighbors are Gaifman neighbors.
TransportReport check_fmtp(const Structure& s, const Formula& phi, const Formula& psi,
                           long long a, long long b, const EvalOptions& opts = {});

/// Mass-transport check for arbitrary vertex sets.
TransportReport check_smtp(const Structure& s, const VertexSet& X, const VertexSet& Y,
                           long long a, long long b);

struct SkeletonNode {
  int principal_vertex = -1;
  Rational mass;  // fraction of the original domain accounted at this node
  std::vector<Structure> residual_components;  // rooted forests over {arc, R}
  std::vector<std::vector<int>> residual_vertices;  // original ids per component
  std::vector<std::vector<int>> folded_vertices;    // subtrees absorbed at max depth
  std::vector<SkeletonNode> children;  // sorted by descending mass, ties by id
};

/// Recursive root peeling of a single rooted tree over {arc/2, R/1}: child
/// subtrees of size >= epsilon * |original tree| become skeleton children
/// (down to max_depth, beyond which their mass folds into the parent),
/// smaller ones stay as residual components.
SkeletonNode skeleton_decompose(const Structure& t, const Rational& epsilon, int max_depth);

std::string skeleton_to_json(const SkeletonNode& node);

}  // namespace fostat
