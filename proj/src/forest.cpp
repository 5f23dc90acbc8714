#include "fostat/forest.hpp"

#include <algorithm>
#include <queue>

#include "fostat/signatures.hpp"
#include "json_util.hpp"

namespace fostat {

namespace {

struct ForestView {
  int arc_rel = -1;
  int root_rel = -1;
  std::vector<int> father;           // -1 at roots / orphans
  std::vector<std::vector<int>> sons;
  std::vector<char> is_root;
  std::vector<int> indegree;
};

ForestView view_forest(const Structure& s) {
  ForestView fv;
  fv.arc_rel = s.signature().index_of("arc");
  fv.root_rel = s.signature().index_of("R");
  if (fv.arc_rel < 0 || fv.root_rel < 0 ||
      s.signature().relations[fv.arc_rel].arity != 2 ||
      s.signature().relations[fv.arc_rel].symmetric ||
      s.signature().relations[fv.root_rel].arity != 1)
    throw DomainError("expected a structure over {arc/2 directed, R/1}");
  fv.father.assign(s.size(), -1);
  fv.sons.resize(s.size());
  fv.is_root.assign(s.size(), 0);
  fv.indegree.assign(s.size(), 0);
  for (const auto& t : s.tuples(fv.arc_rel)) {
    ++fv.indegree[t[1]];
    fv.father[t[1]] = t[0];
    fv.sons[t[0]].push_back(t[1]);
  }
  for (const auto& t : s.tuples(fv.root_rel)) fv.is_root[t[0]] = 1;
  return fv;
}

}  // namespace

ForestDiagnostics validate_rooted_forest(const Structure& s) {
  ForestDiagnostics diag;
  ForestView fv;
  try {
    fv = view_forest(s);
  } catch (const DomainError& e) {
    diag.problems.push_back(e.what());
    return diag;
  }

  for (int v = 0; v < s.size(); ++v) {
    if (fv.is_root[v] && fv.indegree[v] != 0)
      diag.problems.push_back("root " + std::to_string(v) + " has in-degree " +
                              std::to_string(fv.indegree[v]));
    if (!fv.is_root[v] && fv.indegree[v] != 1)
      diag.problems.push_back("non-root " + std::to_string(v) + " has in-degree " +
                              std::to_string(fv.indegree[v]));
  }

  // walk father chains; a chain longer than n means a directed cycle
  std::vector<char> settled(s.size(), 0);
  for (int v = 0; v < s.size(); ++v) {
    int u = v;
    int steps = 0;
    while (u >= 0 && !settled[u] && steps <= s.size()) {
      ++steps;
      u = fv.father[u];
    }
    if (steps > s.size()) {
      diag.problems.push_back("directed cycle through vertex " + std::to_string(v));
      break;
    }
    u = v;
    while (u >= 0 && !settled[u]) {
      settled[u] = 1;
      u = fv.father[u];
    }
  }

  for (const auto& comp : components(s)) {
    int roots = 0;
    for (int v : comp) roots += fv.is_root[v];
    if (roots > 1)
      diag.problems.push_back("component containing " + std::to_string(comp[0]) + " has " +
                              std::to_string(roots) + " roots");
  }

  diag.valid = diag.problems.empty();
  return diag;
}

Structure orient_from_roots(const Structure& s) {
  int adj_rel = s.signature().index_of("adj");
  int root_rel = s.signature().index_of("R");
  if (adj_rel < 0 || root_rel < 0)
    throw DomainError("expected a structure over {adj/2 symmetric, R/1}");

  std::vector<char> is_root(s.size(), 0);
  std::vector<Tuple> root_tuples = s.tuples(root_rel);
  for (const auto& t : root_tuples) is_root[t[0]] = 1;

  std::vector<Tuple> arcs;
  std::vector<int> parent(s.size(), -2);
  for (const auto& comp : components(s)) {
    int root = -1;
    size_t edges = 0;
    for (int v : comp) {
      if (is_root[v]) {
        if (root >= 0) throw DomainError("component has two roots");
        root = v;
      }
      edges += s.neighbors(v).size();
    }
    if (root < 0) throw DomainError("component without a root");
    if (edges / 2 != comp.size() - 1) throw DomainError("component is not a tree");

    std::queue<int> bfs;
    bfs.push(root);
    parent[root] = -1;
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      for (int w : s.neighbors(u))
        if (parent[w] == -2) {
          parent[w] = u;
          arcs.push_back({u, w});
          bfs.push(w);
        }
    }
  }
  return Structure(rooted_forest_signature(), s.size(), {std::move(arcs), std::move(root_tuples)});
}

Structure forget_orientation(const Structure& f) {
  auto fv = view_forest(f);
  return Structure(rooted_signature(), f.size(),
                   {f.tuples(fv.arc_rel), f.tuples(fv.root_rel)});
}

int ancestor(const Structure& f, int v, int k) {
  f.check_vertex(v);
  if (k < 0) throw DomainError("ancestor steps must be non-negative");
  auto fv = view_forest(f);
  for (int i = 0; i < k; ++i)
    if (fv.father[v] >= 0) v = fv.father[v];
  return v;
}

namespace {

TransportReport transport(const Structure& s, const std::vector<char>& in_x,
                          const std::vector<char>& in_y, Integer x_size, Integer y_size,
                          long long a, long long b, bool normalize_by_n) {
  TransportReport rep;
  rep.premise_out = true;
  rep.premise_in = true;
  for (int v = 0; v < s.size(); ++v) {
    if (in_x[v]) {
      Integer hits = 0;
      for (int w : s.neighbors(v)) hits += in_y[w] ? 1 : 0;
      rep.out_sum += hits;
      if (hits < a) rep.premise_out = false;
    }
    if (in_y[v]) {
      Integer hits = 0;
      for (int w : s.neighbors(v)) hits += in_x[w] ? 1 : 0;
      rep.in_sum += hits;
      if (hits > b) rep.premise_in = false;
    }
  }
  rep.edges = rep.out_sum;
  Integer den = normalize_by_n ? Integer(s.size()) : Integer(1);
  rep.lhs = Rational(Integer(a) * x_size, den);
  rep.rhs = Rational(Integer(b) * y_size, den);
  rep.conclusion = rep.lhs <= rep.rhs;
  rep.vacuous = !(rep.premise_out && rep.premise_in);
  return rep;
}

}  // namespace

TransportReport check_fmtp(const Structure& s, const Formula& phi, const Formula& psi,
                           long long a, long long b, const EvalOptions& opts) {
  if (a < 0 || b < 0) throw DomainError("transport constants must be non-negative");
  for (const Formula* f : {&phi, &psi}) {
    auto fv = free_vars(*f);
    if (fv != std::vector<int>{1})
      throw DomainError("transport formulas must have exactly the free variable x1");
  }
  std::vector<char> in_x(s.size(), 0), in_y(s.size(), 0);
  Integer xs = 0, ys = 0;
  for (const auto& t : solution_set(s, phi, 1, opts)) {
    in_x[t[0]] = 1;
    ++xs;
  }
  for (const auto& t : solution_set(s, psi, 1, opts)) {
    in_y[t[0]] = 1;
    ++ys;
  }
  return transport(s, in_x, in_y, xs, ys, a, b, /*normalize_by_n=*/true);
}

TransportReport check_smtp(const Structure& s, const VertexSet& X, const VertexSet& Y,
                           long long a, long long b) {
  if (a < 0 || b < 0) throw DomainError("transport constants must be non-negative");
  std::vector<char> in_x(s.size(), 0), in_y(s.size(), 0);
  Integer xs = 0, ys = 0;
  for (int v : X) {
    s.check_vertex(v);
    if (!in_x[v]) ++xs;
    in_x[v] = 1;
  }
  for (int v : Y) {
    s.check_vertex(v);
    if (!in_y[v]) ++ys;
    in_y[v] = 1;
  }
  return transport(s, in_x, in_y, xs, ys, a, b, /*normalize_by_n=*/false);
}

namespace {

struct SkeletonBuilder {
  const Structure* t = nullptr;
  ForestView fv;
  std::vector<int> subtree_size;
  Rational epsilon;
  int max_depth = 0;
  int total = 0;

  int measure(int v) {
    int size = 1;
    for (int c : fv.sons[v]) size += measure(c);
    return subtree_size[v] = size;
  }

  std::vector<int> collect(int v) const {
    std::vector<int> out{v};
    for (size_t i = 0; i < out.size(); ++i)
      for (int c : fv.sons[out[i]]) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }

  Structure residual(const std::vector<int>& vertices, int root, std::vector<char>& member) const {
    for (int v : vertices) member[v] = 1;
    std::vector<Tuple> arcs;
    std::vector<int> local(t->size(), -1);
    for (size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
    for (int v : vertices)
      for (int c : fv.sons[v])
        if (member[c]) arcs.push_back({local[v], local[c]});
    std::sort(arcs.begin(), arcs.end());
    for (int v : vertices) member[v] = 0;
    return Structure(rooted_forest_signature(), static_cast<int>(vertices.size()),
                     {std::move(arcs), {{local[root]}}});
  }

  SkeletonNode build(int v, int depth, std::vector<char>& member) {
    SkeletonNode node;
    node.principal_vertex = v;
    Integer accounted = 1;  // the principal vertex itself
    for (int c : fv.sons[v]) {
      if (Rational(subtree_size[c]) >= epsilon * total) {
        if (depth < max_depth) {
          node.children.push_back(build(c, depth + 1, member));
          continue;
        }
        // depth exhausted: fold the whole subtree into this node's mass
        accounted += subtree_size[c];
        node.folded_vertices.push_back(collect(c));
        continue;
      }
      auto vertices = collect(c);
      node.residual_components.push_back(residual(vertices, c, member));
      accounted += static_cast<int>(vertices.size());
      node.residual_vertices.push_back(std::move(vertices));
    }
    node.mass = Rational(accounted, Integer(total));
    std::stable_sort(node.children.begin(), node.children.end(),
                     [](const SkeletonNode& a, const SkeletonNode& b) {
                       if (a.mass != b.mass) return a.mass > b.mass;
                       return a.principal_vertex < b.principal_vertex;
                     });
    return node;
  }
};

nlohmann::json skeleton_json(const SkeletonNode& node) {
  nlohmann::json residual_sizes = nlohmann::json::array();
  for (const auto& comp : node.residual_components) residual_sizes.push_back(comp.size());
  nlohmann::json children = nlohmann::json::array();
  for (const auto& child : node.children) children.push_back(skeleton_json(child));
  return {{"principal", node.principal_vertex},
          {"mass",
           {{"num", numerator(node.mass).str()}, {"den", denominator(node.mass).str()}}},
          {"residual_sizes", std::move(residual_sizes)},
          {"children", std::move(children)}};
}

}  // namespace

SkeletonNode skeleton_decompose(const Structure& t, const Rational& epsilon, int max_depth) {
  if (epsilon <= 0 || epsilon > 1) throw DomainError("epsilon must lie in (0,1]");
  if (max_depth < 0) throw DomainError("max_depth must be non-negative");
  auto diag = validate_rooted_forest(t);
  if (!diag.valid) throw DomainError("skeleton input is not a rooted forest: " + diag.problems[0]);
  if (components(t).size() != 1) throw DomainError("skeleton input must be a single tree");

  SkeletonBuilder sb;
  sb.t = &t;
  sb.fv = view_forest(t);
  sb.subtree_size.assign(t.size(), 0);
  sb.epsilon = epsilon;
  sb.max_depth = max_depth;
  sb.total = t.size();

  int root = -1;
  for (int v = 0; v < t.size(); ++v)
    if (sb.fv.is_root[v]) root = v;
  if (root < 0) throw DomainError("skeleton input has no root");

  sb.measure(root);
  std::vector<char> member(t.size(), 0);
  return sb.build(root, 0, member);
}

std::string skeleton_to_json(const SkeletonNode& node) { return skeleton_json(node).dump(2); }

}  // namespace fostat
