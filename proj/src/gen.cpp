#include "fostat/gen.hpp"

#include "fostat/signatures.hpp"

namespace fostat {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

void need_positive(long long v, const std::string& what) {
  if (v < 1) throw DomainError(what + " must be positive");
  if (v > 10000000) throw DomainError(what + " is too large");
}

}  // namespace

Structure make_path(int n) {
  need_positive(n, "path order");
  std::vector<Tuple> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Structure(graph_signature(), n, {std::move(edges)});
}

Structure make_star(int m) {
  need_positive(m, "star order");
  std::vector<Tuple> edges;
  for (int leaf = 1; leaf < m; ++leaf) edges.push_back({0, leaf});
  return Structure(graph_signature(), m, {std::move(edges)});
}

Structure make_star_of_stars(int k, int m) {
  need_positive(k, "star count");
  need_positive(m, "star order");
  std::vector<Tuple> edges;
  for (int j = 0; j < k; ++j) {
    int hub = j * m;
    for (int leaf = 1; leaf < m; ++leaf) edges.push_back({hub, hub + leaf});
  }
  return Structure(graph_signature(), k * m, {std::move(edges)});
}

Structure make_path_of_stars(int k, int m) {
  need_positive(k, "star count");
  need_positive(m, "star order");
  std::vector<Tuple> edges;
  for (int j = 0; j < k; ++j) {
    int hub = j * m;
    for (int leaf = 1; leaf < m; ++leaf) edges.push_back({hub, hub + leaf});
    if (j + 1 < k) edges.push_back({hub, hub + m});
  }
  return Structure(graph_signature(), k * m, {std::move(edges)});
}

Structure make_balanced_tree(int b, int h) {
  need_positive(b, "branching factor");
  if (h < 0) throw DomainError("height must be non-negative");
  long long n = 1, layer = 1;
  for (int d = 0; d < h; ++d) {
    layer *= b;
    n += layer;
    if (n > 10000000) throw DomainError("balanced tree is too large");
  }
  std::vector<Tuple> edges;
  for (long long i = 0; i < n; ++i)
    for (long long c = b * i + 1; c <= b * i + b && c < n; ++c)
      edges.push_back({static_cast<int>(i), static_cast<int>(c)});
  return Structure(rooted_signature(), static_cast<int>(n), {std::move(edges), {{0}}});
}

Structure make_random_tree(int n, std::uint64_t seed) {
  need_positive(n, "tree order");
  std::uint64_t state = seed;
  std::vector<Tuple> edges;
  for (int i = 1; i < n; ++i)
    edges.push_back({static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(i)), i});
  return Structure(rooted_signature(), n, {std::move(edges), {{0}}});
}

Structure generate(const FamilySpec& spec) {
  auto arity = [&](size_t want) {
    if (spec.params.size() != want)
      throw DomainError("family '" + spec.family + "' takes " + std::to_string(want) +
                        " parameter(s)");
  };
  if (spec.family == "path") {
    arity(1);
    return make_path(static_cast<int>(spec.params[0]));
  }
  if (spec.family == "star") {
    arity(1);
    return make_star(static_cast<int>(spec.params[0]));
  }
  if (spec.family == "star_of_stars") {
    arity(2);
    return make_star_of_stars(static_cast<int>(spec.params[0]), static_cast<int>(spec.params[1]));
  }
  if (spec.family == "path_of_stars") {
    arity(2);
    return make_path_of_stars(static_cast<int>(spec.params[0]), static_cast<int>(spec.params[1]));
  }
  if (spec.family == "balanced_tree") {
    arity(2);
    return make_balanced_tree(static_cast<int>(spec.params[0]), static_cast<int>(spec.params[1]));
  }
  if (spec.family == "random_tree") {
    arity(1);
    if (!spec.seed) throw DomainError("random_tree requires a seed");
    return make_random_tree(static_cast<int>(spec.params[0]), *spec.seed);
  }
  throw DomainError("unknown family '" + spec.family + "'");
}

Rational closed_form_pairing(const std::string& family, const std::vector<long long>& params,
                             const std::string& formula_name) {
  if (family == "path" && formula_name == "adj" && params.size() == 1) {
    Integer n = params[0];
    return Rational(2 * (n - 1), n * n);
  }
  if (family == "path" && formula_name == "dist2" && params.size() == 1 && params[0] >= 5) {
    Integer n = params[0];
    return Rational(5 * n - 6, n * n);
  }
  if (family == "star" && formula_name == "adj" && params.size() == 1) {
    Integer m = params[0];
    return Rational(2 * (m - 1), m * m);
  }
  if (family == "star_of_stars" && formula_name == "adj" && params.size() == 2) {
    Integer k = params[0], m = params[1];
    return Rational(2 * (m - 1), k * m * m);
  }
  throw DomainError("no closed form for (" + family + ", " + formula_name + ")");
}

}  // namespace fostat
