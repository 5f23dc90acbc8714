#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fostat/core.hpp"
#include "fostat/formula.hpp"
#include "fostat/rational.hpp"

namespace fostat {

struct FamilySpec {
  std::string family;  // path, star, star_of_stars, path_of_stars, balanced_tree, random_tree
  std::vector<long long> params;
  std::optional<std::uint64_t> seed;
};

/// splitmix64 step; the fixed PRNG behind random_tree so seeds reproduce
/// across implementations (update constant 0x9e3779b97f4a7c15, finalizer
/// constants 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb).
std::uint64_t splitmix64(std::uint64_t& state);

Structure make_path(int n);
Structure make_star(int m);
Structure make_star_of_stars(int k, int m);
Structure make_path_of_stars(int k, int m);
/// Complete b-ary rooted tree of height h, BFS numbering, root 0 marked.
Structure make_balanced_tree(int b, int h);
/// Random recursive tree: vertex i >= 1 attaches to splitmix64(state) % i;
/// root 0 marked.
Structure make_random_tree(int n, std::uint64_t seed);

Structure generate(const FamilySpec& spec);

/// Exact pairing values known in closed form for (family, formula) pairs;
/// throws on unsupported combinations. Formulas are named: "adj" for
/// adj(x1,x2), "dist2" for dist(x1,x2)<=2.
Rational closed_form_pairing(const std::string& family, const std::vector<long long>& params,
                             const std::string& formula_name);

}  // namespace fostat
