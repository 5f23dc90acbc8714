#pragma once

#include <map>
#include <vector>

#include "fostat/core.hpp"
#include "fostat/formula.hpp"
#include "fostat/rational.hpp"

namespace fostat {

/// Partial map variable index -> vertex.
using Assignment = std::map<int, int>;

struct EvalOptions {
  /// Split conjunctions with disjoint free variables into a product of
  /// pairings. Bit-identical to brute force.
  bool product_rule = true;
  /// When the locality radius is finite, restrict per-tuple checks to the
  /// induced ball around the assigned vertices. Bit-identical to brute force.
  bool use_locality = false;
  /// Refuse enumerations with n^(|Fv|+qrank) beyond this, unless overridden.
  Integer work_limit = Integer(1000000000);
  bool override_work_limit = false;
  /// Memoization entry cap; the cache is cleared when it overflows.
  std::size_t cache_capacity = 1u << 20;
  int threads = 1;
};

/// Exact Stone pairing: count = |solution set|, denominator = n^|Fv| exactly
/// (deliberately not reduced).
struct Pairing {
  Integer count;
  Integer denominator;
  Rational value() const { return Rational(count, denominator); }
  friend bool operator==(const Pairing&, const Pairing&) = default;
};

/// Tarskian satisfaction; the assignment must cover every free variable.
bool satisfies(const Structure& s, const Formula& f, const Assignment& a,
               const EvalOptions& opts = {});

/// Number of |Fv(pack(f))|-tuples satisfying f; sentences yield 0 or 1.
Integer solution_count(const Structure& s, const Formula& f, const EvalOptions& opts = {});

Pairing stone_pairing(const Structure& s, const Formula& f, const EvalOptions& opts = {});

/// All p-tuples (x1..xp) satisfying f, in lexicographic order. Free variables
/// of f must lie within x1..xp; unused slots range freely.
std::vector<Tuple> solution_set(const Structure& s, const Formula& f, int p,
                                const EvalOptions& opts = {});

std::vector<std::pair<Formula, Pairing>> pairing_vector(const Structure& s,
                                                        const std::vector<Formula>& catalog,
                                                        const EvalOptions& opts = {});

/// Check a claimed locality radius on a given structure: satisfaction on the
/// induced r-ball around every tuple must equal satisfaction on s.
bool validate_locality(const Structure& s, const Formula& f, int r,
                       const EvalOptions& opts = {});

}  // namespace fostat
