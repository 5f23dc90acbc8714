#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fostat/core.hpp"
#include "fostat/errors.hpp"

namespace fostat {

enum class FormulaKind {
  True,
  False,
  Rel,      // relation atom over variables
  Eq,       // variable equality
  Dist,     // distance atom dist(xi,xj) <=|>|= bound
  Not,
  And,
  Or,
  Implies,
  Exists,
  Forall,
  CountGE,  // at least `count` witnesses
  CountLE,  // at most `count` witnesses
};

enum class DistCmp { Leq, Gt, Eq };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

/// Immutable AST node. Variables are positive indices (x1, x2, ...).
struct FormulaNode {
  FormulaKind kind;
  std::string rel;             // Rel
  std::vector<int> args;       // Rel arguments; Eq/Dist use args[0], args[1]
  DistCmp cmp = DistCmp::Leq;  // Dist
  long long bound = 0;         // Dist bound or counting-quantifier count
  Formula left;                // unary child / left operand / quantifier body
  Formula right;               // right operand
  int var = 0;                 // quantified variable
  std::uint64_t id;            // unique per node, for memoization keys

  FormulaNode();
};

// --- constructors ---
Formula f_true();
Formula f_false();
Formula f_rel(std::string name, std::vector<int> vars);
Formula f_eq(int u, int v);
Formula f_dist(int u, int v, DistCmp cmp, long long bound);
Formula f_not(Formula f);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_implies(Formula a, Formula b);
Formula f_exists(int var, Formula body);
Formula f_forall(int var, Formula body);
Formula f_count_ge(long long a, int var, Formula body);
Formula f_count_le(long long b, int var, Formula body);

/// Structural equality (ids ignored).
bool equal(const Formula& a, const Formula& b);

/// Sorted free-variable indices.
std::vector<int> free_vars(const Formula& f);

/// Quantifier nesting depth; counting quantifiers count as one block.
int qrank(const Formula& f);

/// Relation symbols of all quantifier-free atoms.
std::vector<std::string> relation_symbols(const Formula& f);

/// Verify every relation atom against a signature (existence + arity).
void check_against_signature(const Formula& f, const Signature& sig);

/// Deterministic bound-variable renaming, leftmost-outermost, starting past
/// the largest free-variable index. Structural equality of normalized
/// formulas is a sound proxy for alpha-equivalence.
Formula normalize(const Formula& f);

/// Substitute free occurrences of variables (bound occurrences untouched).
/// The replacement map sends variable index to variable index.
Formula rename_free(const Formula& f, const std::vector<std::pair<int, int>>& mapping);

// --- derived combinators ---

/// Rename free variables x_{i_1}<...<x_{i_p} to x_1..x_p.
Formula pack(const Formula& f);

/// Conjunction over 1<=i<j<=p of dist(x_i,x_j) > r. Requires p >= 2.
Formula theta_r(int p, int r);

/// E y_1..y_p (/\ dist(x_i,y_i) <= r) & f(y_1..y_p). Requires f packed.
Formula lambda_r(const Formula& f, int r);

struct FormulaMeta {
  std::vector<int> free_vars;
  int qrank = 0;
  /// Syntactic locality upper bound; nullopt means unknown (treated as
  /// infinite). Finite values are sound: satisfaction on the induced
  /// r-ball around the free variables equals satisfaction on the whole
  /// structure.
  std::optional<int> locality_radius;
};

FormulaMeta meta(const Formula& f);

// --- text format ---

/// Parse a formula; when sig is given, relation atoms are checked against
/// it. The result is normalized.
Formula parse_formula(const std::string& text, const Signature* sig = nullptr);

std::string print_formula(const Formula& f);

}  // namespace fostat
