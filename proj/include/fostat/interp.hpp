#pragma once

#include <iosfwd>

#include "fostat/core.hpp"
#include "fostat/eval.hpp"
#include "fostat/formula.hpp"

namespace fostat {

/// Basic interpretation scheme: exponent k and one defining formula per
/// target relation, each over the source signature with free variables in
/// x_1..x_{k*arity}.
struct BasicScheme {
  Signature source;
  Signature target;
  int exponent = 1;
  std::vector<Formula> defs;  // aligned with target.relations

  void validate() const;
};

/// Tuple <-> integer coding for the k-fold product domain: base n, leftmost
/// slot most significant.
std::vector<int> decode_tuple(long long code, int n, int k);
long long encode_tuple(const std::vector<int>& t, int n);

/// Transformed structure on domain n^k.
Structure apply_scheme(const BasicScheme& scheme, const Structure& s,
                       const EvalOptions& opts = {});

/// Formula rewriting dual to apply_scheme: target variables expand to
/// k-blocks of source variables, relation atoms are replaced by their
/// defining formulas. Rejects distance atoms and, for k > 1, counting
/// quantifiers.
Formula rewrite_formula(const BasicScheme& scheme, const Formula& f);

struct PairingIdentityReport {
  Pairing on_image;     // <f, I(s)>
  Pairing on_source;    // <rewrite(f), s>
  bool equal = false;
};

PairingIdentityReport verify_pairing_identity(const BasicScheme& scheme, const Structure& s,
                                              const Formula& f, const EvalOptions& opts = {});

// --- rooted-tree peeling built-ins ---

/// Scheme turning a rooted tree (one R mark) into the forest of subtrees
/// rooted at the sons, with the former root isolated and marked P.
const BasicScheme& y_to_f_scheme();

/// Inverse direction: attaches each non-principal root as a son of the
/// principal vertex.
const BasicScheme& f_to_y_scheme();

/// Apply the built-ins with mark-multiplicity validation.
Structure y_to_f(const Structure& s, const EvalOptions& opts = {});
Structure f_to_y(const Structure& s, const EvalOptions& opts = {});

// --- scheme file format (JSON) ---

BasicScheme load_scheme(std::istream& in, const std::string& origin = "<input>");
BasicScheme load_scheme_file(const std::string& path);
void save_scheme(const BasicScheme& scheme, std::ostream& out);

}  // namespace fostat
