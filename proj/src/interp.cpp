#include "fostat/interp.hpp"

#include <algorithm>
#include <fstream>
#include <memory>

#include "fostat/signatures.hpp"
#include "json_util.hpp"

namespace fostat {

namespace {

// order-insensitive: relations are referenced by name during evaluation
bool compatible(const Signature& a, const Signature& b) {
  if (a.relations.size() != b.relations.size()) return false;
  for (const auto& rel : a.relations) {
    int idx = b.index_of(rel.name);
    if (idx < 0 || b.relations[idx].arity != rel.arity) return false;
  }
  return true;
}

}  // namespace

void BasicScheme::validate() const {
  if (exponent < 1) throw DomainError("scheme exponent must be >= 1");
  if (defs.size() != target.relations.size())
    throw DomainError("scheme must define every target relation");
  for (size_t i = 0; i < defs.size(); ++i) {
    const auto& rel = target.relations[i];
    check_against_signature(defs[i], source);
    int slots = exponent * rel.arity;
    for (int v : free_vars(defs[i]))
      if (v > slots)
        throw DomainError("defining formula for '" + rel.name + "' uses x" + std::to_string(v) +
                          " beyond its " + std::to_string(slots) + " slots");
  }
}

std::vector<int> decode_tuple(long long code, int n, int k) {
  std::vector<int> t(k);
  for (int j = k - 1; j >= 0; --j) {
    t[j] = static_cast<int>(code % n);
    code /= n;
  }
  return t;
}

long long encode_tuple(const std::vector<int>& t, int n) {
  long long code = 0;
  for (int v : t) code = code * n + v;
  return code;
}

Structure apply_scheme(const BasicScheme& scheme, const Structure& s, const EvalOptions& opts) {
  scheme.validate();
  if (!compatible(scheme.source, s.signature()))
    throw DomainError("structure signature does not match the scheme source");

  Integer domain = ipow(Integer(s.size()), static_cast<unsigned>(scheme.exponent));
  if (!opts.override_work_limit && domain > opts.work_limit)
    throw WorkLimitError("interpreted domain size " + domain.str() + " exceeds work limit");
  long long big_n = domain.convert_to<long long>();
  int k = scheme.exponent;

  std::vector<std::vector<Tuple>> tuples(scheme.target.relations.size());
  for (size_t i = 0; i < scheme.target.relations.size(); ++i) {
    int arity = scheme.target.relations[i].arity;
    // the target tuple space of arity r is exactly the source tuple space
    // of arity k*r, so enumerate the latter and re-encode in blocks
    auto sols = solution_set(s, scheme.defs[i], k * arity, opts);
    for (const auto& sol : sols) {
      Tuple t(arity);
      for (int j = 0; j < arity; ++j)
        t[j] = static_cast<int>(
            encode_tuple({sol.begin() + j * k, sol.begin() + (j + 1) * k}, s.size()));
      tuples[i].push_back(std::move(t));
    }
  }
  return Structure(scheme.target, static_cast<int>(big_n), std::move(tuples));
}

namespace {

// commutativity-aware canonical form, used only to detect that a defining
// formula is already symmetric under swapping its argument blocks
Formula canon(const Signature& sig, const Formula& f) {
  if (!f) return f;
  switch (f->kind) {
    case FormulaKind::Eq: {
      auto args = f->args;
      if (args[0] > args[1]) std::swap(args[0], args[1]);
      return f_eq(args[0], args[1]);
    }
    case FormulaKind::Rel: {
      int idx = sig.index_of(f->rel);
      auto args = f->args;
      if (idx >= 0 && sig.relations[idx].symmetric && args.size() == 2 && args[0] > args[1])
        std::swap(args[0], args[1]);
      return f_rel(f->rel, args);
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      Formula a = canon(sig, f->left);
      Formula b = canon(sig, f->right);
      if (print_formula(a) > print_formula(b)) std::swap(a, b);
      return f->kind == FormulaKind::And ? f_and(std::move(a), std::move(b))
                                         : f_or(std::move(a), std::move(b));
    }
    default: {
      auto g = std::make_shared<FormulaNode>(*f);
      g->left = canon(sig, f->left);
      g->right = canon(sig, f->right);
      return g;
    }
  }
}

Formula rewrite_rec(const BasicScheme& sc, const Formula& f) {
  int k = sc.exponent;
  auto block_var = [k](int target_var, int slot /*1..k*/) {
    return (target_var - 1) * k + slot;
  };
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Rel: {
      int idx = sc.target.index_of(f->rel);
      if (idx < 0) throw DomainError("unknown target relation '" + f->rel + "' in rewrite");
      int arity = sc.target.relations[idx].arity;
      if (static_cast<int>(f->args.size()) != arity)
        throw DomainError("relation '" + f->rel + "' arity mismatch in rewrite");
      auto substituted = [&](const std::vector<int>& args) {
        std::vector<std::pair<int, int>> mapping;
        for (int m = 1; m <= k * arity; ++m) {
          int t = (m - 1) / k;      // argument position
          int u = (m - 1) % k + 1;  // slot inside the block
          mapping.emplace_back(m, block_var(args[t], u));
        }
        return rename_free(sc.defs[idx], mapping);
      };
      Formula fwd = substituted(f->args);
      // a symmetric target relation is transposition-closed by construction,
      // so its atom means "definition holds one way or the other"
      if (sc.target.relations[idx].symmetric && arity == 2) {
        Formula rev = substituted({f->args[1], f->args[0]});
        if (print_formula(canon(sc.source, fwd)) != print_formula(canon(sc.source, rev)))
          return f_or(std::move(fwd), std::move(rev));
      }
      return fwd;
    }
    case FormulaKind::Eq: {
      Formula out;
      for (int u = 1; u <= k; ++u) {
        Formula e = f_eq(block_var(f->args[0], u), block_var(f->args[1], u));
        out = out ? f_and(std::move(out), std::move(e)) : std::move(e);
      }
      return out;
    }
    case FormulaKind::Dist:
      throw DomainError("distance atoms cannot be rewritten through an interpretation scheme");
    case FormulaKind::Not:
      return f_not(rewrite_rec(sc, f->left));
    case FormulaKind::And:
      return f_and(rewrite_rec(sc, f->left), rewrite_rec(sc, f->right));
    case FormulaKind::Or:
      return f_or(rewrite_rec(sc, f->left), rewrite_rec(sc, f->right));
    case FormulaKind::Implies:
      return f_implies(rewrite_rec(sc, f->left), rewrite_rec(sc, f->right));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      Formula body = rewrite_rec(sc, f->left);
      for (int u = k; u >= 1; --u) {
        int v = block_var(f->var, u);
        body = f->kind == FormulaKind::Exists ? f_exists(v, std::move(body))
                                              : f_forall(v, std::move(body));
      }
      return body;
    }
    case FormulaKind::CountGE:
    case FormulaKind::CountLE: {
      // a witness of a counting quantifier is a k-tuple in the target; for
      // k > 1 the multiplicity bookkeeping is not expressible by a block of
      // plain quantifiers, so this case is rejected
      if (k != 1)
        throw DomainError("counting quantifiers cannot be rewritten when the exponent exceeds 1");
      Formula body = rewrite_rec(sc, f->left);
      int v = block_var(f->var, 1);
      return f->kind == FormulaKind::CountGE ? f_count_ge(f->bound, v, std::move(body))
                                             : f_count_le(f->bound, v, std::move(body));
    }
  }
  return f;
}

}  // namespace

Formula rewrite_formula(const BasicScheme& scheme, const Formula& f) {
  scheme.validate();
  check_against_signature(f, scheme.target);
  return normalize(rewrite_rec(scheme, normalize(f)));
}

PairingIdentityReport verify_pairing_identity(const BasicScheme& scheme, const Structure& s,
                                              const Formula& f, const EvalOptions& opts) {
  PairingIdentityReport report;
  Structure image = apply_scheme(scheme, s, opts);
  report.on_image = stone_pairing(image, f, opts);
  report.on_source = stone_pairing(s, rewrite_formula(scheme, f), opts);
  report.equal = report.on_image.value() == report.on_source.value();
  return report;
}

namespace {

BasicScheme make_y_to_f() {
  BasicScheme sc;
  sc.source = rooted_signature();
  sc.target = peeled_signature();
  sc.exponent = 1;
  sc.defs = {
      parse_formula("adj(x1,x2) & !R(x1) & !R(x2)", &sc.source),
      parse_formula("E x3. R(x3) & adj(x3,x1)", &sc.source),
      parse_formula("R(x1)", &sc.source),
  };
  return sc;
}

BasicScheme make_f_to_y() {
  BasicScheme sc;
  sc.source = peeled_signature();
  sc.target = rooted_signature();
  sc.exponent = 1;
  sc.defs = {
      parse_formula("adj(x1,x2) | R(x1) & P(x2) | R(x2) & P(x1)", &sc.source),
      parse_formula("P(x1)", &sc.source),
  };
  return sc;
}

int unary_mark_count(const Structure& s, const std::string& name) {
  int idx = s.signature().index_of(name);
  if (idx < 0) throw DomainError("structure has no unary relation '" + name + "'");
  return static_cast<int>(s.tuples(idx).size());
}

}  // namespace

const BasicScheme& y_to_f_scheme() {
  static const BasicScheme sc = make_y_to_f();
  return sc;
}

const BasicScheme& f_to_y_scheme() {
  static const BasicScheme sc = make_f_to_y();
  return sc;
}

Structure y_to_f(const Structure& s, const EvalOptions& opts) {
  if (unary_mark_count(s, "R") != 1)
    throw DomainError("y_to_f expects exactly one vertex marked R");
  return apply_scheme(y_to_f_scheme(), s, opts);
}

Structure f_to_y(const Structure& s, const EvalOptions& opts) {
  if (unary_mark_count(s, "P") != 1)
    throw DomainError("f_to_y expects exactly one vertex marked P");
  return apply_scheme(f_to_y_scheme(), s, opts);
}

BasicScheme load_scheme(std::istream& in, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(origin + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("exponent") || !doc.contains("source") ||
      !doc.contains("target") || !doc.contains("defs"))
    throw DomainError(origin + ": scheme needs \"exponent\", \"source\", \"target\", \"defs\"");

  BasicScheme sc;
  sc.exponent = doc["exponent"].get<int>();
  sc.source = detail::parse_signature_json(doc["source"], origin);
  sc.target = detail::parse_signature_json(doc["target"], origin);
  for (const auto& rel : sc.target.relations) {
    if (!doc["defs"].contains(rel.name))
      throw DomainError(origin + ": missing defining formula for '" + rel.name + "'");
    try {
      sc.defs.push_back(parse_formula(doc["defs"][rel.name].get<std::string>(), &sc.source));
    } catch (const ParseError& e) {
      throw DomainError(origin + ": in definition of '" + rel.name + "': " + e.what());
    }
  }
  sc.validate();
  return sc;
}

BasicScheme load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open scheme file '" + path + "'");
  return load_scheme(in, path);
}

void save_scheme(const BasicScheme& scheme, std::ostream& out) {
  nlohmann::json defs = nlohmann::json::object();
  for (size_t i = 0; i < scheme.defs.size(); ++i)
    defs[scheme.target.relations[i].name] = print_formula(scheme.defs[i]);
  nlohmann::json doc = {{"exponent", scheme.exponent},
                        {"source", detail::signature_to_json(scheme.source)},
                        {"target", detail::signature_to_json(scheme.target)},
                        {"defs", std::move(defs)}};
  out << doc.dump(2) << "\n";
}

}  // namespace fostat
