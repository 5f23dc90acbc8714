#include "fostat/formula.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <climits>
#include <map>
#include <set>
#include <sstream>

namespace fostat {

namespace {
std::atomic<std::uint64_t> next_node_id{1};
}

FormulaNode::FormulaNode() : kind(FormulaKind::True), id(next_node_id.fetch_add(1)) {}

namespace {

Formula make(FormulaKind kind) {
  auto node = std::make_shared<FormulaNode>();
  const_cast<FormulaNode&>(*node).kind = kind;
  return node;
}

FormulaNode& mut(Formula& f) { return const_cast<FormulaNode&>(*f); }

void check_var_index(int v) {
  if (v < 1) throw DomainError("variable index must be >= 1, got " + std::to_string(v));
}

}  // namespace

Formula f_true() { return make(FormulaKind::True); }
Formula f_false() { return make(FormulaKind::False); }

Formula f_rel(std::string name, std::vector<int> vars) {
  for (int v : vars) check_var_index(v);
  auto f = make(FormulaKind::Rel);
  mut(f).rel = std::move(name);
  mut(f).args = std::move(vars);
  return f;
}

Formula f_eq(int u, int v) {
  check_var_index(u);
  check_var_index(v);
  auto f = make(FormulaKind::Eq);
  mut(f).args = {u, v};
  return f;
}

Formula f_dist(int u, int v, DistCmp cmp, long long bound) {
  check_var_index(u);
  check_var_index(v);
  if (bound < 0) throw DomainError("distance bound must be >= 0");
  auto f = make(FormulaKind::Dist);
  mut(f).args = {u, v};
  mut(f).cmp = cmp;
  mut(f).bound = bound;
  return f;
}

Formula f_not(Formula f) {
  auto g = make(FormulaKind::Not);
  mut(g).left = std::move(f);
  return g;
}

namespace {
Formula binary(FormulaKind kind, Formula a, Formula b) {
  auto f = make(kind);
  mut(f).left = std::move(a);
  mut(f).right = std::move(b);
  return f;
}

Formula quantifier(FormulaKind kind, int var, Formula body, long long count = 0) {
  check_var_index(var);
  if (count < 0) throw DomainError("counting bound must be >= 0");
  auto f = make(kind);
  mut(f).var = var;
  mut(f).left = std::move(body);
  mut(f).bound = count;
  return f;
}
}  // namespace

Formula f_and(Formula a, Formula b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
Formula f_or(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
Formula f_implies(Formula a, Formula b) {
  return binary(FormulaKind::Implies, std::move(a), std::move(b));
}
Formula f_exists(int var, Formula body) {
  return quantifier(FormulaKind::Exists, var, std::move(body));
}
Formula f_forall(int var, Formula body) {
  return quantifier(FormulaKind::Forall, var, std::move(body));
}
Formula f_count_ge(long long a, int var, Formula body) {
  return quantifier(FormulaKind::CountGE, var, std::move(body), a);
}
Formula f_count_le(long long b, int var, Formula body) {
  return quantifier(FormulaKind::CountLE, var, std::move(body), b);
}

bool equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::Rel:
      return a->rel == b->rel && a->args == b->args;
    case FormulaKind::Eq:
      return a->args == b->args;
    case FormulaKind::Dist:
      return a->args == b->args && a->cmp == b->cmp && a->bound == b->bound;
    case FormulaKind::Not:
      return equal(a->left, b->left);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return equal(a->left, b->left) && equal(a->right, b->right);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return a->var == b->var && equal(a->left, b->left);
    case FormulaKind::CountGE:
    case FormulaKind::CountLE:
      return a->var == b->var && a->bound == b->bound && equal(a->left, b->left);
  }
  return false;
}

namespace {

void collect_free(const Formula& f, std::set<int>& bound, std::set<int>& out) {
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Rel:
    case FormulaKind::Eq:
    case FormulaKind::Dist:
      for (int v : f->args)
        if (!bound.count(v)) out.insert(v);
      return;
    case FormulaKind::Not:
      collect_free(f->left, bound, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      collect_free(f->left, bound, out);
      collect_free(f->right, bound, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::CountGE:
    case FormulaKind::CountLE: {
      bool inserted = bound.insert(f->var).second;
      collect_free(f->left, bound, out);
      if (inserted) bound.erase(f->var);
      return;
    }
  }
}

}  // namespace

std::vector<int> free_vars(const Formula& f) {
  std::set<int> bound, out;
  collect_free(f, bound, out);
  return {out.begin(), out.end()};
}

int qrank(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Rel:
    case FormulaKind::Eq:
    case FormulaKind::Dist:
      return 0;
    case FormulaKind::Not:
      return qrank(f->left);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return std::max(qrank(f->left), qrank(f->right));
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::CountGE:
    case FormulaKind::CountLE:
      return 1 + qrank(f->left);
  }
  return 0;
}

namespace {
void collect_rels(const Formula& f, std::set<std::string>& out) {
  if (f->kind == FormulaKind::Rel) out.insert(f->rel);
  if (f->left) collect_rels(f->left, out);
  if (f->right) collect_rels(f->right, out);
}
}  // namespace

std::vector<std::string> relation_symbols(const Formula& f) {
  std::set<std::string> out;
  collect_rels(f, out);
  return {out.begin(), out.end()};
}

void check_against_signature(const Formula& f, const Signature& sig) {
  if (f->kind == FormulaKind::Rel) {
    const auto& rel = sig.require(f->rel);
    if (static_cast<int>(f->args.size()) != rel.arity)
      throw DomainError("relation '" + f->rel + "' expects " + std::to_string(rel.arity) +
                        " arguments, got " + std::to_string(f->args.size()));
  }
  if (f->left) check_against_signature(f->left, sig);
  if (f->right) check_against_signature(f->right, sig);
}

namespace {

Formula rebuild(const Formula& f, std::map<int, int>& env, int& counter) {
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Rel:
    case FormulaKind::Eq:
    case FormulaKind::Dist: {
      std::vector<int> args = f->args;
      bool changed = false;
      for (int& v : args) {
        auto it = env.find(v);
        if (it != env.end() && it->second != v) {
          v = it->second;
          changed = true;
        }
      }
      if (!changed) return f;
      if (f->kind == FormulaKind::Rel) return f_rel(f->rel, std::move(args));
      if (f->kind == FormulaKind::Eq) return f_eq(args[0], args[1]);
      return f_dist(args[0], args[1], f->cmp, f->bound);
    }
    case FormulaKind::Not:
      return f_not(rebuild(f->left, env, counter));
    case FormulaKind::And:
      return f_and(rebuild(f->left, env, counter), rebuild(f->right, env, counter));
    case FormulaKind::Or:
      return f_or(rebuild(f->left, env, counter), rebuild(f->right, env, counter));
    case FormulaKind::Implies:
      return f_implies(rebuild(f->left, env, counter), rebuild(f->right, env, counter));
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::CountGE:
    case FormulaKind::CountLE: {
      int fresh = ++counter;
      auto it = env.find(f->var);
      std::optional<int> saved;
      if (it != env.end()) saved = it->second;
      env[f->var] = fresh;
      Formula body = rebuild(f->left, env, counter);
      if (saved)
        env[f->var] = *saved;
      else
        env.erase(f->var);
      switch (f->kind) {
        case FormulaKind::Exists:
          return f_exists(fresh, std::move(body));
        case FormulaKind::Forall:
          return f_forall(fresh, std::move(body));
        case FormulaKind::CountGE:
          return f_count_ge(f->bound, fresh, std::move(body));
        default:
          return f_count_le(f->bound, fresh, std::move(body));
      }
    }
  }
  return f;
}

}  // namespace

Formula normalize(const Formula& f) {
  auto fv = free_vars(f);
  int counter = fv.empty() ? 0 : fv.back();
  std::map<int, int> env;
  return rebuild(f, env, counter);
}

Formula rename_free(const Formula& f, const std::vector<std::pair<int, int>>& mapping) {
  // Push bound variables past every free index and every substitution
  // target, so a direct free-occurrence substitution cannot capture.
  auto fv0 = free_vars(f);
  int floor = fv0.empty() ? 0 : fv0.back();
  for (const auto& [from, to] : mapping) floor = std::max(floor, to);
  std::map<int, int> renaming;
  int counter = floor;
  Formula g = rebuild(f, renaming, counter);

  std::map<int, int> env;
  auto fv = free_vars(g);
  for (const auto& [from, to] : mapping)
    if (std::binary_search(fv.begin(), fv.end(), from)) env[from] = to;

  struct Subst {
    const std::map<int, int>& env;
    Formula apply(const Formula& f) {
      switch (f->kind) {
        case FormulaKind::True:
        case FormulaKind::False:
          return f;
        case FormulaKind::Rel:
        case FormulaKind::Eq:
        case FormulaKind::Dist: {
          std::vector<int> args = f->args;
          for (int& v : args) {
            auto it = env.find(v);
            if (it != env.end()) v = it->second;
          }
          if (f->kind == FormulaKind::Rel) return f_rel(f->rel, std::move(args));
          if (f->kind == FormulaKind::Eq) return f_eq(args[0], args[1]);
          return f_dist(args[0], args[1], f->cmp, f->bound);
        }
        case FormulaKind::Not:
          return f_not(apply(f->left));
        case FormulaKind::And:
          return f_and(apply(f->left), apply(f->right));
        case FormulaKind::Or:
          return f_or(apply(f->left), apply(f->right));
        case FormulaKind::Implies:
          return f_implies(apply(f->left), apply(f->right));
        case FormulaKind::Exists:
          return f_exists(f->var, apply(f->left));
        case FormulaKind::Forall:
          return f_forall(f->var, apply(f->left));
        case FormulaKind::CountGE:
          return f_count_ge(f->bound, f->var, apply(f->left));
        case FormulaKind::CountLE:
          return f_count_le(f->bound, f->var, apply(f->left));
      }
      return f;
    }
  };
  return normalize(Subst{env}.apply(g));
}

Formula pack(const Formula& f) {
  auto fv = free_vars(f);
  std::vector<std::pair<int, int>> mapping;
  for (size_t i = 0; i < fv.size(); ++i) mapping.emplace_back(fv[i], static_cast<int>(i) + 1);
  return rename_free(f, mapping);
}

Formula theta_r(int p, int r) {
  if (p < 2) throw DomainError("theta_r requires arity p >= 2");
  if (r < 0) throw DomainError("theta_r requires r >= 0");
  Formula out;
  for (int i = 1; i <= p; ++i)
    for (int j = i + 1; j <= p; ++j) {
      Formula atom = f_dist(i, j, DistCmp::Gt, r);
      out = out ? f_and(std::move(out), std::move(atom)) : std::move(atom);
    }
  return out;
}

Formula lambda_r(const Formula& f, int r) {
  if (r < 0) throw DomainError("lambda_r requires r >= 0");
  auto fv = free_vars(f);
  int p = static_cast<int>(fv.size());
  for (int i = 0; i < p; ++i)
    if (fv[i] != i + 1) throw DomainError("lambda_r requires a packed formula (free vars x1..xp)");
  if (p == 0) return normalize(f);

  std::vector<std::pair<int, int>> shift;
  for (int i = 1; i <= p; ++i) shift.emplace_back(i, p + i);
  Formula body = rename_free(f, shift);

  Formula guards;
  for (int i = 1; i <= p; ++i) {
    Formula g = f_dist(i, p + i, DistCmp::Leq, r);
    guards = guards ? f_and(std::move(guards), std::move(g)) : std::move(g);
  }
  Formula inner = f_and(std::move(guards), std::move(body));
  for (int i = p; i >= 1; --i) inner = f_exists(p + i, std::move(inner));
  return normalize(inner);
}

// --- locality radius (syntactic guard analysis) ---

namespace {

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f->kind == FormulaKind::And) {
    flatten_and(f->left, out);
    flatten_and(f->right, out);
  } else {
    out.push_back(f);
  }
}

// Offset of a bound variable from the free-variable centers, derived from a
// distance or adjacency guard tying it to an in-scope variable.
std::optional<int> find_guard(const std::vector<Formula>& conjuncts, int var,
                              const std::map<int, int>& offsets) {
  std::optional<int> best;
  auto consider = [&](int candidate) {
    if (!best || candidate < *best) best = candidate;
  };
  for (const auto& c : conjuncts) {
    if (c->kind == FormulaKind::Dist && c->cmp == DistCmp::Leq) {
      int u = c->args[0], v = c->args[1];
      if (u == var && offsets.count(v)) consider(offsets.at(v) + static_cast<int>(c->bound));
      if (v == var && offsets.count(u)) consider(offsets.at(u) + static_cast<int>(c->bound));
    } else if (c->kind == FormulaKind::Rel && c->args.size() >= 2) {
      bool has_var = std::find(c->args.begin(), c->args.end(), var) != c->args.end();
      if (!has_var) continue;
      for (int z : c->args)
        if (z != var && offsets.count(z)) consider(offsets.at(z) + 1);
    }
  }
  return best;
}

std::optional<int> radius_of(const Formula& f, std::map<int, int>& offsets) {
  switch (f->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return 0;
    case FormulaKind::Eq: {
      int need = 0;
      for (int v : f->args) {
        if (!offsets.count(v)) return std::nullopt;
        need = std::max(need, offsets.at(v));
      }
      return need;
    }
    case FormulaKind::Rel: {
      std::vector<int> offs;
      for (int v : f->args) {
        if (!offsets.count(v)) return std::nullopt;
        offs.push_back(offsets.at(v));
      }
      std::set<int> distinct(f->args.begin(), f->args.end());
      if (distinct.size() < 2) return offs.empty() ? 0 : *std::max_element(offs.begin(), offs.end());
      // Tuple vertices are pairwise Gaifman-adjacent, so each argument lies
      // within 1 of the closest other argument.
      int need = 1;
      for (size_t i = 0; i < offs.size(); ++i) {
        int other = INT_MAX;
        for (size_t j = 0; j < offs.size(); ++j)
          if (j != i) other = std::min(other, offs[j]);
        need = std::max(need, std::min(offs[i], other + 1));
      }
      return need;
    }
    case FormulaKind::Dist: {
      int ou, ov;
      if (!offsets.count(f->args[0]) || !offsets.count(f->args[1])) return std::nullopt;
      ou = offsets.at(f->args[0]);
      ov = offsets.at(f->args[1]);
      // A witnessing geodesic stays within `bound` of the closer endpoint.
      return std::max(std::max(ou, ov), std::min(ou, ov) + static_cast<int>(f->bound));
    }
    case FormulaKind::Not:
      return radius_of(f->left, offsets);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
      auto a = radius_of(f->left, offsets);
      auto b = radius_of(f->right, offsets);
      if (!a || !b) return std::nullopt;
      return std::max(*a, *b);
    }
    case FormulaKind::Exists:
    case FormulaKind::CountGE:
    case FormulaKind::CountLE: {
      std::vector<Formula> conjuncts;
      flatten_and(f->left, conjuncts);
      auto g = find_guard(conjuncts, f->var, offsets);
      if (!g) return std::nullopt;
      offsets[f->var] = *g;
      auto r = radius_of(f->left, offsets);
      offsets.erase(f->var);
      return r;
    }
    case FormulaKind::Forall: {
      if (f->left->kind != FormulaKind::Implies) return std::nullopt;
      std::vector<Formula> conjuncts;
      flatten_and(f->left->left, conjuncts);
      auto g = find_guard(conjuncts, f->var, offsets);
      if (!g) return std::nullopt;
      offsets[f->var] = *g;
      auto r = radius_of(f->left, offsets);
      offsets.erase(f->var);
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace

FormulaMeta meta(const Formula& f) {
  FormulaMeta m;
  m.free_vars = free_vars(f);
  m.qrank = qrank(f);
  std::map<int, int> offsets;
  for (int v : m.free_vars) offsets[v] = 0;
  m.locality_radius = radius_of(f, offsets);
  return m;
}

// --- parser ---

namespace {

enum class Tok { End, Ident, Int, LParen, RParen, Comma, Equal, Bang, Amp, Pipe, Arrow, Dot, Leq, Geq, Gt };

struct Token {
  Tok type;
  std::string text;
  long long value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_ = {Tok::End, "", 0, line_, col_};
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    auto single = [&](Tok t) {
      tok_.type = t;
      tok_.text = std::string(1, c);
      ++pos_;
      ++col_;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.type = Tok::Ident;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++col_;
      }
      tok_.type = Tok::Int;
      tok_.text = text_.substr(start, pos_ - start);
      tok_.value = std::stoll(tok_.text);
      return;
    }
    switch (c) {
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case ',': single(Tok::Comma); return;
      case '!': single(Tok::Bang); return;
      case '&': single(Tok::Amp); return;
      case '|': single(Tok::Pipe); return;
      case '.': single(Tok::Dot); return;
      case '=': single(Tok::Equal); return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          tok_.type = Tok::Arrow;
          tok_.text = "->";
          pos_ += 2;
          col_ += 2;
          return;
        }
        throw ParseError("unexpected '-'", line_, col_);
      case '<':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          tok_.type = Tok::Leq;
          tok_.text = "<=";
          pos_ += 2;
          col_ += 2;
          return;
        }
        throw ParseError("unexpected '<'", line_, col_);
      case '>':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          tok_.type = Tok::Geq;
          tok_.text = ">=";
          pos_ += 2;
          col_ += 2;
          return;
        }
        single(Tok::Gt);
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, const Signature* sig) : lex_(text), sig_(sig) {}

  Formula parse() {
    Formula f = implies();
    const Token& t = lex_.peek();
    if (t.type != Tok::End) throw ParseError("trailing input '" + t.text + "'", t.line, t.col);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw ParseError(msg + (t.text.empty() ? "" : " near '" + t.text + "'"), t.line, t.col);
  }

  Token expect(Tok type, const char* what) {
    if (lex_.peek().type != type) fail(std::string("expected ") + what);
    return lex_.take();
  }

  // x<i>, i >= 1
  int variable() {
    Token t = expect(Tok::Ident, "variable");
    if (t.text.size() < 2 || t.text[0] != 'x' ||
        !std::all_of(t.text.begin() + 1, t.text.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("expected variable x<i>, got '" + t.text + "'", t.line, t.col);
    int idx = std::stoi(t.text.substr(1));
    if (idx < 1) throw ParseError("variable index must be >= 1", t.line, t.col);
    return idx;
  }

  Formula implies() {
    Formula left = disjunction();
    if (lex_.peek().type == Tok::Arrow) {
      lex_.take();
      return f_implies(std::move(left), implies());  // right-associative
    }
    return left;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (lex_.peek().type == Tok::Pipe) {
      lex_.take();
      f = f_or(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (lex_.peek().type == Tok::Amp) {
      lex_.take();
      f = f_and(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    const Token& t = lex_.peek();
    if (t.type == Tok::Bang) {
      lex_.take();
      return f_not(unary());
    }
    if (t.type == Tok::Ident && (t.text == "E" || t.text == "A")) return quantified();
    return atom();
  }

  Formula quantified() {
    Token q = lex_.take();
    bool universal = q.text == "A";
    std::optional<std::pair<bool, long long>> counting;  // (is_ge, bound)
    if (!universal && (lex_.peek().type == Tok::Geq || lex_.peek().type == Tok::Leq)) {
      bool ge = lex_.take().type == Tok::Geq;
      Token n = expect(Tok::Int, "integer bound");
      counting = {ge, n.value};
    }
    int var = variable();
    expect(Tok::Dot, "'.'");
    Formula body = implies();  // quantifier scope extends maximally right
    if (universal) return f_forall(var, std::move(body));
    if (!counting) return f_exists(var, std::move(body));
    return counting->first ? f_count_ge(counting->second, var, std::move(body))
                           : f_count_le(counting->second, var, std::move(body));
  }

  Formula atom() {
    const Token& t = lex_.peek();
    if (t.type == Tok::LParen) {
      lex_.take();
      Formula f = implies();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.type != Tok::Ident) fail("expected formula");
    if (t.text == "true") {
      lex_.take();
      return f_true();
    }
    if (t.text == "false") {
      lex_.take();
      return f_false();
    }
    if (t.text == "dist") {
      Token d = lex_.take();
      expect(Tok::LParen, "'('");
      int u = variable();
      expect(Tok::Comma, "','");
      int v = variable();
      expect(Tok::RParen, "')'");
      DistCmp cmp;
      switch (lex_.peek().type) {
        case Tok::Leq: cmp = DistCmp::Leq; break;
        case Tok::Gt: cmp = DistCmp::Gt; break;
        case Tok::Equal: cmp = DistCmp::Eq; break;
        default:
          throw ParseError("expected '<=', '>' or '=' after dist(...)", d.line, d.col);
      }
      lex_.take();
      Token b = expect(Tok::Int, "distance bound");
      return f_dist(u, v, cmp, b.value);
    }
    // either a relation atom name(...) or a variable equality x<i>=x<j>
    if (lex_.peek().text.size() >= 2 && lex_.peek().text[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(lex_.peek().text[1]))) {
      int u = variable();
      expect(Tok::Equal, "'='");
      int v = variable();
      return f_eq(u, v);
    }
    Token name = lex_.take();
    expect(Tok::LParen, "'('");
    std::vector<int> args;
    args.push_back(variable());
    while (lex_.peek().type == Tok::Comma) {
      lex_.take();
      args.push_back(variable());
    }
    expect(Tok::RParen, "')'");
    if (sig_) {
      int idx = sig_->index_of(name.text);
      if (idx < 0) throw ParseError("unknown relation '" + name.text + "'", name.line, name.col);
      int arity = sig_->relations[idx].arity;
      if (static_cast<int>(args.size()) != arity)
        throw ParseError("relation '" + name.text + "' expects " + std::to_string(arity) +
                             " arguments, got " + std::to_string(args.size()),
                         name.line, name.col);
    }
    return f_rel(name.text, std::move(args));
  }

  Lexer lex_;
  const Signature* sig_;
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature* sig) {
  return normalize(Parser(text, sig).parse());
}

namespace {

// precedence: -> and quantifiers 1, | 2, & 3, ! 4, atoms 5
void print_rec(const Formula& f, int min_prec, std::string& out) {
  auto wrap = [&](int prec, auto&& inner) {
    bool parens = prec < min_prec;
    if (parens) out += '(';
    inner();
    if (parens) out += ')';
  };
  switch (f->kind) {
    case FormulaKind::True:
      out += "true";
      return;
    case FormulaKind::False:
      out += "false";
      return;
    case FormulaKind::Rel:
      out += f->rel;
      out += '(';
      for (size_t i = 0; i < f->args.size(); ++i) {
        if (i) out += ',';
        out += 'x' + std::to_string(f->args[i]);
      }
      out += ')';
      return;
    case FormulaKind::Eq:
      out += 'x' + std::to_string(f->args[0]) + "=x" + std::to_string(f->args[1]);
      return;
    case FormulaKind::Dist:
      out += "dist(x" + std::to_string(f->args[0]) + ",x" + std::to_string(f->args[1]) + ") ";
      out += f->cmp == DistCmp::Leq ? "<=" : (f->cmp == DistCmp::Gt ? ">" : "=");
      out += ' ' + std::to_string(f->bound);
      return;
    case FormulaKind::Not:
      wrap(4, [&] {
        out += '!';
        print_rec(f->left, 4, out);
      });
      return;
    case FormulaKind::And:
      wrap(3, [&] {
        print_rec(f->left, 3, out);
        out += " & ";
        print_rec(f->right, 4, out);
      });
      return;
    case FormulaKind::Or:
      wrap(2, [&] {
        print_rec(f->left, 2, out);
        out += " | ";
        print_rec(f->right, 3, out);
      });
      return;
    case FormulaKind::Implies:
      wrap(1, [&] {
        print_rec(f->left, 2, out);
        out += " -> ";
        print_rec(f->right, 1, out);
      });
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::CountGE:
    case FormulaKind::CountLE:
      wrap(1, [&] {
        switch (f->kind) {
          case FormulaKind::Exists: out += "E "; break;
          case FormulaKind::Forall: out += "A "; break;
          case FormulaKind::CountGE: out += "E>=" + std::to_string(f->bound) + ' '; break;
          default: out += "E<=" + std::to_string(f->bound) + ' '; break;
        }
        out += 'x' + std::to_string(f->var) + ". ";
        print_rec(f->left, 1, out);
      });
      return;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_rec(f, 0, out);
  return out;
}

}  // namespace fostat
