#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <set>

#include "fostat/eval.hpp"
#include "fostat/formula.hpp"
#include "fostat/gen.hpp"
#include "fostat/signatures.hpp"
#include "oracle.hpp"

using namespace fostat;

TEST_CASE("parsing basics") {
  Formula f = parse_formula("adj(x1,x2)");
  CHECK(f->kind == FormulaKind::Rel);
  CHECK(free_vars(f) == std::vector<int>{1, 2});
  CHECK(qrank(f) == 0);

  Formula g = parse_formula("E x2. adj(x1,x2)");
  CHECK(g->kind == FormulaKind::Exists);
  CHECK(free_vars(g) == std::vector<int>{1});
  CHECK(qrank(g) == 1);

  Formula h = parse_formula("E>=2 x2. adj(x1,x2)");
  CHECK(h->kind == FormulaKind::CountGE);
  CHECK(h->bound == 2);
  CHECK(qrank(h) == 1);

  CHECK(parse_formula("true")->kind == FormulaKind::True);
  CHECK(parse_formula("x1=x2")->kind == FormulaKind::Eq);
  Formula d = parse_formula("dist(x1,x2) <= 3");
  CHECK(d->kind == FormulaKind::Dist);
  CHECK(d->bound == 3);
}

TEST_CASE("precedence and associativity") {
  // ! > & > | > -> with -> right-associative
  Formula f = parse_formula("!adj(x1,x2) & x1=x2 | true -> false -> true");
  CHECK(f->kind == FormulaKind::Implies);
  CHECK(f->right->kind == FormulaKind::Implies);
  CHECK(f->left->kind == FormulaKind::Or);
  CHECK(f->left->left->kind == FormulaKind::And);
  CHECK(f->left->left->left->kind == FormulaKind::Not);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_WITH_AS(parse_formula("adj(x1,"), doctest::Contains("1:8"), ParseError);
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("E x1 adj(x1,x1)"), ParseError);
  Signature sig = graph_signature();
  CHECK_THROWS_AS(parse_formula("edge(x1,x2)", &sig), ParseError);
  CHECK_THROWS_AS(parse_formula("adj(x1)", &sig), ParseError);
}

TEST_CASE("print and reparse round trip on a generated corpus") {
  Signature sig = rooted_signature();
  oracle::Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    Formula f = normalize(oracle::random_formula(rng, sig, 3, 1 + rng.below(3)));
    Formula back = parse_formula(print_formula(f));
    CHECK(equal(f, back));
  }
}

TEST_CASE("printing examples") {
  CHECK(print_formula(parse_formula("adj(x1,x2)")) == "adj(x1,x2)");
  CHECK(print_formula(theta_r(2, 2)) == "dist(x1,x2) > 2");
}

TEST_CASE("normalize makes structural equality track alpha-equivalence") {
  Formula a = parse_formula("E x5. adj(x1,x5)");
  Formula b = parse_formula("E x9. adj(x1,x9)");
  CHECK(equal(a, b));
  // same-name bound variables on one branch are renamed apart
  Formula c = parse_formula("E x2. adj(x1,x2) & (E x2. adj(x2,x2))");
  std::set<int> bound;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    if (!f) return;
    if (f->kind == FormulaKind::Exists) CHECK(bound.insert(f->var).second);
    walk(f->left);
    walk(f->right);
  };
  walk(c);
}

TEST_CASE("pack") {
  Formula f = parse_formula("adj(x2,x5)");
  Formula packed = pack(f);
  CHECK(free_vars(packed) == std::vector<int>{1, 2});
  CHECK(packed->args == std::vector<int>{1, 2});  // order of occurrence preserved

  CHECK(equal(pack(parse_formula("E x1. adj(x1,x1)")), parse_formula("E x1. adj(x1,x1)")));
  CHECK(equal(pack(parse_formula("adj(x1,x2)")), parse_formula("adj(x1,x2)")));
}

TEST_CASE("pairing is invariant under packing") {
  oracle::Rng rng(11);
  Signature sig = graph_signature();
  for (int trial = 0; trial < 50; ++trial) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(6), 40);
    Formula f = oracle::random_formula(rng, sig, 4, 2);
    Pairing a = stone_pairing(s, f);
    Pairing b = stone_pairing(s, pack(f));
    CHECK(a.value() == b.value());
  }
}

TEST_CASE("theta_r") {
  CHECK(print_formula(theta_r(2, 3)) == "dist(x1,x2) > 3");
  // p=3: conjuncts for (1,2),(1,3),(2,3)
  Formula t = theta_r(3, 1);
  int atoms = 0;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    if (!f) return;
    if (f->kind == FormulaKind::Dist) ++atoms;
    walk(f->left);
    walk(f->right);
  };
  walk(t);
  CHECK(atoms == 3);
  CHECK_THROWS_AS(theta_r(1, 1), DomainError);

  // theta_0 on a connected structure behaves like x1 != x2
  Structure p4 = make_path(4);
  CHECK(solution_count(p4, theta_r(2, 0)) == Integer(12));
}

TEST_CASE("lambda_r") {
  Formula hub = parse_formula("E>=9 x2. adj(x1,x2)");
  Structure star = make_star(10);
  CHECK(solution_count(star, hub) == Integer(1));
  CHECK(solution_count(star, lambda_r(hub, 1)) == Integer(10));

  // qrank(lambda_r(f)) = qrank(f) + |Fv(f)|
  Formula f = parse_formula("adj(x1,x2) & (E x3. adj(x2,x3))");
  CHECK(qrank(lambda_r(f, 2)) == qrank(f) + 2);

  // lambda_0 is semantically the identity
  oracle::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(5), 40);
    Formula g = pack(oracle::random_formula(rng, graph_signature(), 2, 1));
    CHECK(stone_pairing(s, g).value() == stone_pairing(s, lambda_r(g, 0)).value());
  }

  // monotone in r
  for (int trial = 0; trial < 20; ++trial) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(5), 40);
    Formula g = pack(oracle::random_formula(rng, graph_signature(), 2, 1));
    CHECK(stone_pairing(s, lambda_r(g, 1)).value() <= stone_pairing(s, lambda_r(g, 2)).value());
  }

  CHECK_THROWS_AS(lambda_r(parse_formula("adj(x2,x3)"), 1), DomainError);
}

TEST_CASE("meta radius examples") {
  Signature sig{{{"adj", 2, true}, {"M", 1, false}}};
  auto radius = [&](const std::string& text) {
    return meta(parse_formula(text, &sig)).locality_radius;
  };
  CHECK(radius("adj(x1,x2)") == 1);
  CHECK(radius("E x2. dist(x1,x2)<=2 & M(x2)") == 2);
  CHECK(radius("E x2. adj(x1,x2)") == 1);
  CHECK(radius("E x2. M(x2)") == std::nullopt);  // unguarded quantifier
  CHECK(radius("M(x1)") == 0);
  CHECK(radius("x1=x2") == 0);
}

TEST_CASE("meta radius is sound on a random corpus") {
  oracle::Rng rng(77);
  Signature sig = rooted_signature();
  int finite_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Formula f = oracle::random_formula(rng, sig, 2, 1 + rng.below(2));
    auto m = meta(f);
    if (!m.locality_radius) continue;
    ++finite_seen;
    Structure s = oracle::random_rooted_tree(rng, 3 + rng.below(8));
    CHECK(validate_locality(s, f, *m.locality_radius));
  }
  CHECK(finite_seen > 20);  // the analysis actually fires
}

TEST_CASE("qrank counts counting quantifiers") {
  CHECK(qrank(parse_formula("E>=3 x1. E x2. adj(x1,x2)")) == 2);
}
