#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fostat/eval.hpp"
#include "fostat/gen.hpp"
#include "fostat/sequence.hpp"
#include "fostat/signatures.hpp"
#include "oracle.hpp"

using namespace fostat;

namespace {

Structure complete_graph(int n) {
  std::vector<Tuple> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Structure(graph_signature(), n, {std::move(edges)});
}

Structure empty_graph(int n) { return Structure(graph_signature(), n, {{}}); }

}  // namespace

TEST_CASE("satisfies examples") {
  Structure k3 = complete_graph(3);
  Formula adj = parse_formula("adj(x1,x2)");
  CHECK(satisfies(k3, adj, {{1, 0}, {2, 1}}));

  Structure star = make_star(5);  // hub 0, four leaves
  Formula busy = parse_formula("E>=4 x2. adj(x1,x2)");
  CHECK(satisfies(star, busy, {{1, 0}}));
  CHECK(!satisfies(star, busy, {{1, 1}}));

  Structure p5 = make_path(5);
  CHECK(!satisfies(p5, parse_formula("dist(x1,x2)<=2"), {{1, 0}, {2, 3}}));

  CHECK_THROWS_AS(satisfies(k3, adj, {{1, 0}}), DomainError);  // x2 uncovered
}

TEST_CASE("solution_count examples") {
  CHECK(solution_count(complete_graph(3), parse_formula("adj(x1,x2)")) == Integer(6));
  CHECK(solution_count(empty_graph(7), parse_formula("x1=x1")) == Integer(7));
  CHECK(solution_count(empty_graph(4), parse_formula("false")) == Integer(0));
  // sentences land in {0,1}
  CHECK(solution_count(complete_graph(3), parse_formula("E x1. E x2. adj(x1,x2)")) == Integer(1));
  CHECK(solution_count(empty_graph(3), parse_formula("E x1. E x2. adj(x1,x2)")) == Integer(0));
}

TEST_CASE("stone_pairing examples") {
  Structure p10 = make_path(10);
  Pairing p = stone_pairing(p10, parse_formula("adj(x1,x2)"));
  CHECK(p.count == Integer(18));
  CHECK(p.denominator == Integer(100));

  CHECK(stone_pairing(p10, parse_formula("true")).value() == Rational(1));

  Pairing q = stone_pairing(p10, parse_formula("dist(x1,x2)<=2"));
  CHECK(q.count == Integer(44));
  CHECK(q.denominator == Integer(100));

  Pairing prod = stone_pairing(complete_graph(3), parse_formula("adj(x1,x2) & adj(x3,x4)"));
  CHECK(prod.value() == Rational(4, 9));

  CHECK_THROWS_AS(stone_pairing(empty_graph(0), parse_formula("true")), DomainError);
}

TEST_CASE("pairing_vector") {
  Structure p10 = make_path(10);
  auto got = pairing_vector(p10, {parse_formula("true"), parse_formula("false"),
                                  parse_formula("adj(x1,x2)"), parse_formula("adj(x1,x2)")});
  CHECK(got[0].second.value() == Rational(1));
  CHECK(got[1].second.value() == Rational(0));
  CHECK(got[2].second.value() == got[3].second.value());
}

TEST_CASE("evaluator agrees with the naive oracle on a random corpus") {
  oracle::Rng rng(2024);
  Signature sig = rooted_signature();
  for (int trial = 0; trial < 300; ++trial) {
    Structure s = trial % 2 == 0 ? oracle::random_rooted_tree(rng, 2 + rng.below(8))
                                 : oracle::random_graph(rng, 2 + rng.below(8), 35);
    const Signature& use = s.signature();
    Formula f = oracle::random_formula(rng, use, 3, 1 + rng.below(2));
    Pairing got = stone_pairing(s, f);
    CHECK(got.value() == oracle::pairing(s, f));
  }
}

TEST_CASE("optimization fast paths are bit-identical to brute force") {
  oracle::Rng rng(515);
  for (int trial = 0; trial < 200; ++trial) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(11), 30);
    Formula f = oracle::random_formula(rng, graph_signature(), 3, 1 + rng.below(2));

    EvalOptions plain;
    plain.product_rule = false;
    plain.use_locality = false;
    Pairing base = stone_pairing(s, f, plain);

    EvalOptions fancy;
    fancy.product_rule = true;
    fancy.use_locality = true;
    Pairing fast = stone_pairing(s, f, fancy);

    CHECK(base.count == fast.count);
    CHECK(base.denominator == fast.denominator);
  }
}

TEST_CASE("conjunction bound") {
  // |<f> - <f&g>| <= 1 - <g>, exactly, over randomized triples
  oracle::Rng rng(99);
  Signature sig = graph_signature();
  int done = 0;
  while (done < 1000) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(6), 40);
    Formula f = oracle::random_formula(rng, sig, 2, rng.below(3));
    Formula g = oracle::random_formula(rng, sig, 2, rng.below(3));
    Rational pf = stone_pairing(s, f).value();
    Rational pg = stone_pairing(s, g).value();
    Rational pfg = stone_pairing(s, f_and(f, g)).value();
    Rational diff = pf - pfg;
    if (diff < 0) diff = -diff;
    CHECK(diff <= Rational(1) - pg);
    ++done;
  }
}

TEST_CASE("product law for disjoint free variables") {
  oracle::Rng rng(123);
  Signature sig = graph_signature();
  int done = 0;
  while (done < 500) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(5), 40);
    Formula f = oracle::random_formula(rng, sig, 2, rng.below(2));
    // shift g's variables past f's to force disjointness
    Formula g0 = oracle::random_formula(rng, sig, 2, rng.below(2));
    std::vector<std::pair<int, int>> shift;
    for (int v : free_vars(g0)) shift.emplace_back(v, v + 4);
    Formula g = rename_free(g0, shift);
    Rational lhs = stone_pairing(s, f_and(f, g)).value();
    Rational rhs = stone_pairing(s, f).value() * stone_pairing(s, g).value();
    CHECK(lhs == rhs);
    ++done;
  }
}

TEST_CASE("monotonicity under disjunction weakening") {
  oracle::Rng rng(321);
  Signature sig = graph_signature();
  for (int trial = 0; trial < 100; ++trial) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(6), 40);
    Formula f = oracle::random_formula(rng, sig, 2, rng.below(2));
    Formula h = oracle::random_formula(rng, sig, 2, rng.below(2));
    CHECK(stone_pairing(s, f).value() <= stone_pairing(s, f_or(f, h)).value());
  }
}

TEST_CASE("union bound via theta_r") {
  // <!theta_r> <= C(p,2) * residual_index(s, r)
  oracle::Rng rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    Structure s = oracle::random_graph(rng, 3 + rng.below(8), 30);
    for (int p : {2, 3})
      for (int r : {1, 2}) {
        Rational lhs = stone_pairing(s, f_not(theta_r(p, r))).value();
        Rational bound = Rational(p * (p - 1) / 2) * residual_index(s, r);
        CHECK(lhs <= bound);
      }
  }
}

TEST_CASE("work guardrail") {
  Structure big = make_path(2000);
  Formula wide = parse_formula("adj(x1,x2) & adj(x3,x4)");  // 2000^4 > 10^9
  EvalOptions opts;
  opts.product_rule = false;
  CHECK_THROWS_AS(stone_pairing(big, wide, opts), WorkLimitError);
  opts.override_work_limit = true;
  opts.product_rule = true;  // product rule splits it into feasible factors
  CHECK(stone_pairing(big, wide, opts).value() ==
        Rational(2 * 1999, 2000 * 2000) * Rational(2 * 1999, 2000 * 2000));
}

TEST_CASE("thread count does not change results") {
  oracle::Rng rng(876);
  for (int trial = 0; trial < 40; ++trial) {
    Structure s = oracle::random_graph(rng, 3 + rng.below(9), 30);
    Formula f = oracle::random_formula(rng, graph_signature(), 3, 1 + rng.below(2));
    EvalOptions one;
    one.threads = 1;
    EvalOptions four;
    four.threads = 4;
    Pairing a = stone_pairing(s, f, one);
    Pairing b = stone_pairing(s, f, four);
    CHECK(a.count == b.count);
    CHECK(a.denominator == b.denominator);
  }
}

TEST_CASE("validate_locality rejects wrong claims") {
  Structure p6 = make_path(6);
  Formula far = parse_formula("dist(x1,x2)<=4");
  CHECK(validate_locality(p6, far, 4));
  CHECK(!validate_locality(p6, far, 0));
}
