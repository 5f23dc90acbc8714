// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Everything is exact rational arithmetic; tolerances are zero.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "fostat/cli.hpp"
#include "fostat/eval.hpp"
#include "fostat/forest.hpp"
#include "fostat/gen.hpp"
#include "fostat/interp.hpp"
#include "fostat/sequence.hpp"
#include "fostat/signatures.hpp"
#include "oracle.hpp"

using namespace fostat;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " " << number << " " << name;
  if (!detail.empty()) std::cout << " [" << detail << "]";
  std::cout << "\n";
  if (!ok) ++failures;
}

bool contains_kind(const Formula& f, std::initializer_list<FormulaKind> kinds) {
  if (!f) return false;
  for (FormulaKind k : kinds)
    if (f->kind == k) return true;
  return contains_kind(f->left, kinds) || contains_kind(f->right, kinds);
}

void criterion_1_closed_forms() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  Formula adj = parse_formula("adj(x1,x2)");
  Formula dist2 = parse_formula("dist(x1,x2)<=2");
  for (int n = 2; n <= 100; ++n) {
    Structure p = make_path(n);
    ok = ok && stone_pairing(p, adj).value() == Rational(2 * (n - 1), n * n);
    if (n >= 5) ok = ok && stone_pairing(p, dist2).value() == Rational(5 * n - 6, n * n);
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 5.0;
  std::ostringstream detail;
  detail << "n=2..100, " << secs << "s";
  report(1, "closed-form path pairings", ok, detail.str());
}

void criterion_2_conjunction_bound() {
  oracle::Rng rng(20001);
  Signature sig = graph_signature();
  int violations = 0, done = 0;
  while (done < 1000) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(11), 35);
    Formula f = oracle::random_formula(rng, sig, 2, rng.below(3));
    Formula g = oracle::random_formula(rng, sig, 2, rng.below(3));
    Rational pf = stone_pairing(s, f).value();
    Rational pg = stone_pairing(s, g).value();
    Rational pfg = stone_pairing(s, f_and(f, g)).value();
    Rational diff = pf - pfg;
    if (diff < 0) diff = -diff;
    if (diff > Rational(1) - pg) ++violations;
    ++done;
  }
  report(2, "conjunction inequality on 1000 random triples", violations == 0,
         std::to_string(violations) + " violations");
}

void criterion_3_product_law() {
  oracle::Rng rng(30001);
  Signature sig = graph_signature();
  int violations = 0, done = 0;
  while (done < 500) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(6), 40);
    Formula f = oracle::random_formula(rng, sig, 2, rng.below(2));
    Formula g0 = oracle::random_formula(rng, sig, 2, rng.below(2));
    std::vector<std::pair<int, int>> shift;
    for (int v : free_vars(g0)) shift.emplace_back(v, v + 4);
    Formula g = rename_free(g0, shift);
    if (stone_pairing(s, f_and(f, g)).value() !=
        stone_pairing(s, f).value() * stone_pairing(s, g).value())
      ++violations;
    ++done;
  }
  report(3, "product law on 500 disjoint-variable conjunctions", violations == 0,
         std::to_string(violations) + " violations");
}

void criterion_4_union_bound() {
  int violations = 0, cases = 0;
  std::vector<Structure> corpus;
  for (int n : {5, 12, 30}) corpus.push_back(make_path(n));
  for (int m : {4, 9}) corpus.push_back(make_star(m));
  corpus.push_back(make_star_of_stars(3, 4));
  corpus.push_back(make_path_of_stars(3, 3));
  corpus.push_back(make_balanced_tree(2, 3));
  corpus.push_back(make_random_tree(25, 5));
  for (const auto& s : corpus)
    for (int p : {2, 3})
      for (int r : {1, 2}) {
        Rational lhs = stone_pairing(s, f_not(theta_r(p, r))).value();
        Rational bound = Rational(p * (p - 1) / 2) * residual_index(s, r);
        if (lhs > bound) ++violations;
        ++cases;
      }
  report(4, "union bound over the generator corpus", violations == 0,
         std::to_string(cases) + " cases, " + std::to_string(violations) + " violations");
}

void criterion_5_breaking() {
  auto start = std::chrono::steady_clock::now();
  oracle::Rng rng(50001);
  int violations = 0, done = 0;
  while (done < 1000) {
    Structure s = done % 3 == 2 ? oracle::random_graph(rng, 2 + rng.below(40), 15)
                                : make_random_tree(2 + rng.below(499), rng.gen());
    Rational eps(1 + rng.below(5), 6 + rng.below(10));
    int r = rng.below(4);
    BreakResult res = break_cover(s, eps, r);
    if (!res.check(s)) ++violations;
    ++done;
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = violations == 0 && secs < 60.0;
  std::ostringstream detail;
  detail << violations << " violations, " << secs << "s";
  report(5, "ball-cover invariants on 1000 random inputs", ok, detail.str());
}

void criterion_6_pairing_identity() {
  oracle::Rng rng(60001);
  int violations = 0, done = 0;
  EvalOptions opts;
  opts.override_work_limit = true;
  while (done < 300) {
    int k = 1 + rng.below(2);
    int n = 2 + rng.below(k == 1 ? 7 : 6);
    Structure s = oracle::random_graph(rng, n, 40);
    BasicScheme sc;
    sc.source = graph_signature();
    sc.target = graph_signature();
    sc.exponent = k;
    Formula def = oracle::random_formula(rng, sc.source, 2 * k, rng.below(2));
    if (contains_kind(def, {FormulaKind::Dist})) continue;
    sc.defs = {def};
    Formula probe = oracle::random_formula(rng, sc.target, 2, rng.below(2));
    if (contains_kind(probe, {FormulaKind::Dist})) continue;
    if (k > 1 && contains_kind(probe, {FormulaKind::CountGE, FormulaKind::CountLE})) continue;
    if (!verify_pairing_identity(sc, s, probe, opts).equal) ++violations;
    ++done;
  }
  report(6, "interpretation pairing identity on 300 random triples", violations == 0,
         std::to_string(violations) + " violations");
}

void criterion_7_round_trip() {
  oracle::Rng rng(70001);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Structure t = oracle::random_rooted_tree(rng, 1 + rng.below(200));
    Structure back = f_to_y(y_to_f(t));
    bool same = back.size() == t.size();
    for (const auto& rel : t.signature().relations) {
      int a = t.signature().index_of(rel.name);
      int b = back.signature().index_of(rel.name);
      same = same && b >= 0 && t.tuples(a) == back.tuples(b);
    }
    if (!same) ++violations;
  }
  report(7, "peel/graft round trip on 200 rooted trees", violations == 0,
         std::to_string(violations) + " violations");
}

void criterion_8_mass_transport() {
  oracle::Rng rng(80001);
  Signature sig = graph_signature();
  int violations = 0, cases = 0;
  while (cases < 2000) {
    Structure s = oracle::random_graph(rng, 2 + rng.below(10), 35);
    long long a = rng.below(4);
    long long b = rng.below(4);
    TransportReport rep;
    if (cases % 2 == 0) {
      Formula phi = oracle::random_formula(rng, sig, 1, rng.below(2));
      Formula psi = oracle::random_formula(rng, sig, 1, rng.below(2));
      if (free_vars(phi) != std::vector<int>{1} || free_vars(psi) != std::vector<int>{1}) continue;
      rep = check_fmtp(s, phi, psi, a, b);
    } else {
      std::vector<int> X, Y;
      for (int v = 0; v < s.size(); ++v) {
        if (rng.coin()) X.push_back(v);
        if (rng.coin()) Y.push_back(v);
      }
      rep = check_smtp(s, X, Y, a, b);
    }
    bool identity = rep.out_sum == rep.in_sum && rep.out_sum == rep.edges;
    bool sound = rep.vacuous || rep.conclusion;
    if (!identity || !sound) ++violations;
    ++cases;
  }
  report(8, "mass transport soundness over 2000 fuzzed cases", violations == 0,
         std::to_string(violations) + " violations");
}

void criterion_9_residual_families() {
  bool ok = true;
  for (int k = 2; k <= 30; ++k)
    ok = ok && residual_index(make_star_of_stars(k, k), 1) == Rational(1, k);
  for (int m : {2, 5, 17, 60}) ok = ok && residual_index(make_star(m), 1) == Rational(1);
  report(9, "residual trajectories of star families", ok);
}

void criterion_10_skeleton_masses() {
  oracle::Rng rng(100001);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Structure t = orient_from_roots(oracle::random_rooted_tree(rng, 1 + rng.below(80)));
    for (auto eps : {Rational(1, 2), Rational(1, 4), Rational(1, 10)}) {
      SkeletonNode node = skeleton_decompose(t, eps, 3);
      Rational total = 0;
      std::map<int, int> seen;
      std::function<void(const SkeletonNode&)> walk = [&](const SkeletonNode& nd) {
        total += nd.mass;
        ++seen[nd.principal_vertex];
        for (const auto& vs : nd.residual_vertices)
          for (int v : vs) ++seen[v];
        for (const auto& vs : nd.folded_vertices)
          for (int v : vs) ++seen[v];
        for (const auto& child : nd.children) walk(child);
      };
      walk(node);
      bool partition = static_cast<int>(seen.size()) == t.size();
      for (const auto& [v, times] : seen) partition = partition && times == 1;
      if (total != Rational(1) || !partition) ++violations;
    }
  }
  report(10, "skeleton mass conservation on 200 trees x 3 epsilons", violations == 0,
         std::to_string(violations) + " violations");
}

void criterion_11_determinism() {
  auto cli = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = fostat::cli::run(args, out, err);
    return std::make_pair(code, out.str());
  };
  bool ok = true;
  ok = ok && cli({"gen", "--family", "random_tree", "--params", "120", "--seed", "77", "--out",
                  "acceptance_rt.json"})
                     .first == 0;
  std::vector<std::vector<std::string>> corpus = {
      {"pairing", "--structure", "acceptance_rt.json", "--formula", "adj(x1,x2) & adj(x2,x3)"},
      {"residual", "--structure", "acceptance_rt.json", "--r", "2"},
      {"break", "--structure", "acceptance_rt.json", "--eps", "1/5", "--r", "1"},
      {"skeleton", "--structure", "acceptance_rt.json", "--eps", "1/4", "--max-depth", "3"},
      {"profile", "--structure", "acceptance_rt.json", "--root", "0", "--d-max", "5"},
      {"converge", "--family", "path", "--grid", "10,50,10", "--formula", "adj(x1,x2)",
       "--radius", "1"},
  };
  for (const auto& cmd : corpus) {
    auto base = cli(cmd);
    ok = ok && base.first == 0;
    for (const std::string& threads : {"1", "4"}) {
      auto cmd2 = cmd;
      cmd2.push_back("--threads");
      cmd2.push_back(threads);
      auto again = cli(cmd2);
      ok = ok && again.first == 0 && again.second == base.second;
    }
    auto rerun = cli(cmd);
    ok = ok && rerun.second == base.second;
  }
  std::remove("acceptance_rt.json");
  report(11, "golden corpus bit-identical across runs and threads 1/4", ok);
}

}  // namespace

int main() {
  criterion_1_closed_forms();
  criterion_2_conjunction_bound();
  criterion_3_product_law();
  criterion_4_union_bound();
  criterion_5_breaking();
  criterion_6_pairing_identity();
  criterion_7_round_trip();
  criterion_8_mass_transport();
  criterion_9_residual_families();
  criterion_10_skeleton_masses();
  criterion_11_determinism();
  if (failures == 0) {
    std::cout << "all acceptance criteria passed\n";
    return 0;
  }
  std::cout << failures << " acceptance criteria failed\n";
  return 1;
}
