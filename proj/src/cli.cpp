#include "fostat/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fostat/core.hpp"
#include "fostat/eval.hpp"
#include "fostat/forest.hpp"
#include "fostat/formula.hpp"
#include "fostat/gen.hpp"
#include "fostat/interp.hpp"
#include "fostat/sequence.hpp"

namespace fostat::cli {

namespace {

using nlohmann::json;

struct Common {
  int threads = 0;      // 0 = machine parallelism / FOSTAT_THREADS
  long long max_work = 0;  // 0 = keep default guardrail
  bool machine = false;

  EvalOptions options() const {
    EvalOptions opts;
    int t = threads;
    if (t == 0) {
      if (const char* env = std::getenv("FOSTAT_THREADS")) t = std::atoi(env);
      if (t == 0) t = static_cast<int>(std::thread::hardware_concurrency());
    }
    opts.threads = std::max(1, t);
    if (max_work > 0) opts.work_limit = Integer(max_work);
    if (max_work < 0) opts.override_work_limit = true;
    return opts;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--threads", common.threads, "worker threads (default: all cores)");
  cmd->add_option("--max-work", common.max_work,
                  "enumeration guardrail; -1 disables it entirely");
  cmd->add_flag("--json", common.machine, "machine output (JSON lines)");
}

Structure read_structure(const std::string& path) {
  if (path == "-") return load_structure(std::cin, "<stdin>");
  return load_structure_file(path);
}

void write_structure(const Structure& s, const std::string& path, std::ostream& out) {
  if (path == "-" || path.empty()) {
    save_structure(s, out);
  } else {
    save_structure_file(s, path);
  }
}

std::string render(const Rational& q) {
  return to_fraction_string(q) + " (" + to_decimal_string(q, 12) + ")";
}

std::string render(const Pairing& p) {
  std::ostringstream os;
  os << p.count << "/" << p.denominator << " (" << to_decimal_string(p.value(), 12) << ")";
  return os.str();
}

json rational_json(const Rational& q) {
  return {{"num", numerator(q).str()},
          {"den", denominator(q).str()},
          {"decimal", to_decimal_string(q, 12)}};
}

json pairing_json(const Pairing& p) {
  return {{"num", p.count.str()},
          {"den", p.denominator.str()},
          {"decimal", to_decimal_string(p.value(), 12)}};
}

std::vector<int> parse_vertex_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    int v = std::stoi(item, &used);
    if (used != item.size()) throw DomainError("bad vertex list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

Assignment parse_assignment(const std::string& text) {
  Assignment a;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw DomainError("assignment entries look like VAR=VERTEX, got '" + item + "'");
    std::string var = item.substr(0, eq);
    if (!var.empty() && (var[0] == 'x' || var[0] == 'X')) var = var.substr(1);
    a[std::stoi(var)] = std::stoi(item.substr(eq + 1));
  }
  return a;
}

BasicScheme pick_scheme(const std::string& scheme_path, const std::string& builtin) {
  if (!builtin.empty()) {
    if (builtin == "y_to_f") return y_to_f_scheme();
    if (builtin == "f_to_y") return f_to_y_scheme();
    throw DomainError("unknown builtin scheme '" + builtin + "' (y_to_f or f_to_y)");
  }
  if (scheme_path.empty()) throw DomainError("need --scheme FILE or --builtin NAME");
  return load_scheme_file(scheme_path);
}

struct Args {
  // shared raw option storage for all subcommands
  std::string structure, other, formula, formula2, assign, scheme, builtin, out_path;
  std::string family, eps = "1/2", centers, xs, ys, grid;
  std::vector<std::string> catalog;
  std::vector<int> radii;
  long long a = 1, b = 1;
  int r = 1, d = 1, d_max = 5, root = 0, n_max = 3, budget = 64, max_depth = 3, window = 5;
  std::vector<long long> params;
  std::uint64_t seed = 0;
  bool have_seed = false;
};

int dispatch(CLI::App& app, Args& args, const Common& common, std::ostream& out) {
  EvalOptions opts = common.options();

  if (app.got_subcommand("eval")) {
    Structure s = read_structure(args.structure);
    Formula f = parse_formula(args.formula, &s.signature());
    bool ok = satisfies(s, f, parse_assignment(args.assign), opts);
    if (common.machine)
      out << json{{"result", ok}}.dump() << "\n";
    else
      out << (ok ? "true" : "false") << "\n";
    return 0;
  }

  if (app.got_subcommand("pairing")) {
    Structure s = read_structure(args.structure);
    Formula f = parse_formula(args.formula, &s.signature());
    Pairing p = stone_pairing(s, f, opts);
    if (common.machine)
      out << pairing_json(p).dump() << "\n";
    else
      out << render(p) << "\n";
    return 0;
  }

  if (app.got_subcommand("dist")) {
    Structure s1 = read_structure(args.structure);
    Structure s2 = read_structure(args.other);
    Rational d = pseudo_distance(s1, s2, args.n_max, args.budget, opts);
    if (common.machine)
      out << rational_json(d).dump() << "\n";
    else
      out << render(d) << "\n";
    return 0;
  }

  if (app.got_subcommand("break")) {
    Structure s = read_structure(args.structure);
    Rational eps = parse_rational(args.eps);
    BreakResult res = break_cover(s, eps, args.r);
    bool ok = res.check(s);
    if (common.machine) {
      out << json{{"centers", res.centers},
                  {"cover_size", res.cover.size()},
                  {"invariants", ok ? "ok" : "violated"}}
                 .dump()
          << "\n";
    } else {
      out << "centers [";
      for (size_t i = 0; i < res.centers.size(); ++i)
        out << (i ? "," : "") << res.centers[i];
      out << "]\ncover size " << res.cover.size() << "\ninvariants "
          << (ok ? "ok" : "violated") << "\n";
    }
    return 0;
  }

  if (app.got_subcommand("split")) {
    Structure s = read_structure(args.structure);
    SplitResult res = split_by_centers(s, parse_vertex_list(args.centers), args.d);
    if (!args.out_path.empty()) {
      for (size_t i = 0; i < res.parts.size(); ++i)
        save_structure_file(res.parts[i], args.out_path + ".part" + std::to_string(i) + ".json");
      save_structure_file(res.residue, args.out_path + ".residue.json");
    }
    if (common.machine) {
      json sizes = json::array();
      for (const auto& p : res.parts) sizes.push_back(p.size());
      out << json{{"part_sizes", std::move(sizes)}, {"residue_size", res.residue.size()}}.dump()
          << "\n";
    } else {
      out << "parts";
      for (const auto& p : res.parts) out << " " << p.size();
      out << "\nresidue " << res.residue.size() << "\n";
    }
    return 0;
  }

  if (app.got_subcommand("residual")) {
    Structure s = read_structure(args.structure);
    Rational v = residual_index(s, args.r);
    if (common.machine)
      out << rational_json(v).dump() << "\n";
    else
      out << render(v) << "\n";
    return 0;
  }

  if (app.got_subcommand("profile")) {
    Structure s = read_structure(args.structure);
    auto prof = dispersion_profile(s, args.root, args.d_max);
    if (common.machine) {
      json values = json::array();
      for (const auto& v : prof) values.push_back(rational_json(v));
      out << json{{"profile", std::move(values)}}.dump() << "\n";
    } else {
      for (int d = 0; d < static_cast<int>(prof.size()); ++d)
        out << "d=" << d << " " << render(prof[d]) << "\n";
    }
    return 0;
  }

  if (app.got_subcommand("interpret")) {
    Structure s = read_structure(args.structure);
    BasicScheme scheme = pick_scheme(args.scheme, args.builtin);
    Structure image = args.builtin == "y_to_f"   ? y_to_f(s, opts)
                      : args.builtin == "f_to_y" ? f_to_y(s, opts)
                                                 : apply_scheme(scheme, s, opts);
    write_structure(image, args.out_path, out);
    return 0;
  }

  if (app.got_subcommand("rewrite")) {
    BasicScheme scheme = pick_scheme(args.scheme, args.builtin);
    Formula f = parse_formula(args.formula, &scheme.target);
    Formula g = rewrite_formula(scheme, f);
    if (common.machine)
      out << json{{"formula", print_formula(g)}}.dump() << "\n";
    else
      out << print_formula(g) << "\n";
    return 0;
  }

  if (app.got_subcommand("fmtp")) {
    Structure s = read_structure(args.structure);
    Formula phi = parse_formula(args.formula, &s.signature());
    Formula psi = parse_formula(args.formula2, &s.signature());
    TransportReport rep = check_fmtp(s, phi, psi, args.a, args.b, opts);
    if (common.machine) {
      out << json{{"premise_out", rep.premise_out},
                  {"premise_in", rep.premise_in},
                  {"conclusion", rep.conclusion},
                  {"vacuous", rep.vacuous},
                  {"edges", rep.edges.str()}}
                 .dump()
          << "\n";
    } else {
      out << "premises " << (rep.premise_out ? "ok" : "fail") << "/"
          << (rep.premise_in ? "ok" : "fail") << (rep.vacuous ? " (vacuous)" : "")
          << "\nconclusion " << (rep.conclusion ? "holds" : "fails") << ": " << render(rep.lhs)
          << " <= " << render(rep.rhs) << "\nedges " << rep.edges << "\n";
    }
    return 0;
  }

  if (app.got_subcommand("smtp")) {
    Structure s = read_structure(args.structure);
    TransportReport rep =
        check_smtp(s, parse_vertex_list(args.xs), parse_vertex_list(args.ys), args.a, args.b);
    if (common.machine) {
      out << json{{"premise_out", rep.premise_out},
                  {"premise_in", rep.premise_in},
                  {"conclusion", rep.conclusion},
                  {"vacuous", rep.vacuous},
                  {"edges", rep.edges.str()}}
                 .dump()
          << "\n";
    } else {
      out << "premises " << (rep.premise_out ? "ok" : "fail") << "/"
          << (rep.premise_in ? "ok" : "fail") << (rep.vacuous ? " (vacuous)" : "")
          << "\nconclusion " << (rep.conclusion ? "holds" : "fails") << ": " << render(rep.lhs)
          << " <= " << render(rep.rhs) << "\nedges " << rep.edges << "\n";
    }
    return 0;
  }

  if (app.got_subcommand("skeleton")) {
    Structure s = read_structure(args.structure);
    if (s.signature().index_of("arc") < 0) s = orient_from_roots(s);
    SkeletonNode node = skeleton_decompose(s, parse_rational(args.eps), args.max_depth);
    out << skeleton_to_json(node) << "\n";
    return 0;
  }

  if (app.got_subcommand("gen")) {
    FamilySpec spec;
    spec.family = args.family;
    spec.params = args.params;
    if (args.have_seed) spec.seed = args.seed;
    Structure s = generate(spec);
    write_structure(s, args.out_path, out);
    return 0;
  }

  if (app.got_subcommand("converge")) {
    std::vector<int> grid;
    {
      auto bounds = parse_vertex_list(args.grid);  // lo,hi,step
      if (bounds.size() != 3 || bounds[2] <= 0)
        throw DomainError("--grid expects LO,HI,STEP with positive step");
      for (int n = bounds[0]; n <= bounds[1]; n += bounds[2]) grid.push_back(n);
    }
    std::vector<Formula> catalog;
    Signature sig;
    {
      FamilySpec probe;
      probe.family = args.family;
      probe.params = args.params.empty() ? std::vector<long long>{} : args.params;
      probe.params.insert(probe.params.begin(), grid.empty() ? 1 : grid.front());
      if (args.have_seed) probe.seed = args.seed;
      sig = generate(probe).signature();
    }
    for (const auto& text : args.catalog) catalog.push_back(parse_formula(text, &sig));

    auto family = [&](int n) {
      FamilySpec spec;
      spec.family = args.family;
      spec.params = args.params;
      spec.params.insert(spec.params.begin(), n);
      if (args.have_seed) spec.seed = args.seed;
      return generate(spec);
    };
    ConvergenceReport rep =
        convergence_report(family, grid, catalog, args.radii, args.window, opts);
    for (const auto& t : rep.trajectories)
      for (const auto& [n, p] : t.points)
        out << json{{"n", n},
                    {"formula", print_formula(t.formula)},
                    {"num", p.count.str()},
                    {"den", p.denominator.str()},
                    {"decimal", to_decimal_string(p.value(), 12)}}
                   .dump()
            << "\n";
    for (const auto& t : rep.trajectories)
      out << json{{"formula", print_formula(t.formula)},
                  {"cauchy_tail", rational_json(t.cauchy_tail)},
                  {"window", rep.window}}
                 .dump()
          << "\n";
    for (const auto& rt : rep.residuals)
      for (const auto& [n, v] : rt.points)
        out << json{{"n", n}, {"r", rt.r}, {"residual", rational_json(v)}}.dump() << "\n";
    return 0;
  }

  return 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact first-order statistics over finite relational structures"};
  app.require_subcommand(1);
  Common common;
  Args a;

  auto* c_eval = app.add_subcommand("eval", "check satisfaction under an assignment");
  c_eval->add_option("--structure", a.structure)->required();
  c_eval->add_option("--formula", a.formula)->required();
  c_eval->add_option("--assign", a.assign, "e.g. 1=0,2=3");

  auto* c_pairing = app.add_subcommand("pairing", "exact Stone pairing");
  c_pairing->add_option("--structure", a.structure)->required();
  c_pairing->add_option("--formula", a.formula)->required();

  auto* c_dist = app.add_subcommand("dist", "pseudometric lower bound between structures");
  c_dist->add_option("--structure", a.structure)->required();
  c_dist->add_option("--other", a.other)->required();
  c_dist->add_option("--n-max", a.n_max);
  c_dist->add_option("--budget", a.budget);

  auto* c_break = app.add_subcommand("break", "greedy ball-cover breaking");
  c_break->add_option("--structure", a.structure)->required();
  c_break->add_option("--eps", a.eps, "rational like 1/2")->required();
  c_break->add_option("--r", a.r)->required();

  auto* c_split = app.add_subcommand("split", "cut out d-balls around centers");
  c_split->add_option("--structure", a.structure)->required();
  c_split->add_option("--centers", a.centers)->required();
  c_split->add_option("--d", a.d)->required();
  c_split->add_option("--out", a.out_path, "output file prefix");

  auto* c_residual = app.add_subcommand("residual", "max relative ball size");
  c_residual->add_option("--structure", a.structure)->required();
  c_residual->add_option("--r", a.r)->required();

  auto* c_profile = app.add_subcommand("profile", "ball growth around a root");
  c_profile->add_option("--structure", a.structure)->required();
  c_profile->add_option("--root", a.root)->required();
  c_profile->add_option("--d-max", a.d_max);

  auto* c_interp = app.add_subcommand("interpret", "apply an interpretation scheme");
  c_interp->add_option("--structure", a.structure)->required();
  c_interp->add_option("--scheme", a.scheme);
  c_interp->add_option("--builtin", a.builtin, "y_to_f or f_to_y");
  c_interp->add_option("--out", a.out_path);

  auto* c_rewrite = app.add_subcommand("rewrite", "pull a formula back through a scheme");
  c_rewrite->add_option("--scheme", a.scheme);
  c_rewrite->add_option("--builtin", a.builtin, "y_to_f or f_to_y");
  c_rewrite->add_option("--formula", a.formula)->required();

  auto* c_fmtp = app.add_subcommand("fmtp", "mass transport check for unary formulas");
  c_fmtp->add_option("--structure", a.structure)->required();
  c_fmtp->add_option("--phi", a.formula)->required();
  c_fmtp->add_option("--psi", a.formula2)->required();
  c_fmtp->add_option("--a", a.a)->required();
  c_fmtp->add_option("--b", a.b)->required();

  auto* c_smtp = app.add_subcommand("smtp", "mass transport check for vertex sets");
  c_smtp->add_option("--structure", a.structure)->required();
  c_smtp->add_option("--x", a.xs)->required();
  c_smtp->add_option("--y", a.ys)->required();
  c_smtp->add_option("--a", a.a)->required();
  c_smtp->add_option("--b", a.b)->required();

  auto* c_skeleton = app.add_subcommand("skeleton", "recursive root peeling of a tree");
  c_skeleton->add_option("--structure", a.structure)->required();
  c_skeleton->add_option("--eps", a.eps)->required();
  c_skeleton->add_option("--max-depth", a.max_depth);

  auto* c_gen = app.add_subcommand("gen", "generate a structure family member");
  c_gen->add_option("--family", a.family)->required();
  c_gen->add_option("--params", a.params, "family parameters, in order")->delimiter(',');
  c_gen->add_option("--n", a.params, "alias for a single parameter");
  auto* seed_opt = c_gen->add_option("--seed", a.seed);
  c_gen->add_option("--out", a.out_path);

  auto* c_converge = app.add_subcommand("converge", "pairings along a family grid");
  c_converge->add_option("--family", a.family)->required();
  c_converge->add_option("--params", a.params, "extra parameters after n")->delimiter(',');
  c_converge->add_option("--grid", a.grid, "LO,HI,STEP")->required();
  c_converge->add_option("--formula", a.catalog)->required();
  c_converge->add_option("--radius", a.radii);
  c_converge->add_option("--window", a.window);
  auto* seed_opt2 = c_converge->add_option("--seed", a.seed);

  for (auto* cmd : {c_eval, c_pairing, c_dist, c_break, c_split, c_residual, c_profile, c_interp,
                    c_rewrite, c_fmtp, c_smtp, c_skeleton, c_gen, c_converge})
    add_common(cmd, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }
  a.have_seed = seed_opt->count() > 0 || seed_opt2->count() > 0;

  try {
    return dispatch(app, a, common, out);
  } catch (const WorkLimitError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fostat::cli
