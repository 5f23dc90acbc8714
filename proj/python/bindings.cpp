#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fostat/cli.hpp"
#include "fostat/core.hpp"
#include "fostat/eval.hpp"
#include "fostat/forest.hpp"
#include "fostat/formula.hpp"
#include "fostat/gen.hpp"
#include "fostat/interp.hpp"
#include "fostat/sequence.hpp"

namespace py = pybind11;
using namespace fostat;

namespace {

py::object fraction(const Integer& num, const Integer& den) {
  py::object Fraction = py::module_::import("fractions").attr("Fraction");
  py::object big = py::module_::import("builtins").attr("int");
  return Fraction(big(num.str()), big(den.str()));
}

py::object fraction(const Rational& q) { return fraction(numerator(q), denominator(q)); }

Structure structure_from_json(const std::string& text) {
  std::istringstream in(text);
  return load_structure(in, "<python>");
}

std::string structure_to_json(const Structure& s) {
  std::ostringstream out;
  save_structure(s, out);
  return out.str();
}

BasicScheme scheme_from_json(const std::string& text) {
  std::istringstream in(text);
  return load_scheme(in, "<python>");
}

EvalOptions options(int threads, long long max_work) {
  EvalOptions opts;
  opts.threads = threads;
  if (max_work > 0) opts.work_limit = Integer(max_work);
  if (max_work < 0) opts.override_work_limit = true;
  return opts;
}

py::dict transport_dict(const TransportReport& rep) {
  py::dict d;
  d["premise_out"] = rep.premise_out;
  d["premise_in"] = rep.premise_in;
  d["conclusion"] = rep.conclusion;
  d["vacuous"] = rep.vacuous;
  d["edges"] = py::module_::import("builtins").attr("int")(rep.edges.str());
  d["lhs"] = fraction(rep.lhs);
  d["rhs"] = fraction(rep.rhs);
  return d;
}

// Formula is a shared_ptr-to-const alias, which pybind11 cannot hold
// directly, so expose a small value wrapper instead
struct PyFormula {
  Formula f;
};

py::dict skeleton_dict(const SkeletonNode& node) {
  py::dict d;
  d["principal"] = node.principal_vertex;
  d["mass"] = fraction(node.mass);
  py::list residual_sizes;
  for (const auto& comp : node.residual_components) residual_sizes.append(comp.size());
  d["residual_sizes"] = residual_sizes;
  py::list children;
  for (const auto& child : node.children) children.append(skeleton_dict(child));
  d["children"] = children;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fostat, m) {
  m.doc() = "exact first-order statistics over finite relational structures";

  py::register_exception<DomainError>(m, "DomainError");

  py::class_<Structure>(m, "Structure")
      .def_static("from_json", &structure_from_json, py::arg("text"))
      .def("to_json", &structure_to_json)
      .def("__len__", &Structure::size)
      .def("__eq__", [](const Structure& a, const Structure& b) { return a == b; })
      .def("relation_names", [](const Structure& s) {
        std::vector<std::string> names;
        for (const auto& rel : s.signature().relations) names.push_back(rel.name);
        return names;
      });

  py::class_<PyFormula>(m, "Formula")
      .def("__str__", [](const PyFormula& w) { return print_formula(w.f); })
      .def("free_vars", [](const PyFormula& w) { return free_vars(w.f); })
      .def("qrank", [](const PyFormula& w) { return qrank(w.f); });

  py::class_<BasicScheme>(m, "Scheme")
      .def_static("from_json", &scheme_from_json, py::arg("text"))
      .def_static("y_to_f", [] { return y_to_f_scheme(); })
      .def_static("f_to_y", [] { return f_to_y_scheme(); });

  m.def(
      "parse_formula",
      [](const std::string& text, const Structure* s) {
        return PyFormula{parse_formula(text, s ? &s->signature() : nullptr)};
      },
      py::arg("text"), py::arg("structure") = nullptr);

  m.def(
      "satisfies",
      [](const Structure& s, const PyFormula& f, const std::map<int, int>& a, int threads,
         long long max_work) { return satisfies(s, f.f, Assignment(a.begin(), a.end()),
                                                options(threads, max_work)); },
      py::arg("structure"), py::arg("formula"), py::arg("assignment"), py::arg("threads") = 1,
      py::arg("max_work") = 0);

  m.def(
      "solution_count",
      [](const Structure& s, const PyFormula& f, int threads, long long max_work) {
        return py::module_::import("builtins").attr("int")(
            solution_count(s, f.f, options(threads, max_work)).str());
      },
      py::arg("structure"), py::arg("formula"), py::arg("threads") = 1, py::arg("max_work") = 0);

  m.def(
      "stone_pairing",
      [](const Structure& s, const PyFormula& f, int threads, long long max_work) {
        Pairing p = stone_pairing(s, f.f, options(threads, max_work));
        return fraction(p.count, p.denominator);
      },
      py::arg("structure"), py::arg("formula"), py::arg("threads") = 1, py::arg("max_work") = 0);

  m.def(
      "residual_index",
      [](const Structure& s, int r) { return fraction(residual_index(s, r)); },
      py::arg("structure"), py::arg("r"));

  m.def(
      "dispersion_profile",
      [](const Structure& s, int root, int d_max) {
        py::list out;
        for (const auto& v : dispersion_profile(s, root, d_max)) out.append(fraction(v));
        return out;
      },
      py::arg("structure"), py::arg("root"), py::arg("d_max"));

  m.def(
      "break_cover",
      [](const Structure& s, long long eps_num, long long eps_den, int r) {
        BreakResult res = break_cover(s, Rational(eps_num, eps_den), r);
        py::dict d;
        d["centers"] = res.centers;
        d["cover"] = res.cover;
        d["ok"] = res.check(s);
        return d;
      },
      py::arg("structure"), py::arg("eps_num"), py::arg("eps_den"), py::arg("r"));

  m.def(
      "pseudo_distance",
      [](const Structure& a, const Structure& b, int n_max, int budget) {
        return fraction(pseudo_distance(a, b, n_max, budget));
      },
      py::arg("a"), py::arg("b"), py::arg("n_max") = 3, py::arg("budget") = 64);

  m.def("apply_scheme",
        [](const BasicScheme& sc, const Structure& s) { return apply_scheme(sc, s); });
  m.def("rewrite_formula", [](const BasicScheme& sc, const PyFormula& f) {
    return PyFormula{rewrite_formula(sc, f.f)};
  });
  m.def("y_to_f", [](const Structure& s) { return y_to_f(s); });
  m.def("f_to_y", [](const Structure& s) { return f_to_y(s); });

  m.def(
      "check_fmtp",
      [](const Structure& s, const PyFormula& phi, const PyFormula& psi, long long a,
         long long b) { return transport_dict(check_fmtp(s, phi.f, psi.f, a, b)); },
      py::arg("structure"), py::arg("phi"), py::arg("psi"), py::arg("a"), py::arg("b"));

  m.def(
      "check_smtp",
      [](const Structure& s, const std::vector<int>& X, const std::vector<int>& Y, long long a,
         long long b) { return transport_dict(check_smtp(s, X, Y, a, b)); },
      py::arg("structure"), py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"));

  m.def("orient_from_roots", &orient_from_roots, py::arg("structure"));
  m.def(
      "validate_rooted_forest",
      [](const Structure& s) {
        auto diag = validate_rooted_forest(s);
        return py::make_tuple(diag.valid, diag.problems);
      },
      py::arg("structure"));

  m.def(
      "skeleton_decompose",
      [](const Structure& t, long long eps_num, long long eps_den, int max_depth) {
        return skeleton_dict(skeleton_decompose(t, Rational(eps_num, eps_den), max_depth));
      },
      py::arg("tree"), py::arg("eps_num"), py::arg("eps_den"), py::arg("max_depth") = 3);

  m.def(
      "generate",
      [](const std::string& family, const std::vector<long long>& params,
         std::optional<std::uint64_t> seed) {
        FamilySpec spec{family, params, seed};
        return generate(spec);
      },
      py::arg("family"), py::arg("params"), py::arg("seed") = std::nullopt);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = fostat::cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
