#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "ncx/construct.hpp"
#include "ncx/factorize.hpp"
#include "ncx/harness.hpp"
#include "ncx/matrix.hpp"
#include "ncx/opfunc.hpp"
#include "ncx/seqnorm.hpp"

namespace py = pybind11;
using namespace ncx;

PYBIND11_MODULE(_ncx, m) {
  m.doc() = "Splitting-norm verification for Khintchine and Paley inequalities";

  // Translators run newest-first, so the base error is registered first.
  py::register_exception<error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<domain_error>(m, "DomainError", PyExc_ValueError);
  static py::exception<hypothesis_error> hyp_exc(m, "HypothesisError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const hypothesis_error& e) {
      const py::tuple args = py::make_tuple(e.what(), e.indices);
      PyErr_SetObject(hyp_exc.ptr(), args.ptr());
    }
  });

  py::enum_<ProductMode>(m, "ProductMode")
      .value("adjoint_left", ProductMode::adjoint_left)
      .value("plain", ProductMode::plain);

  py::class_<DyadicFn>(m, "DyadicFn")
      .def(py::init<int, int>(), py::arg("dim"), py::arg("resolution"))
      .def(py::init<int, int, std::vector<MatrixC>>(), py::arg("dim"), py::arg("resolution"),
           py::arg("values"))
      .def_readonly("dim", &DyadicFn::dim)
      .def_readonly("resolution", &DyadicFn::resolution)
      .def_readwrite("values", &DyadicFn::values)
      .def("cells", &DyadicFn::cells);

  py::class_<TrigFn>(m, "TrigFn")
      .def(py::init<int, int, long>(), py::arg("dim"), py::arg("gridsize"),
           py::arg("spectrum_bound"))
      .def(py::init<int, int, long, std::vector<MatrixC>>(), py::arg("dim"), py::arg("gridsize"),
           py::arg("spectrum_bound"), py::arg("values"))
      .def_readonly("dim", &TrigFn::dim)
      .def_readonly("gridsize", &TrigFn::gridsize)
      .def_readonly("spectrum_bound", &TrigFn::spectrum_bound)
      .def_readwrite("values", &TrigFn::values)
      .def("cells", &TrigFn::cells);

  py::class_<LacunarySet>(m, "LacunarySet")
      .def(py::init([](std::vector<long> elements) { return LacunarySet{std::move(elements)}; }),
           py::arg("elements"))
      .def_readonly("elements", &LacunarySet::elements)
      .def("validate", &LacunarySet::validate)
      .def("max_element", &LacunarySet::max_element);

  py::class_<OpSequence>(m, "OpSequence")
      .def(py::init<int, std::vector<MatrixC>>(), py::arg("dim"), py::arg("items"))
      .def_readonly("dim", &OpSequence::dim)
      .def_readonly("items", &OpSequence::items)
      .def("size", &OpSequence::size);

  py::class_<SplitCertificate>(m, "SplitCertificate")
      .def_readonly("value", &SplitCertificate::value)
      .def_readonly("a", &SplitCertificate::a)
      .def_readonly("b", &SplitCertificate::b)
      .def_readonly("dual_lower", &SplitCertificate::dual_lower)
      .def_readonly("iterations", &SplitCertificate::iterations)
      .def_readonly("converged", &SplitCertificate::converged);

  py::class_<SplitDiagnostics>(m, "SplitDiagnostics")
      .def_readonly("column_norm_a", &SplitDiagnostics::column_norm_a)
      .def_readonly("row_norm_b", &SplitDiagnostics::row_norm_b)
      .def_readonly("g_increment_energies", &SplitDiagnostics::g_increment_energies)
      .def_readonly("reconstruction_residual", &SplitDiagnostics::reconstruction_residual)
      .def_readonly("g_norm", &SplitDiagnostics::g_norm)
      .def_readonly("h_norm", &SplitDiagnostics::h_norm)
      .def_readonly("l1_norm", &SplitDiagnostics::l1_norm)
      .def_readonly("value", &SplitDiagnostics::value)
      .def_readonly("b_cascade_pointwise", &SplitDiagnostics::b_cascade_pointwise)
      .def_readonly("b_cascade_mid", &SplitDiagnostics::b_cascade_mid)
      .def_readonly("b_cascade_outer", &SplitDiagnostics::b_cascade_outer);

  py::class_<Splitting>(m, "Splitting")
      .def_readonly("a", &Splitting::a)
      .def_readonly("b", &Splitting::b)
      .def_readonly("target", &Splitting::target)
      .def_readonly("diagnostics", &Splitting::diagnostics);

  py::class_<ModuleSpan>(m, "ModuleSpan")
      .def("rank", &ModuleSpan::rank)
      .def("raw_mode", &ModuleSpan::raw_mode)
      .def("dim", &ModuleSpan::dim)
      .def("cells", &ModuleSpan::cells)
      .def("generators", &ModuleSpan::generators);

  m.def("schatten_norm", &schatten_norm, py::arg("a"), py::arg("p"));
  m.def("sqrt_psd", &sqrt_psd, py::arg("a"));
  m.def("factor_unit_ball", &factor_unit_ball, py::arg("a"));
  m.def("hoelder_gap", &hoelder_gap, py::arg("a"), py::arg("b"), py::arg("p"), py::arg("q"));

  m.def("max_alias_free", &max_alias_free, py::arg("gridsize"));
  m.def("grid_point", &grid_point, py::arg("gridsize"), py::arg("m"));
  m.def("rademacher_value", &rademacher_value, py::arg("j"), py::arg("cell"),
        py::arg("resolution"));
  m.def("walsh_value", &walsh_value, py::arg("n"), py::arg("cell"), py::arg("resolution"));
  m.def("walsh_index_product", &walsh_index_product, py::arg("n"), py::arg("m"));
  m.def("walsh_coeff", &walsh_coeff, py::arg("f"), py::arg("n"));
  m.def("fourier_coeff", &fourier_coeff, py::arg("f"), py::arg("n"));
  m.def("l1_s1_norm", py::overload_cast<const DyadicFn&>(&l1_s1_norm), py::arg("f"));
  m.def("l1_s1_norm", py::overload_cast<const TrigFn&>(&l1_s1_norm), py::arg("f"));
  m.def("l2_s2_inner", py::overload_cast<const DyadicFn&, const DyadicFn&>(&l2_s2_inner),
        py::arg("u"), py::arg("v"));
  m.def("l2_s2_inner", py::overload_cast<const TrigFn&, const TrigFn&>(&l2_s2_inner),
        py::arg("u"), py::arg("v"));
  m.def("partial_inner", py::overload_cast<const DyadicFn&, const DyadicFn&>(&partial_inner),
        py::arg("u"), py::arg("v"));
  m.def("partial_inner", py::overload_cast<const TrigFn&, const TrigFn&>(&partial_inner),
        py::arg("u"), py::arg("v"));
  m.def("modulate", py::overload_cast<const DyadicFn&, long>(&modulate), py::arg("f"),
        py::arg("walsh_index"));
  m.def("modulate", py::overload_cast<const TrigFn&, long>(&modulate), py::arg("f"),
        py::arg("frequency"));
  m.def("pointwise_product",
        py::overload_cast<const DyadicFn&, const DyadicFn&, ProductMode>(&pointwise_product),
        py::arg("u"), py::arg("v"), py::arg("mode") = ProductMode::adjoint_left);
  m.def("pointwise_product",
        py::overload_cast<const TrigFn&, const TrigFn&, ProductMode>(&pointwise_product),
        py::arg("u"), py::arg("v"), py::arg("mode") = ProductMode::adjoint_left);
  m.def("spectrum_violations", &spectrum_violations, py::arg("f"));

  m.def("generic_factor",
        [](const DyadicFn& f) {
          FactorPair<DyadicFn> p = generic_factor(f);
          return py::make_tuple(std::move(p.g), std::move(p.h));
        },
        py::arg("f"));
  m.def("generic_factor",
        [](const TrigFn& f) {
          FactorPair<TrigFn> p = generic_factor(f);
          return py::make_tuple(std::move(p.g), std::move(p.h));
        },
        py::arg("f"));

  m.def("column_norm", &column_norm, py::arg("c"));
  m.def("row_norm", &row_norm, py::arg("c"));
  m.def("splitting_value", &splitting_value, py::arg("a"), py::arg("b"));
  m.def("scalar_oracle", &scalar_oracle, py::arg("c"));
  m.def("dual_lower_bound", &dual_lower_bound, py::arg("c"), py::arg("x"));
  m.def(
      "triple_norm_solve",
      [](const OpSequence& c, double tolerance, int max_iter, unsigned long seed,
         const std::optional<OpSequence>& warm_start) {
        SolveOptions opts;
        opts.tolerance = tolerance;
        opts.max_iter = max_iter;
        opts.seed = seed;
        return triple_norm_solve(c, opts, warm_start);
      },
      py::arg("c"), py::arg("tolerance") = 1e-2, py::arg("max_iter") = 360, py::arg("seed") = 0,
      py::arg("warm_start") = std::nullopt);

  m.def("build_module_span",
        py::overload_cast<const DyadicFn&, const std::vector<long>&>(&build_module_span),
        py::arg("h"), py::arg("chars"));
  m.def("build_module_span",
        py::overload_cast<const TrigFn&, const std::vector<long>&>(&build_module_span),
        py::arg("h"), py::arg("chars"));
  m.def("project", py::overload_cast<const ModuleSpan&, const DyadicFn&>(&project),
        py::arg("span"), py::arg("v"));
  m.def("project", py::overload_cast<const ModuleSpan&, const TrigFn&>(&project), py::arg("span"),
        py::arg("v"));
  m.def("partial_adjointness_gap",
        py::overload_cast<const ModuleSpan&, const DyadicFn&, const DyadicFn&>(
            &partial_adjointness_gap),
        py::arg("span"), py::arg("f"), py::arg("g"));
  m.def("partial_adjointness_gap",
        py::overload_cast<const ModuleSpan&, const TrigFn&, const TrigFn&>(
            &partial_adjointness_gap),
        py::arg("span"), py::arg("f"), py::arg("g"));

  m.def("khintchine_split", &khintchine_split, py::arg("f"), py::arg("j_count"));
  m.def("paley_case1_split", &paley_case1_split, py::arg("f"), py::arg("kset"),
        py::arg("tail_depth"));
  m.def("paley_case2_split", &paley_case2_split, py::arg("f"), py::arg("kset"));
  m.def("default_tail_depth", &default_tail_depth, py::arg("f"), py::arg("kset"));
  m.def("virtual_next", &virtual_next, py::arg("kset"));
  m.def("max_gap", &max_gap, py::arg("kset"));

  m.def("gen_lacunary", &gen_lacunary, py::arg("seed"), py::arg("j_max"), py::arg("k0") = 1);
}
