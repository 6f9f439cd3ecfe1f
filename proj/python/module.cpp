#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlv/io.hpp"
#include "qlv/problems.hpp"
#include "qlv/synth.hpp"

namespace py = pybind11;
using namespace qlv;

namespace {

OracleFamily make_family(std::vector<std::string> labels,
                         std::vector<Index> block_dims,
                         std::map<std::string, std::vector<Matrix>> operators,
                         std::string const &kind)
{
    return OracleFamily(std::move(labels), std::move(block_dims),
                        std::move(operators), oracle_kind_from_string(kind));
}

py::dict report_dict(ConversionReport const &rep)
{
    py::dict out;
    out["errors"] = rep.errors;
    out["pass"] = rep.pass;
    out["max_error"] = rep.max_error;
    return out;
}

} // namespace

PYBIND11_MODULE(_qlv, m)
{
    m.doc() = "Las Vegas query complexity toolkit";

    py::register_exception<Error>(m, "Error");

    py::class_<OracleFamily>(m, "OracleFamily")
        .def(py::init(&make_family), py::arg("labels"), py::arg("block_dims"),
             py::arg("operators"), py::arg("kind") = "unitary")
        .def_property_readonly("labels", &OracleFamily::labels)
        .def_property_readonly("block_dims", &OracleFamily::block_dims)
        .def_property_readonly("kind",
                               [](OracleFamily const &f) {
                                   return to_string(f.kind());
                               })
        .def_property_readonly("m_dim", &OracleFamily::m_dim)
        .def("blocks", &OracleFamily::blocks)
        .def("full_operator", &OracleFamily::full_operator)
        .def("adjoint_family", &OracleFamily::adjoint_family);

    py::class_<StateConversionProblem>(m, "StateConversionProblem")
        .def(py::init<OracleFamily, Index, std::vector<Vector>,
                      std::vector<Vector>>(),
             py::arg("oracles"), py::arg("k_dim"), py::arg("xi"),
             py::arg("tau"))
        .def_readonly("oracles", &StateConversionProblem::oracles)
        .def_readonly("k_dim", &StateConversionProblem::k_dim)
        .def_readonly("xi", &StateConversionProblem::xi)
        .def_readonly("tau", &StateConversionProblem::tau)
        .def("to_json",
             [](StateConversionProblem const &p) {
                 return problem_json(p).dump();
             })
        .def_static("from_json", [](std::string const &s) {
            return problem_from_json(Json::parse(s));
        });

    py::class_<BlockVector>(m, "BlockVector")
        .def_readonly("blocks", &BlockVector::blocks)
        .def_property_readonly("w_dim", &BlockVector::w_dim)
        .def("flatten", &BlockVector::flatten)
        .def("dnorm_sq", [](BlockVector const &v) { return dnorm_sq(v); });

    py::class_<FeasibleSolution>(m, "FeasibleSolution")
        .def_readonly("w_dim", &FeasibleSolution::w_dim)
        .def_readonly("vectors", &FeasibleSolution::vectors)
        .def("to_json",
             [](FeasibleSolution const &sol,
                std::vector<std::string> const &labels) {
                 return solution_json(sol, labels).dump();
             })
        .def_static("from_json",
                    [](std::string const &s,
                       std::vector<std::string> const &labels) {
                        return solution_from_json(Json::parse(s), labels);
                    });

    py::class_<ComplexityProfile>(m, "ComplexityProfile")
        .def_readonly("values", &ComplexityProfile::values)
        .def("total", &ComplexityProfile::total)
        .def("max_total", &ComplexityProfile::max_total);

    py::class_<QueryAlgorithm>(m, "QueryAlgorithm")
        .def_readonly("h_dim", &QueryAlgorithm::h_dim)
        .def_property_readonly("T", &QueryAlgorithm::T)
        .def("to_json",
             [](QueryAlgorithm const &algo, bool dense) {
                 return algorithm_json(algo, dense).dump();
             },
             py::arg("dense") = false)
        .def_static("from_json", [](std::string const &s) {
            return algorithm_from_json(Json::parse(s));
        });

    // simulation
    m.def("apply", &apply, py::arg("algo"), py::arg("oracles"),
          py::arg("label"));
    m.def("run", &run, py::arg("algo"), py::arg("oracles"), py::arg("label"),
          py::arg("xi"));
    m.def("las_vegas", &las_vegas);
    m.def("las_vegas_profile", &las_vegas_profile);
    m.def(
        "check_state_conversion",
        [](QueryAlgorithm const &algo, StateConversionProblem const &p,
           double tol) {
            return report_dict(check_state_conversion(algo, p, tol));
        },
        py::arg("algo"), py::arg("problem"), py::arg("tol") = 1e-9);

    // adversary
    m.def("residual", &residual);
    m.def("objective_profile", &objective_profile);
    m.def("extract", &extract, py::arg("algo"), py::arg("problem"),
          py::arg("tol") = Tol::unitary);
    m.def(
        "dual_bound",
        [](Matrix const &gamma, StateConversionProblem const &p) {
            auto b = dual_bound(DualCertificate(gamma), p);
            py::dict out;
            out["lam_E"] = b.lam_E;
            out["lam_delta"] = b.lam_delta;
            out["bound_singleoracle"] = b.bound_singleoracle;
            return out;
        },
        py::arg("gamma"), py::arg("problem"));
    m.def("lift_bidirectional", &lift_bidirectional);
    m.def("consistency_check", &consistency_check, py::arg("solution"),
          py::arg("problem"), py::arg("tol") = Tol::class_tol);
    m.def("pareto_project", &pareto_project, py::arg("solution"),
          py::arg("problem"), py::arg("tol") = Tol::unitary);

    // synthesis
    py::class_<ApproxCompilation>(m, "ApproxCompilation")
        .def_readonly("algo", &ApproxCompilation::algo)
        .def_readonly("xi_plus", &ApproxCompilation::xi_plus)
        .def_readonly("tau_plus", &ApproxCompilation::tau_plus);
    py::class_<PlainRun>(m, "PlainRun")
        .def_readonly("algo", &PlainRun::algo)
        .def_readonly("errors", &PlainRun::errors)
        .def_readonly("T", &PlainRun::T);
    m.def("compile_approx", &compile_approx, py::arg("problem"),
          py::arg("solution"), py::arg("T"), py::arg("tol") = Tol::unitary);
    m.def("run_plain", &run_plain, py::arg("problem"), py::arg("solution"),
          py::arg("eps"), py::arg("tol") = Tol::unitary);
    m.def("compile_exact", &compile_exact, py::arg("problem"),
          py::arg("solution"), py::arg("delta"),
          py::arg("tol") = Tol::unitary, py::arg("max_queries") = 50000);

    // worked problems
    py::class_<TwoLabelInstance>(m, "TwoLabelInstance")
        .def_readonly("problem", &TwoLabelInstance::problem)
        .def_readonly("bound", &TwoLabelInstance::bound)
        .def("boundary_solution", &TwoLabelInstance::boundary_solution,
             py::arg("w0"));
    m.def("two_label", &two_label, py::arg("a"), py::arg("b"), py::arg("o0"),
          py::arg("o1"));
    m.def("boolean_problem", &boolean_problem, py::arg("n"),
          py::arg("domain"), py::arg("values"));
    m.def("relation_check", &relation_check);
    m.def("spalek_bound", &spalek_bound);
    py::class_<PermInversion>(m, "PermInversion")
        .def_readonly("n", &PermInversion::n)
        .def_readonly("cycles", &PermInversion::cycles)
        .def_readonly("gamma", &PermInversion::gamma)
        .def_readonly("deltas", &PermInversion::deltas)
        .def_readonly("delta_prime", &PermInversion::delta_prime)
        .def_readonly("delta_dblprime", &PermInversion::delta_dblprime)
        .def_readonly("e_exact", &PermInversion::e_exact)
        .def_property_readonly("report", [](PermInversion const &inv) {
            py::dict out;
            out["lam_gamma"] = inv.report.lam_gamma;
            out["lam_minus_gamma"] = inv.report.lam_minus_gamma;
            out["norm_prime"] = inv.report.norm_prime;
            out["lam_dblprime"] = inv.report.lam_dblprime;
            out["lam_delta"] = inv.report.lam_delta;
            out["spalek"] = inv.report.spalek;
            out["lam_exact"] = inv.report.lam_exact;
            out["ratio"] = inv.report.ratio;
            return out;
        });
    m.def("perm_inversion", &perm_inversion, py::arg("n"));
}
