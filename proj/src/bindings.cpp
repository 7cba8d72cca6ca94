// Python surface for the library: closed-form exponents, the certificate
// evaluators, the mode solver, and the sweep/fit machinery.  Containers
// cross the boundary as plain lists and tuples; heavier orchestration
// stays in the CLI.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "neck/certificate.hpp"
#include "neck/experiments.hpp"
#include "neck/geometry.hpp"
#include "neck/grid.hpp"
#include "neck/solver.hpp"

namespace py = pybind11;
using namespace neck;

namespace {

py::dict solve_field(const NeckGeometry& geom, int n, int k, int Nr, int Ns,
                     double outer_value) {
    ReducedProblem prob;
    prob.n = n;
    prob.k = k;
    prob.geom = geom;
    prob.outer_data = [outer_value](double) { return outer_value; };

    const Grid grid = build_grid(geom, Nr, Ns);
    const Field field = solve(assemble(prob, grid));
    const GradientField grad = gradient_surrogate(field, prob, grid);

    std::vector<std::vector<double>> z(grid.Nr + 1), v(grid.Nr + 1),
        G(grid.Nr + 1);
    for (int i = 0; i <= grid.Nr; ++i) {
        z[i].resize(grid.Ns + 1);
        v[i].resize(grid.Ns + 1);
        G[i].resize(grid.Ns + 1);
        for (int j = 0; j <= grid.Ns; ++j) {
            z[i][j] = grid.z(i, j);
            v[i][j] = field.at(i, j);
            G[i][j] = grad.at(i, j);
        }
    }

    py::dict out;
    out["r"] = grid.r_nodes;
    out["z"] = z;
    out["v"] = v;
    out["G"] = G;
    out["residual"] = field.residual;
    out["map_a"] = grid.map_a;
    return out;
}

}  // namespace

PYBIND11_MODULE(pynecklab, m) {
    m.doc() = "Thin-neck Laplace laboratory: closed-form gradient exponents, "
              "certificate evaluators, and the mode-reduced solver";

    m.def("gamma_star", &gamma_star, py::arg("n"));
    m.def("blow_up_exponent", &blow_up_exponent, py::arg("n"));
    m.def("rho", &rho, py::arg("n"), py::arg("gamma"));

    py::class_<NeckGeometry>(m, "NeckGeometry")
        .def(py::init<>())
        .def_readwrite("eps", &NeckGeometry::eps)
        .def_readwrite("lambda1", &NeckGeometry::lambda1)
        .def_readwrite("lambda2", &NeckGeometry::lambda2)
        .def_readwrite("c3_top", &NeckGeometry::c3_top)
        .def_readwrite("c3_bot", &NeckGeometry::c3_bot)
        .def_readwrite("R", &NeckGeometry::R)
        .def("validate", &NeckGeometry::validate)
        .def("pure_paraboloid", &NeckGeometry::pure_paraboloid)
        .def("top_z", &NeckGeometry::top_z, py::arg("r"))
        .def("bot_z", &NeckGeometry::bot_z, py::arg("r"))
        .def("gap", &NeckGeometry::gap, py::arg("r"));

    py::class_<AuxParams>(m, "AuxParams")
        .def(py::init<>())
        .def_static("defaults", &AuxParams::defaults, py::arg("n"))
        .def_readwrite("n", &AuxParams::n)
        .def_readwrite("gamma", &AuxParams::gamma)
        .def_readwrite("A", &AuxParams::A)
        .def_readwrite("b", &AuxParams::b)
        .def_readwrite("delta", &AuxParams::delta)
        .def_readwrite("eps", &AuxParams::eps)
        .def_readwrite("eta", &AuxParams::eta)
        .def_readwrite("xi0", &AuxParams::xi0)
        .def("validate", &AuxParams::validate);

    m.def("aux_F", &aux_F, py::arg("params"), py::arg("r"), py::arg("z"));
    m.def("boundary_expr", &boundary_expr, py::arg("params"), py::arg("r"));
    m.def("M_value", &M_value, py::arg("n"), py::arg("gamma"), py::arg("phi"),
          py::arg("eta"));
    m.def("hessian_coeff", &hessian_coeff, py::arg("params"), py::arg("r"),
          py::arg("z"));
    m.def("phi_crit", &phi_crit, py::arg("n"), py::arg("gamma"), py::arg("eta"),
          py::arg("lo") = 1e-4, py::arg("hi") = 0.9, py::arg("tol") = 1e-6);

    m.def("solve_field", &solve_field, py::arg("geom"), py::arg("n") = 3,
          py::arg("k") = 1, py::arg("Nr") = 192, py::arg("Ns") = 24,
          py::arg("outer_value") = 0.5);

    py::class_<RateFit>(m, "RateFit")
        .def_readonly("samples", &RateFit::samples)
        .def_readonly("slope", &RateFit::slope)
        .def_readonly("intercept", &RateFit::intercept)
        .def_readonly("r_squared", &RateFit::r_squared);

    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("eps", &SweepPoint::eps)
        .def_readonly("max_G", &SweepPoint::max_G)
        .def_readonly("max_r", &SweepPoint::max_r)
        .def_readonly("max_z", &SweepPoint::max_z)
        .def_readonly("residual", &SweepPoint::residual)
        .def_readonly("ok", &SweepPoint::ok)
        .def_readonly("error", &SweepPoint::error);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("points", &SweepResult::points)
        .def_readonly("fit", &SweepResult::fit);

    m.def("fit_exponent", &fit_exponent, py::arg("samples"));
    m.def("run_sweep", &run_sweep, py::arg("geom"), py::arg("n"), py::arg("k"),
          py::arg("eps_list"), py::arg("Nr"), py::arg("Ns"),
          py::arg("outer_value") = 1.0, py::arg("jobs") = 1);
}
