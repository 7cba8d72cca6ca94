#pragma once

// Single-mode reduction of the n-dimensional Laplace problem in the neck.
//
// Writing the field as v(r, z) times one spherical-harmonic mode of index k,
// the interior equation becomes
//   L v := v_rr + (n-2)/r v_r - k(k+n-3)/r^2 v + v_zz = f
// with insulating conormal conditions v_z - h'(r) v_r = 0 on both curved
// surfaces, Dirichlet data at r = R, and at the axis either v = 0 (k >= 1)
// or an even-symmetry closure (k = 0).  The discretization is a 9-point
// second-order stencil in the mapped (q, s) rectangle; the solve is a direct
// sparse LU with row equilibration.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "neck/grid.hpp"

namespace neck {

using ScalarFn1 = std::function<double(double)>;
using ScalarFn2 = std::function<double(double, double)>;

struct ReducedProblem {
    int n = 3;
    int k = 1;
    NeckGeometry geom;
    ScalarFn1 outer_data;    // g(z) at r = R; null means 0
    ScalarFn2 source;        // f(r, z); null means 0
    // Inhomogeneous conormal data v_z - h'(r) v_r = g_N(r) on the two
    // surfaces; null means 0 (the physical insulating condition).  Nonzero
    // only for manufactured-solution tests.
    ScalarFn1 neumann_top;
    ScalarFn1 neumann_bot;

    void validate() const;  // n >= 3, k >= 0
};

struct SparseSystem {
    // Row-compressed storage in row order, duplicate entries merged,
    // columns ascending within each row.
    std::vector<int> row_ptr;
    std::vector<int> col_idx;
    std::vector<double> values;
    std::vector<double> rhs;
    int rows = 0;

    // Index map (i, j) <-> unknown.
    int Ns = 0;
    int unknown(int i, int j) const { return i * (Ns + 1) + j; }
    std::pair<int, int> node(int u) const { return {u / (Ns + 1), u % (Ns + 1)}; }

    double row_sum(int row) const;
};

struct Field {
    std::vector<double> v;  // nodal values, row-major (i * (Ns+1) + j)
    int Nr = 0;
    int Ns = 0;
    double residual = 0.0;  // achieved relative residual
    bool solved = false;

    double at(int i, int j) const { return v[i * (Ns + 1) + j]; }
    double& at(int i, int j) { return v[i * (Ns + 1) + j]; }
};

struct GradientField {
    std::vector<double> G;   // sqrt(vr^2 + vz^2 + k(k+n-3) v^2/r^2)
    std::vector<double> vr;  // dv/dr at fixed z
    std::vector<double> vz;  // dv/dz
    int Nr = 0;
    int Ns = 0;

    double at(int i, int j) const { return G[i * (Ns + 1) + j]; }
};

// Thrown when the direct solve fails to meet the residual tolerance; carries
// the residual that was achieved.
struct SolveError : std::runtime_error {
    double achieved = 0.0;
    explicit SolveError(const std::string& what, double res)
        : std::runtime_error(what), achieved(res) {}
};

SparseSystem assemble(const ReducedProblem& prob, const Grid& grid);

// Direct sparse LU with row equilibration.  Relative residual is
// ||A v - b|| / ||b|| (absolute when b = 0); throws SolveError if it exceeds
// tol.  Deterministic for fixed inputs.
Field solve(const SparseSystem& sys, double tol = 1e-10);

// Chain-rule nodal derivatives (second-order central, one-sided at edges)
// and the mode gradient magnitude.  At the axis the angular term uses the
// limit v/r -> v_r(0, z) for k >= 1 and vanishes for k = 0.
GradientField gradient_surrogate(const Field& field, const ReducedProblem& prob,
                                 const Grid& grid);

// assemble + solve convenience.
Field solve_problem(const ReducedProblem& prob, const Grid& grid,
                    double tol = 1e-10);

}  // namespace neck
