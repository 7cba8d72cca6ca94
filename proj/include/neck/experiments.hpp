#pragma once

// Sweep orchestration and solution-based diagnostics.
//
// run_sweep solves the reduced problem across a list of gap widths eps,
// records max G over the inner half r <= R/2, and fits
// log(max_G) ~ slope * log(eps) + intercept by ordinary least squares.
// For the k = 1 mode with constant outer data the fitted slope approaches
// -(1 - gamma_star(n))/2 as the grid resolves the neck.
//
// check_boundary_identity probes the surface derivative identity
//   dF/dnu (|grad u|^2) = 2 |grad u|^2  on the top surface,
// exact for the pure paraboloid pair (lambda = 1/2, no cubic terms) with
// the unnormalized conormal nu = (-r, 1).  The probe reconstructs
// |grad u|^2 at the angular location where it reduces to the closed form
// k(k+n-3) v^2 / r^2, differences it one-sidedly along nu into the neck,
// and reports the max relative residual over a fixed set of sample radii.
// The residual is pure discretization error, so halving the mesh must
// shrink it at second order (ratio >= 1.8 per level is the pass bar).
//
// check_q_maximum forms Q = F * max(v_r^2 + v_z^2, k(k+n-3) v^2/r^2)
// with the barrier weight F from the certificate module and reports the
// argmax; the weighted quantity must peak in the outer band r >= 0.9 R.
// With the weight forced to 1 (degenerate control) the unweighted gradient
// peaks near the neck waist instead, which the control run asserts.
// Exact ties in Q are broken toward larger F, and a field whose gradient
// is zero to rounding flattens Q to the weight alone, so a constant field
// reports the weight's own argmax (r = R).
//
// check_envelope evaluates C(eps) = max_{r <= R/2} max_z G * (eps + r^2)^{(1-gamma)/2}
// across an eps sweep; a tight estimate keeps max C / min C <= 1.5 at
// gamma = gamma_star(n), while gamma = 0 lets C drift and fails.

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "neck/certificate.hpp"
#include "neck/geometry.hpp"
#include "neck/grid.hpp"
#include "neck/solver.hpp"

namespace neck {

struct RateFit {
    std::vector<std::array<double, 2>> samples;  // (eps, value), eps descending
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::array<int, 2> window{0, 0};  // inclusive index range used by the fit
};

struct DiagnosticResult {
    std::string name;
    bool pass = false;
    double max_residual = 0.0;
    std::array<double, 2> location{0.0, 0.0};  // (r, z) of the governing point
    std::vector<std::pair<std::string, double>> data;  // named scalars, ordered
};

struct SweepPoint {
    double eps = 0.0;
    double max_G = 0.0;
    double max_r = 0.0;
    double max_z = 0.0;
    int Nr = 0;
    int Ns = 0;
    double residual = 0.0;
    bool ok = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepPoint> points;  // one per requested eps, in input order
    RateFit fit;                     // over the points that solved
};

// Least-squares power-law fit through (eps, value) pairs; requires at least
// three positive finite values and throws std::invalid_argument otherwise.
RateFit fit_exponent(const std::vector<std::array<double, 2>>& samples);

// Solves the mode problem for each eps (geometry template with eps swapped
// in, fixed Nr x Ns, outer data the constant outer_value), recording max G
// over r <= R/2.  eps_list must span at least 1.5 decades.  Failed solves
// are flagged on their point and excluded from the fit.  jobs > 1 runs the
// sweep points concurrently; results are keyed by index, so the output is
// identical for any job count.
SweepResult run_sweep(const NeckGeometry& geom_template, int n, int k,
                      const std::vector<double>& eps_list, int Nr, int Ns,
                      double outer_value = 1.0, int jobs = 1);

// Max relative residual of the surface derivative identity for one solved
// field.  Throws std::invalid_argument unless the geometry is the pure
// paraboloid pair.  floor guards the relative error near zeros.
double boundary_identity_residual(const Field& field, const ReducedProblem& prob,
                                  const Grid& grid, double floor = 1e-14);

// Runs the identity probe on a ladder of grids (same geometry, radial map
// pinned from the first level so refinement is nested), reporting per-level
// residuals and successive ratios; pass = every ratio >= 1.8.
DiagnosticResult check_boundary_identity(
    const NeckGeometry& geom, int n, int k,
    const std::vector<std::array<int, 2>>& levels, double outer_value = 1.0);

// Solves the mode problem and locates the argmax of Q = F * angular max of
// the squared gradient.  degenerate = true replaces F by 1 (and skips the
// aux parameter checks), flipping the expected location to the neck waist:
// pass means argmax r >= 0.9 R normally, argmax r <= R/2 for the control.
DiagnosticResult check_q_maximum(const NeckGeometry& geom, const AuxParams& aux,
                                 int k, int Nr, int Ns, double outer_value = 1.0,
                                 bool degenerate = false);

// Envelope constant for one solved field.
double envelope_value(const GradientField& grad, const Grid& grid, double gamma,
                      double eps, double* arg_r = nullptr, double* arg_z = nullptr);

// Sweeps eps, computes C(eps) per point, passes iff max C / min C <= 1.5.
DiagnosticResult check_envelope(const NeckGeometry& geom_template, int n, int k,
                                const std::vector<double>& eps_list, double gamma,
                                int Nr, int Ns, double outer_value = 1.0,
                                int jobs = 1);

}  // namespace neck
