#pragma once

// Boundary-fitted tensor grid over the neck.
//
// Reference coordinates (q, s) in [0,1]^2 map to physical (r, z) by
//   r(q) = R (e^{a q} - 1)/(e^a - 1)        (graded; a = 0 means uniform)
//   z(r, s) = (1 - s) B(r) + s T(r),        B = -eps/2 + h2, T = eps/2 + h1
// so s = 0 and s = 1 land exactly on the two curved surfaces.  The grading
// parameter a is the smallest value giving a first radial cell no wider than
// sqrt(eps)/8 (the neck length scale); cell-to-cell growth e^{a/Nr} then
// stays below 1.1 for the admissible sizes.  Refinement studies may pin a
// from their coarsest level so that successive grids are self-similar.

#include <vector>

#include "neck/geometry.hpp"

namespace neck {

struct Grid {
    NeckGeometry geom;
    int Nr = 0;  // radial cells (nodes are 0..Nr)
    int Ns = 0;  // transverse cells (nodes are 0..Ns)
    double map_a = 0.0;
    double first_cell = 0.0;
    double growth_ratio = 1.0;
    std::vector<double> q_nodes;
    std::vector<double> s_nodes;
    std::vector<double> r_nodes;

    double z(int i, int j) const;           // z(r_i, s_j)
    double z_of(double r, double s) const;  // mapping at arbitrary (r, s)

    double r_of_q(double q) const;
    double dr_dq(double q) const;
    double d2r_dq2(double q) const;
    double q_of_r(double r) const;  // analytic inverse of the radial map
};

// Builds the graded grid.  Preconditions: Nr, Ns >= 4, Nr <= 1024, Ns <= 128;
// throws std::invalid_argument on violations or when the geometry fails
// validate().  pinned_a < 0 means "choose the grading automatically";
// pinned_a >= 0 reuses a previously computed grading parameter (the
// first-cell bound is still enforced).
Grid build_grid(const NeckGeometry& geom, int Nr, int Ns, double pinned_a = -1.0);

}  // namespace neck
