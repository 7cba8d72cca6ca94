#pragma once

// Geometry of the thin neck between two convex rotational bodies.
//
// The two facing surfaces are graphs over the radial coordinate r = |x'|:
//   top:    z =  eps/2 + h1(r),  h1(r) =  lambda1 r^2 + c3_top r^3
//   bottom: z = -eps/2 + h2(r),  h2(r) = -lambda2 r^2 + c3_bot r^3
// The neck is the open region between them for 0 <= r < R.  The conormal
// on the top surface is kept unnormalized, (-h1'(r), 1), because the
// boundary identities evaluated elsewhere are stated for that scaling and
// a Neumann condition is scale-invariant anyway.

#include <array>

namespace neck {

struct NeckGeometry {
    double eps = 1e-3;     // waist gap, > 0
    double lambda1 = 0.5;  // top curvature coefficient
    double lambda2 = 0.5;  // bottom curvature coefficient
    double c3_top = 0.0;   // cubic perturbation of the top profile
    double c3_bot = 0.0;   // cubic perturbation of the bottom profile
    double R = 0.5;        // neck radius, in (0, 1)

    // Throws std::invalid_argument on parameter violations, including a
    // loss of separation (gap <= 0 anywhere on [0, R]).
    void validate() const;

    // True when lambda1 = lambda2 = 1/2 and both cubics vanish, i.e. the
    // surfaces are the exact normalized paraboloids z = +-(eps + r^2)/2.
    bool pure_paraboloid() const;

    double profile_top(double r) const;     // h1(r)
    double profile_bot(double r) const;     // h2(r)
    double profile_top_d1(double r) const;  // h1'(r)
    double profile_bot_d1(double r) const;  // h2'(r)
    double profile_top_d2(double r) const;  // h1''(r)
    double profile_bot_d2(double r) const;  // h2''(r)

    double top_z(double r) const;  //  eps/2 + h1(r)
    double bot_z(double r) const;  // -eps/2 + h2(r)
    double gap(double r) const;    // eps + h1(r) - h2(r)

    // Outward non-unit conormal on the top surface, (radial, axial).
    std::array<double, 2> conormal_top(double r) const;

    // Strict interior test: 0 <= r < R and bot_z(r) < z < top_z(r).
    bool in_neck(double r, double z) const;
};

}  // namespace neck
