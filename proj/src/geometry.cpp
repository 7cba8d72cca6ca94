#include "neck/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace neck {

namespace {

void check_radius(const NeckGeometry& g, double r) {
    if (!(r >= 0.0 && r <= g.R))
        throw std::domain_error("radius " + std::to_string(r) +
                                " outside [0, R] with R = " + std::to_string(g.R));
}

}  // namespace

void NeckGeometry::validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("geometry: eps must be > 0");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("geometry: lambda1 must be > 0");
    if (!(lambda2 > 0.0)) throw std::invalid_argument("geometry: lambda2 must be > 0");
    if (!(R > 0.0 && R < 1.0)) throw std::invalid_argument("geometry: R must lie in (0, 1)");
    // Separation: the gap is a polynomial in r; sample densely enough that a
    // cubic cannot hide a crossing between samples at these magnitudes.
    const int samples = 4096;
    for (int i = 0; i <= samples; ++i) {
        const double r = R * static_cast<double>(i) / samples;
        if (!(gap(r) > 0.0))
            throw std::invalid_argument("geometry: surfaces touch at r = " + std::to_string(r));
    }
}

bool NeckGeometry::pure_paraboloid() const {
    return lambda1 == 0.5 && lambda2 == 0.5 && c3_top == 0.0 && c3_bot == 0.0;
}

double NeckGeometry::profile_top(double r) const {
    check_radius(*this, r);
    return lambda1 * r * r + c3_top * r * r * r;
}

double NeckGeometry::profile_bot(double r) const {
    check_radius(*this, r);
    return -lambda2 * r * r + c3_bot * r * r * r;
}

double NeckGeometry::profile_top_d1(double r) const {
    check_radius(*this, r);
    return 2.0 * lambda1 * r + 3.0 * c3_top * r * r;
}

double NeckGeometry::profile_bot_d1(double r) const {
    check_radius(*this, r);
    return -2.0 * lambda2 * r + 3.0 * c3_bot * r * r;
}

double NeckGeometry::profile_top_d2(double r) const {
    check_radius(*this, r);
    return 2.0 * lambda1 + 6.0 * c3_top * r;
}

double NeckGeometry::profile_bot_d2(double r) const {
    check_radius(*this, r);
    return -2.0 * lambda2 + 6.0 * c3_bot * r;
}

double NeckGeometry::top_z(double r) const { return eps / 2.0 + profile_top(r); }

double NeckGeometry::bot_z(double r) const { return -eps / 2.0 + profile_bot(r); }

double NeckGeometry::gap(double r) const {
    check_radius(*this, r);
    return eps + profile_top(r) - profile_bot(r);
}

std::array<double, 2> NeckGeometry::conormal_top(double r) const {
    return {-profile_top_d1(r), 1.0};
}

bool NeckGeometry::in_neck(double r, double z) const {
    if (!(r >= 0.0 && r < R)) return false;
    return z > bot_z(r) && z < top_z(r);
}

}  // namespace neck
