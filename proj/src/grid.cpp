#include "neck/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace neck {

namespace {

constexpr double kUniformThreshold = 1e-12;

double first_cell_width(double R, int Nr, double a) {
    if (a < kUniformThreshold) return R / Nr;
    return R * (std::exp(a / Nr) - 1.0) / (std::exp(a) - 1.0);
}

}  // namespace

double Grid::r_of_q(double q) const {
    if (map_a < kUniformThreshold) return geom.R * q;
    return geom.R * std::expm1(map_a * q) / std::expm1(map_a);
}

double Grid::dr_dq(double q) const {
    if (map_a < kUniformThreshold) return geom.R;
    return geom.R * map_a * std::exp(map_a * q) / std::expm1(map_a);
}

double Grid::d2r_dq2(double q) const {
    if (map_a < kUniformThreshold) return 0.0;
    return geom.R * map_a * map_a * std::exp(map_a * q) / std::expm1(map_a);
}

double Grid::q_of_r(double r) const {
    if (map_a < kUniformThreshold) return r / geom.R;
    return std::log1p(r * std::expm1(map_a) / geom.R) / map_a;
}

double Grid::z_of(double r, double s) const {
    return (1.0 - s) * geom.bot_z(r) + s * geom.top_z(r);
}

double Grid::z(int i, int j) const { return z_of(r_nodes[i], s_nodes[j]); }

Grid build_grid(const NeckGeometry& geom, int Nr, int Ns, double pinned_a) {
    geom.validate();
    if (Nr < 4 || Ns < 4)
        throw std::invalid_argument("build_grid: Nr and Ns must be >= 4");
    if (Nr > 1024 || Ns > 128)
        throw std::invalid_argument("build_grid: sizes capped at 1024 x 128");

    const double target = std::sqrt(geom.eps) / 8.0;
    double a = 0.0;
    if (pinned_a >= 0.0) {
        a = pinned_a;
    } else if (first_cell_width(geom.R, Nr, 0.0) > target) {
        // Smallest a meeting the first-cell bound, by bisection.
        double lo = 0.0, hi = 1.0;
        while (first_cell_width(geom.R, Nr, hi) > target) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (first_cell_width(geom.R, Nr, mid) > target)
                lo = mid;
            else
                hi = mid;
        }
        a = hi;
    }

    Grid g;
    g.geom = geom;
    g.Nr = Nr;
    g.Ns = Ns;
    g.map_a = a;
    g.first_cell = first_cell_width(geom.R, Nr, a);
    g.growth_ratio = std::exp(a / Nr);
    if (g.first_cell > target * (1.0 + 1e-12))
        throw std::invalid_argument(
            "build_grid: first radial cell " + std::to_string(g.first_cell) +
            " exceeds the grading bound " + std::to_string(target));

    g.q_nodes.resize(Nr + 1);
    g.r_nodes.resize(Nr + 1);
    for (int i = 0; i <= Nr; ++i) {
        g.q_nodes[i] = static_cast<double>(i) / Nr;
        g.r_nodes[i] = g.r_of_q(g.q_nodes[i]);
    }
    g.r_nodes[Nr] = geom.R;  // exact endpoint
    g.s_nodes.resize(Ns + 1);
    for (int j = 0; j <= Ns; ++j) g.s_nodes[j] = static_cast<double>(j) / Ns;
    return g;
}

}  // namespace neck
