#include "doctest.h"
#include "neck/experiments.hpp"

#include <cmath>
#include <stdexcept>

using namespace neck;

namespace {

std::vector<double> default_eps_list() {
    std::vector<double> eps;
    for (int i = 0; i < 8; ++i)
        eps.push_back(std::pow(10.0, -4.0 + 2.0 * i / 7.0));
    return eps;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("fit recovers exact power laws") {
    std::vector<std::array<double, 2>> s1, s2, s3;
    for (int i = 0; i < 6; ++i) {
        const double eps = std::pow(10.0, -4.0 + i * 0.4);
        s1.push_back({eps, std::pow(eps, -0.3)});
        s2.push_back({eps, 5.0 * std::pow(eps, -0.2929)});
        s3.push_back({eps, 2.0});
    }
    const RateFit f1 = fit_exponent(s1);
    CHECK(std::abs(f1.slope - (-0.3)) <= 1e-12);
    CHECK(std::abs(f1.r_squared - 1.0) <= 1e-12);

    const RateFit f2 = fit_exponent(s2);
    CHECK(std::abs(f2.slope - (-0.2929)) <= 1e-12);
    CHECK(std::abs(f2.intercept - std::log(5.0)) <= 1e-12);

    const RateFit f3 = fit_exponent(s3);
    CHECK(std::abs(f3.slope) <= 1e-12);
}

TEST_CASE("fit residuals are orthogonal to the regressors") {
    std::vector<std::array<double, 2>> s;
    for (int i = 0; i < 8; ++i) {
        const double eps = std::pow(10.0, -4.0 + i * 0.3);
        s.push_back({eps, std::pow(eps, -0.25) * (1.0 + 0.01 * std::sin(3.0 * i))});
    }
    const RateFit fit = fit_exponent(s);
    double sum = 0.0, sum_x = 0.0;
    for (const auto& p : fit.samples) {
        const double e =
            std::log(p[1]) - (fit.intercept + fit.slope * std::log(p[0]));
        sum += e;
        sum_x += e * std::log(p[0]);
    }
    CHECK(std::abs(sum) <= 1e-10);
    CHECK(std::abs(sum_x) <= 1e-10);
}

TEST_CASE("fit keeps samples sorted by descending eps") {
    std::vector<std::array<double, 2>> s = {
        {1e-4, 10.0}, {1e-2, 2.0}, {1e-3, 5.0}};
    const RateFit fit = fit_exponent(s);
    REQUIRE(fit.samples.size() == 3);
    CHECK(fit.samples[0][0] == 1e-2);
    CHECK(fit.samples[2][0] == 1e-4);
    CHECK(fit.window[0] == 0);
    CHECK(fit.window[1] == 2);
}

TEST_CASE("fit rejects short or degenerate sample sets") {
    std::vector<std::array<double, 2>> s = {{1e-2, 1.0}, {1e-3, 2.0}};
    CHECK_THROWS_AS(fit_exponent(s), std::invalid_argument);
    s = {{1e-2, 1.0}, {1e-3, -2.0}, {1e-4, 3.0}};  // negative sample dropped
    CHECK_THROWS_AS(fit_exponent(s), std::invalid_argument);
}

TEST_CASE("sweep requires a decade and a half of eps") {
    const NeckGeometry geom;
    CHECK_THROWS_AS(
        run_sweep(geom, 3, 1, {1e-3, 2e-3, 5e-3}, 64, 8),
        std::invalid_argument);
}

TEST_CASE("sweep slope tracks the n=3 reference at modest resolution") {
    const NeckGeometry geom;
    const SweepResult sw = run_sweep(geom, 3, 1, default_eps_list(), 192, 24, 0.5);
    for (const auto& p : sw.points) CHECK(p.ok);
    CHECK(std::abs(sw.fit.slope - blow_up_exponent(3)) <= 0.03);
    CHECK(sw.fit.r_squared >= 0.995);
}

TEST_CASE("peak gradient grows monotonically as the gap closes") {
    const NeckGeometry geom;
    const SweepResult sw = run_sweep(geom, 3, 1, default_eps_list(), 128, 16, 0.5);
    // Points arrive in input order (ascending eps here).
    for (std::size_t i = 1; i < sw.points.size(); ++i)
        CHECK(sw.points[i - 1].max_G > sw.points[i].max_G);
}

TEST_CASE("dropping the smallest eps barely moves the slope") {
    const NeckGeometry geom;
    const SweepResult sw = run_sweep(geom, 3, 1, default_eps_list(), 192, 24, 0.5);
    std::vector<std::array<double, 2>> trimmed(sw.fit.samples.begin(),
                                               sw.fit.samples.end() - 1);
    const RateFit refit = fit_exponent(trimmed);
    CHECK(std::abs(refit.slope - sw.fit.slope) < 0.01);
}

TEST_CASE("sweep results do not depend on the job count") {
    const NeckGeometry geom;
    const SweepResult a = run_sweep(geom, 3, 1, default_eps_list(), 96, 12, 0.5, 1);
    const SweepResult b = run_sweep(geom, 3, 1, default_eps_list(), 96, 12, 0.5, 4);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].max_G == b.points[i].max_G);
        CHECK(a.points[i].residual == b.points[i].residual);
    }
    CHECK(a.fit.slope == b.fit.slope);
}

TEST_CASE("radial mode with constant data has only rounding gradients") {
    const NeckGeometry geom;
    // Constant data makes the k=0 solution constant; the sweep still runs,
    // but every max_G is differencing noise with no blow-up signal in it.
    const SweepResult sw = run_sweep(geom, 3, 0, default_eps_list(), 64, 8, 1.0);
    for (const auto& p : sw.points) {
        CHECK(p.ok);
        CHECK(p.max_G <= 1e-8);
    }
}

TEST_CASE("radial mode with mild data shows no blow-up") {
    std::vector<std::array<double, 2>> samples;
    for (const double eps : default_eps_list()) {
        NeckGeometry geom;
        geom.eps = eps;
        ReducedProblem p;
        p.n = 3;
        p.k = 0;
        p.geom = geom;
        p.outer_data = [](double z) { return 1.0 + z; };
        const Grid grid = build_grid(geom, 128, 16);
        const Field f = solve(assemble(p, grid));
        const GradientField gf = gradient_surrogate(f, p, grid);
        double mx = 0.0;
        for (int i = 0; i <= grid.Nr && grid.r_nodes[i] <= geom.R / 2.0; ++i)
            for (int j = 0; j <= grid.Ns; ++j)
                mx = std::max(mx, gf.at(i, j));
        samples.push_back({eps, mx});
    }
    // Mild geometric sensitivity remains (measured about -0.12 at these
    // grids), far from the k=1 mode's -0.29 blow-up rate.
    const RateFit fit = fit_exponent(samples);
    CHECK(std::abs(fit.slope) <= 0.15);
}

TEST_CASE("identity residual is zero for a constant field") {
    NeckGeometry geom;
    ReducedProblem p;
    p.n = 3;
    p.k = 0;
    p.geom = geom;
    p.outer_data = [](double) { return 1.0; };
    const Grid grid = build_grid(geom, 96, 12);
    const Field f = solve(assemble(p, grid));
    CHECK(boundary_identity_residual(f, p, grid) == 0.0);
}

TEST_CASE("identity residual of the v = r ansatz is the exact defect 2") {
    // v = r violates the conormal condition, so the surface identity fails
    // by exactly twice the (constant) closed-form value; the interpolation
    // and differencing reproduce that defect to probe truncation.
    NeckGeometry geom;
    ReducedProblem p;
    p.n = 3;
    p.k = 1;
    p.geom = geom;
    const Grid grid = build_grid(geom, 96, 12);
    Field f;
    f.Nr = grid.Nr;
    f.Ns = grid.Ns;
    f.solved = true;
    f.v.resize((grid.Nr + 1) * (grid.Ns + 1));
    for (int i = 0; i <= grid.Nr; ++i)
        for (int j = 0; j <= grid.Ns; ++j)
            f.v[i * (grid.Ns + 1) + j] = grid.r_nodes[i];
    const double res = boundary_identity_residual(f, p, grid);
    CHECK(std::abs(res - 2.0) <= 1e-6);
}

TEST_CASE("identity probe rejects cubic surface terms") {
    NeckGeometry geom;
    geom.c3_top = 0.05;
    CHECK_THROWS_AS(
        check_boundary_identity(geom, 3, 1, {{96, 12}, {192, 24}}),
        std::invalid_argument);
}

TEST_CASE("identity residual halves at second order") {
    const NeckGeometry geom;
    const DiagnosticResult diag =
        check_boundary_identity(geom, 3, 1, {{96, 12}, {192, 24}}, 0.5);
    CHECK(diag.pass);
    REQUIRE(diag.data.size() >= 5);
    double ratio = 0.0;
    for (const auto& [key, value] : diag.data)
        if (key == "ratio_1") ratio = value;
    CHECK(ratio >= 1.8);
}

TEST_CASE("weighted argmax moves outward only with the proper weight") {
    NeckGeometry geom;
    geom.eps = 1e-4;
    AuxParams aux = AuxParams::defaults(3);
    aux.eps = geom.eps;
    const DiagnosticResult main_diag =
        check_q_maximum(geom, aux, 1, 384, 32, 0.5, false);
    CHECK(main_diag.pass);
    CHECK(main_diag.location[0] >= 0.9 * geom.R);

    const DiagnosticResult control =
        check_q_maximum(geom, aux, 1, 384, 32, 0.5, true);
    CHECK(control.pass);
    CHECK(control.location[0] <= geom.R / 2.0);
}

TEST_CASE("weighted argmax at the wider stock gap sits at the waist") {
    NeckGeometry geom;  // eps = 1e-3
    AuxParams aux = AuxParams::defaults(3);
    aux.eps = geom.eps;
    const DiagnosticResult diag =
        check_q_maximum(geom, aux, 1, 384, 32, 0.5, false);
    CHECK_FALSE(diag.pass);
    CHECK(diag.location[0] == 0.0);
}

TEST_CASE("constant-field ties in Q resolve to the weight's own argmax") {
    NeckGeometry geom;
    AuxParams aux = AuxParams::defaults(3);
    aux.eps = geom.eps;
    const DiagnosticResult diag =
        check_q_maximum(geom, aux, 0, 64, 8, 1.0, false);
    CHECK(diag.location[0] == geom.R);
}

TEST_CASE("q check validates the barrier parameters") {
    NeckGeometry geom;
    AuxParams aux = AuxParams::defaults(3);
    aux.A = 3.0 * aux.gamma;
    CHECK_THROWS_AS(check_q_maximum(geom, aux, 1, 64, 8, 1.0, false),
                    std::invalid_argument);
}

TEST_CASE("envelope of a zero-gradient field is zero") {
    NeckGeometry geom;
    ReducedProblem p;
    p.n = 3;
    p.k = 0;
    p.geom = geom;
    p.outer_data = [](double) { return 1.0; };
    const Grid grid = build_grid(geom, 64, 8);
    const Field f = solve(assemble(p, grid));
    const GradientField gf = gradient_surrogate(f, p, grid);
    CHECK(envelope_value(gf, grid, gamma_star(3), geom.eps) <= 1e-9);
}

TEST_CASE("envelope constant is stable at gamma_star") {
    const NeckGeometry geom;
    const DiagnosticResult diag = check_envelope(
        geom, 3, 1, default_eps_list(), gamma_star(3), 192, 24, 0.5, 2);
    CHECK(diag.pass);
    CHECK(diag.max_residual <= 1.5);
}

TEST_CASE("envelope spread at gamma zero stays below threshold at desk scale") {
    // The rim contribution at r = R/2 carries a fixed weight, so with this
    // sweep range the gamma = 0 envelope only drifts by a few percent; the
    // check therefore does not discriminate gamma = 0 here.  Pinned as
    // observed behavior.
    const NeckGeometry geom;
    const DiagnosticResult diag =
        check_envelope(geom, 3, 1, default_eps_list(), 0.0, 192, 24, 0.5, 2);
    CHECK(diag.max_residual > 1.0);
    CHECK(diag.max_residual < 1.5);
    CHECK(diag.pass);
}

}  // TEST_SUITE
