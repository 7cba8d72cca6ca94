#include "neck/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

namespace neck {

namespace {

void parallel_for(int jobs, int count, const std::function<void(int)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    };
    const int nw = std::min(jobs, count);
    std::vector<std::future<void>> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w)
        pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
}

// Cubic Lagrange weights on the four lattice nodes left of and around xi,
// xi measured from the first node of the patch.
std::array<double, 4> cubic_weights(double xi) {
    return {-(xi - 1.0) * (xi - 2.0) * (xi - 3.0) / 6.0,
            xi * (xi - 2.0) * (xi - 3.0) / 2.0,
            -xi * (xi - 1.0) * (xi - 3.0) / 2.0,
            xi * (xi - 1.0) * (xi - 2.0) / 6.0};
}

// Field value at an arbitrary point of the neck by tensor cubic
// interpolation on the (q, s) lattice.
double interp_field(const Field& f, const Grid& grid, double r, double z) {
    const int Nr = grid.Nr, Ns = grid.Ns;
    const double q = grid.q_of_r(r);
    const double B = grid.geom.bot_z(r);
    const double H = grid.geom.gap(r);
    const double s = (z - B) / H;

    const double x = q * Nr;
    const double y = s * Ns;
    const int i0 = std::clamp(static_cast<int>(std::floor(x)) - 1, 0, Nr - 3);
    const int j0 = std::clamp(static_cast<int>(std::floor(y)) - 1, 0, Ns - 3);
    const auto wi = cubic_weights(x - i0);
    const auto wj = cubic_weights(y - j0);
    double v = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            v += wi[a] * wj[b] * f.at(i0 + a, j0 + b);
    return v;
}

struct IdentityScan {
    double max_rel = 0.0;
    double arg_r = 0.0;
};

IdentityScan identity_scan(const Field& field, const ReducedProblem& prob,
                           const Grid& grid, double floor) {
    if (!prob.geom.pure_paraboloid())
        throw std::invalid_argument(
            "boundary identity: geometry must be the pure paraboloid pair");
    const double kk = static_cast<double>(prob.k) * (prob.k + prob.n - 3);
    const double R = prob.geom.R;
    const int kSamples = 24;

    IdentityScan out;
    for (int m = 0; m < kSamples; ++m) {
        const double rm =
            0.05 * R + (0.9 * R - 0.05 * R) * m / (kSamples - 1.0);
        const double T = prob.geom.top_z(rm);
        const double tau = prob.geom.gap(rm) / grid.Ns;

        // Three points marching into the neck along -nu, nu = (-rm, 1).
        double S[3];
        for (int p = 0; p < 3; ++p) {
            const double rr = rm * (1.0 + p * tau);
            const double zz = T - p * tau;
            const double v = interp_field(field, grid, rr, zz);
            S[p] = kk * (v / rr) * (v / rr);
        }
        const double dS = (3.0 * S[0] - 4.0 * S[1] + S[2]) / (2.0 * tau);
        const double rel = std::abs(dS - 2.0 * S[0]) / (S[0] + floor);
        if (rel > out.max_rel) {
            out.max_rel = rel;
            out.arg_r = rm;
        }
    }
    return out;
}

struct SolveOutcome {
    Grid grid;
    Field field;
    GradientField grad;
};

SolveOutcome solve_mode(const NeckGeometry& geom, int n, int k, int Nr, int Ns,
                        double outer_value, double pinned_a = -1.0) {
    ReducedProblem prob;
    prob.n = n;
    prob.k = k;
    prob.geom = geom;
    prob.outer_data = [outer_value](double) { return outer_value; };
    SolveOutcome out;
    out.grid = build_grid(geom, Nr, Ns, pinned_a);
    out.field = solve(assemble(prob, out.grid));
    out.grad = gradient_surrogate(out.field, prob, out.grid);
    return out;
}

}  // namespace

RateFit fit_exponent(const std::vector<std::array<double, 2>>& samples) {
    std::vector<std::array<double, 2>> keep;
    for (const auto& s : samples)
        if (s[0] > 0.0 && s[1] > 0.0 && std::isfinite(s[0]) && std::isfinite(s[1]))
            keep.push_back(s);
    if (keep.size() < 3)
        throw std::invalid_argument("fit_exponent: need at least 3 valid samples");
    std::sort(keep.begin(), keep.end(),
              [](const auto& a, const auto& b) { return a[0] > b[0]; });

    const int m = static_cast<int>(keep.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& s : keep) {
        sx += std::log(s[0]);
        sy += std::log(s[1]);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& s : keep) {
        const double dx = std::log(s[0]) - mx, dy = std::log(s[1]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_exponent: all eps values coincide");

    RateFit fit;
    fit.samples = std::move(keep);
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (const auto& s : fit.samples) {
        const double e = std::log(s[1]) - (fit.intercept + fit.slope * std::log(s[0]));
        ss_res += e * e;
    }
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    fit.window = {0, m - 1};
    return fit;
}

SweepResult run_sweep(const NeckGeometry& geom_template, int n, int k,
                      const std::vector<double>& eps_list, int Nr, int Ns,
                      double outer_value, int jobs) {
    if (eps_list.size() < 2)
        throw std::invalid_argument("run_sweep: need at least 2 eps values");
    const auto [emin, emax] =
        std::minmax_element(eps_list.begin(), eps_list.end());
    if (*emin <= 0.0)
        throw std::invalid_argument("run_sweep: eps values must be positive");
    if (std::log10(*emax / *emin) < 1.5 - 1e-12)
        throw std::invalid_argument("run_sweep: eps_list must span >= 1.5 decades");

    SweepResult result;
    result.points.resize(eps_list.size());
    parallel_for(jobs, static_cast<int>(eps_list.size()), [&](int i) {
        SweepPoint& pt = result.points[i];
        pt.eps = eps_list[i];
        pt.Nr = Nr;
        pt.Ns = Ns;
        try {
            NeckGeometry geom = geom_template;
            geom.eps = eps_list[i];
            geom.validate();
            const SolveOutcome so = solve_mode(geom, n, k, Nr, Ns, outer_value);
            pt.residual = so.field.residual;
            const double half = geom.R / 2.0;
            for (int ii = 0; ii <= so.grid.Nr; ++ii) {
                if (so.grid.r_nodes[ii] > half + 1e-15) break;
                for (int jj = 0; jj <= so.grid.Ns; ++jj) {
                    const double g = so.grad.at(ii, jj);
                    if (g > pt.max_G) {
                        pt.max_G = g;
                        pt.max_r = so.grid.r_nodes[ii];
                        pt.max_z = so.grid.z(ii, jj);
                    }
                }
            }
            pt.ok = true;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
        }
    });

    std::vector<std::array<double, 2>> samples;
    for (const auto& pt : result.points)
        if (pt.ok) samples.push_back({pt.eps, pt.max_G});
    result.fit = fit_exponent(samples);
    return result;
}

double boundary_identity_residual(const Field& field, const ReducedProblem& prob,
                                  const Grid& grid, double floor) {
    return identity_scan(field, prob, grid, floor).max_rel;
}

DiagnosticResult check_boundary_identity(
    const NeckGeometry& geom, int n, int k,
    const std::vector<std::array<int, 2>>& levels, double outer_value) {
    if (!geom.pure_paraboloid())
        throw std::invalid_argument(
            "boundary identity: geometry must be the pure paraboloid pair");
    if (levels.size() < 2)
        throw std::invalid_argument("boundary identity: need >= 2 grid levels");

    DiagnosticResult res;
    res.name = "boundary-identity";

    double pinned_a = -1.0;
    std::vector<double> residuals;
    double last_arg_r = 0.0;
    for (std::size_t L = 0; L < levels.size(); ++L) {
        ReducedProblem prob;
        prob.n = n;
        prob.k = k;
        prob.geom = geom;
        prob.outer_data = [outer_value](double) { return outer_value; };
        Grid grid = build_grid(geom, levels[L][0], levels[L][1], pinned_a);
        if (L == 0) pinned_a = grid.map_a;
        Field field = solve(assemble(prob, grid));
        const IdentityScan scan = identity_scan(field, prob, grid, 1e-14);
        residuals.push_back(scan.max_rel);
        last_arg_r = scan.arg_r;
        res.data.emplace_back("Nr_" + std::to_string(L),
                              static_cast<double>(levels[L][0]));
        res.data.emplace_back("residual_" + std::to_string(L), scan.max_rel);
    }

    bool pass = true;
    for (std::size_t L = 1; L < residuals.size(); ++L) {
        const double ratio = residuals[L - 1] / residuals[L];
        res.data.emplace_back("ratio_" + std::to_string(L), ratio);
        if (!(ratio >= 1.8)) pass = false;
    }
    res.pass = pass;
    res.max_residual = residuals.back();
    res.location = {last_arg_r, geom.top_z(last_arg_r)};
    return res;
}

DiagnosticResult check_q_maximum(const NeckGeometry& geom, const AuxParams& aux,
                                 int k, int Nr, int Ns, double outer_value,
                                 bool degenerate) {
    if (!degenerate) {
        aux.validate();
        if (aux.gamma > gamma_star(aux.n) + 1e-15)
            throw std::invalid_argument("q-maximum: gamma must be <= gamma_star(n)");
    }
    const SolveOutcome so = solve_mode(geom, aux.n, k, Nr, Ns, outer_value);
    const double kk = static_cast<double>(k) * (k + aux.n - 3);

    const int stride = so.grid.Ns + 1;
    std::vector<double> angmax(static_cast<std::size_t>(so.grid.Nr + 1) * stride);
    double gmax = 0.0, vscale = 0.0;
    for (int i = 0; i <= so.grid.Nr; ++i) {
        const double r = so.grid.r_nodes[i];
        for (int j = 0; j <= so.grid.Ns; ++j) {
            const int u = i * stride + j;
            const double P = so.grad.vr[u] * so.grad.vr[u] +
                             so.grad.vz[u] * so.grad.vz[u];
            double S = 0.0;
            if (k >= 1)
                S = (i == 0) ? kk * so.grad.vr[u] * so.grad.vr[u]
                             : kk * (so.field.at(i, j) / r) * (so.field.at(i, j) / r);
            angmax[u] = std::max(P, S);
            gmax = std::max(gmax, angmax[u]);
            vscale = std::max(vscale, std::abs(so.field.at(i, j)));
        }
    }

    // A field constant to rounding carries only noise in its gradient; Q is
    // then flat and the argmax falls to the weight alone.
    const double g_floor = 1e-8 * std::max(vscale, 1e-30) / geom.R;
    const bool flat = gmax <= g_floor * g_floor;

    double best_q = -1.0, best_f = -1.0, best_r = 0.0, best_z = 0.0;
    for (int i = 0; i <= so.grid.Nr; ++i) {
        const double r = so.grid.r_nodes[i];
        for (int j = 0; j <= so.grid.Ns; ++j) {
            const double z = so.grid.z(i, j);
            const double F = degenerate ? 1.0 : aux_F(aux, r, z);
            const double q = F * (flat ? 1.0 : angmax[i * stride + j]);
            if (q > best_q || (q == best_q && F > best_f)) {
                best_q = q;
                best_f = F;
                best_r = r;
                best_z = z;
            }
        }
    }

    DiagnosticResult res;
    res.name = degenerate ? "q-maximum-degenerate" : "q-maximum";
    res.max_residual = best_q;
    res.location = {best_r, best_z};
    res.data.emplace_back("q_max", best_q);
    if (flat) res.data.emplace_back("gradient_flat", 1.0);
    res.data.emplace_back("argmax_r", best_r);
    res.data.emplace_back("argmax_z", best_z);
    res.data.emplace_back("argmax_r_over_R", best_r / geom.R);
    res.pass = degenerate ? (best_r <= geom.R / 2.0 + 1e-12)
                          : (best_r >= 0.9 * geom.R - 1e-12);
    return res;
}

double envelope_value(const GradientField& grad, const Grid& grid, double gamma,
                      double eps, double* arg_r, double* arg_z) {
    const double half = grid.geom.R / 2.0;
    double best = 0.0, br = 0.0, bz = 0.0;
    for (int i = 0; i <= grid.Nr; ++i) {
        const double r = grid.r_nodes[i];
        if (r > half + 1e-15) break;
        const double w = std::pow(eps + r * r, 0.5 * (1.0 - gamma));
        for (int j = 0; j <= grid.Ns; ++j) {
            const double c = grad.at(i, j) * w;
            if (c > best) {
                best = c;
                br = r;
                bz = grid.z(i, j);
            }
        }
    }
    if (arg_r) *arg_r = br;
    if (arg_z) *arg_z = bz;
    return best;
}

DiagnosticResult check_envelope(const NeckGeometry& geom_template, int n, int k,
                                const std::vector<double>& eps_list, double gamma,
                                int Nr, int Ns, double outer_value, int jobs) {
    if (eps_list.size() < 2)
        throw std::invalid_argument("check_envelope: need at least 2 eps values");

    struct Point {
        double C = 0.0, r = 0.0, z = 0.0;
    };
    std::vector<Point> pts(eps_list.size());
    parallel_for(jobs, static_cast<int>(eps_list.size()), [&](int i) {
        NeckGeometry geom = geom_template;
        geom.eps = eps_list[i];
        geom.validate();
        const SolveOutcome so = solve_mode(geom, n, k, Nr, Ns, outer_value);
        pts[i].C = envelope_value(so.grad, so.grid, gamma, geom.eps, &pts[i].r,
                                  &pts[i].z);
    });

    DiagnosticResult res;
    res.name = "envelope";
    double cmin = pts[0].C, cmax = pts[0].C;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        res.data.emplace_back("C_" + std::to_string(i), pts[i].C);
        cmin = std::min(cmin, pts[i].C);
        if (pts[i].C > cmax) {
            cmax = pts[i].C;
            imax = i;
        }
    }
    const double ratio = (cmin > 0.0) ? cmax / cmin
                                      : std::numeric_limits<double>::infinity();
    res.data.emplace_back("ratio", ratio);
    res.max_residual = ratio;
    res.location = {pts[imax].r, pts[imax].z};
    res.pass = (cmax > 0.0) && (ratio <= 1.5);
    return res;
}

}  // namespace neck
