#include "neck/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace neck {

void ReducedProblem::validate() const {
    if (n < 3) throw std::invalid_argument("problem: n must be >= 3");
    if (k < 0) throw std::invalid_argument("problem: k must be >= 0");
    geom.validate();
}

double SparseSystem::row_sum(int row) const {
    double s = 0.0;
    for (int p = row_ptr[row]; p < row_ptr[row + 1]; ++p) s += values[p];
    return s;
}

namespace {

struct Triplet {
    int row;
    int col;
    double val;
};

SparseSystem compress(std::vector<Triplet>& trips, std::vector<double> rhs,
                      int rows, int Ns) {
    std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    SparseSystem sys;
    sys.rows = rows;
    sys.Ns = Ns;
    sys.rhs = std::move(rhs);
    sys.row_ptr.assign(rows + 1, 0);
    for (std::size_t p = 0; p < trips.size();) {
        std::size_t q = p;
        double sum = 0.0;
        while (q < trips.size() && trips[q].row == trips[p].row &&
               trips[q].col == trips[p].col) {
            sum += trips[q].val;
            ++q;
        }
        sys.col_idx.push_back(trips[p].col);
        sys.values.push_back(sum);
        ++sys.row_ptr[trips[p].row + 1];
        p = q;
    }
    for (int r = 0; r < rows; ++r) sys.row_ptr[r + 1] += sys.row_ptr[r];
    return sys;
}

}  // namespace

SparseSystem assemble(const ReducedProblem& prob, const Grid& grid) {
    prob.validate();
    const int Nr = grid.Nr, Ns = grid.Ns;
    if (Nr < 4 || Ns < 4) throw std::invalid_argument("assemble: degenerate grid");
    const int n = prob.n, k = prob.k;
    const double kk = static_cast<double>(k) * (k + n - 3);
    const double dq = 1.0 / Nr, ds = 1.0 / Ns;
    const int rows = (Nr + 1) * (Ns + 1);
    const NeckGeometry& ge = grid.geom;

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(rows) * 9);
    std::vector<double> rhs(rows, 0.0);
    auto idx = [Ns](int i, int j) { return i * (Ns + 1) + j; };
    auto add = [&](int i, int j, int i2, int j2, double v) {
        trips.push_back({idx(i, j), idx(i2, j2), v});
    };

    for (int i = 0; i <= Nr; ++i) {
        const double ri = grid.r_nodes[i];
        const double Ji = grid.dr_dq(grid.q_nodes[i]);
        const double Jpi = grid.d2r_dq2(grid.q_nodes[i]);
        const double B = ge.bot_z(ri), T = ge.top_z(ri);
        const double H = T - B;
        const double Bp = ge.profile_bot_d1(ri), Tp = ge.profile_top_d1(ri);
        const double Hp = Tp - Bp;
        const double Bpp = ge.profile_bot_d2(ri), Tpp = ge.profile_top_d2(ri);
        const double Hpp = Tpp - Bpp;

        for (int j = 0; j <= Ns; ++j) {
            const double sj = grid.s_nodes[j];
            const double zij = (1.0 - sj) * B + sj * T;
            const int row = idx(i, j);

            if (i == Nr) {  // outer Dirichlet
                add(i, j, i, j, 1.0);
                rhs[row] = prob.outer_data ? prob.outer_data(zij) : 0.0;
                continue;
            }
            if (i == 0) {
                if (k >= 1) {  // axis Dirichlet: v ~ r^k
                    add(i, j, i, j, 1.0);
                    continue;
                }
                // k = 0 axis: the radial term's r -> 0 limit gives
                // (n-1)[v_qq/J^2 + sigma_r v_s] + v_ss/H^2 = f with sigma = 0
                // on the axis; v_qq uses the even-reflection ghost.
                if (j == 0 || j == Ns) {
                    // Corner: h'(0) = 0 reduces the conormal row to v_s = 0.
                    const double sgn = (j == 0) ? 1.0 : -1.0;
                    const int j0 = j, j1 = (j == 0) ? 1 : Ns - 1,
                              j2 = (j == 0) ? 2 : Ns - 2;
                    add(i, j, i, j0, sgn * -3.0 / (2.0 * ds));
                    add(i, j, i, j1, sgn * 4.0 / (2.0 * ds));
                    add(i, j, i, j2, sgn * -1.0 / (2.0 * ds));
                    continue;
                }
                const double cqq = (n - 1.0) / (Ji * Ji);
                add(i, j, 0, j, -2.0 * cqq / (dq * dq));
                add(i, j, 1, j, 2.0 * cqq / (dq * dq));
                const double cs = -(n - 1.0) * (Bpp + sj * Hpp) / H;
                add(i, j, 0, j + 1, cs / (2.0 * ds));
                add(i, j, 0, j - 1, -cs / (2.0 * ds));
                const double css = 1.0 / (H * H);
                add(i, j, 0, j + 1, css / (ds * ds));
                add(i, j, 0, j, -2.0 * css / (ds * ds));
                add(i, j, 0, j - 1, css / (ds * ds));
                rhs[row] = prob.source ? prob.source(ri, zij) : 0.0;
                continue;
            }

            const double sig = -(Bp + sj * Hp) / H;
            if (j == 0 || j == Ns) {
                // Conormal row: (1 + W'^2)/H v_s - W'/J v_q = g_N with
                // W' the slope of the surface in question.
                const double Wp = (j == 0) ? Bp : Tp;
                const double cws = (1.0 + Wp * Wp) / H;
                const double cwq = Wp / Ji;
                const double sgn = (j == 0) ? 1.0 : -1.0;
                const int j0 = j, j1 = (j == 0) ? 1 : Ns - 1,
                          j2 = (j == 0) ? 2 : Ns - 2;
                add(i, j, i, j0, sgn * cws * -3.0 / (2.0 * ds));
                add(i, j, i, j1, sgn * cws * 4.0 / (2.0 * ds));
                add(i, j, i, j2, sgn * cws * -1.0 / (2.0 * ds));
                add(i, j, i + 1, j, -cwq / (2.0 * dq));
                add(i, j, i - 1, j, cwq / (2.0 * dq));
                const ScalarFn1& gN = (j == 0) ? prob.neumann_bot : prob.neumann_top;
                rhs[row] = gN ? gN(ri) : 0.0;
                continue;
            }

            // Interior 9-point stencil from the chain rule.
            const double sigr = -(Bpp + sj * Hpp) / H - 2.0 * sig * Hp / H;
            const double a1 = (n - 2.0) / ri;
            const double a0 = -kk / (ri * ri);
            const double cqq = 1.0 / (Ji * Ji);
            const double cqs = 2.0 * sig / Ji;
            const double css = sig * sig + 1.0 / (H * H);
            const double cq = -Jpi / (Ji * Ji * Ji) + a1 / Ji;
            const double cs = sigr + a1 * sig;
            add(i, j, i + 1, j, cqq / (dq * dq));
            add(i, j, i - 1, j, cqq / (dq * dq));
            add(i, j, i, j, -2.0 * cqq / (dq * dq));
            add(i, j, i, j + 1, css / (ds * ds));
            add(i, j, i, j - 1, css / (ds * ds));
            add(i, j, i, j, -2.0 * css / (ds * ds));
            add(i, j, i + 1, j + 1, cqs / (4.0 * dq * ds));
            add(i, j, i - 1, j - 1, cqs / (4.0 * dq * ds));
            add(i, j, i + 1, j - 1, -cqs / (4.0 * dq * ds));
            add(i, j, i - 1, j + 1, -cqs / (4.0 * dq * ds));
            add(i, j, i + 1, j, cq / (2.0 * dq));
            add(i, j, i - 1, j, -cq / (2.0 * dq));
            add(i, j, i, j + 1, cs / (2.0 * ds));
            add(i, j, i, j - 1, -cs / (2.0 * ds));
            add(i, j, i, j, a0);
            rhs[row] = prob.source ? prob.source(ri, zij) : 0.0;
        }
    }
    return compress(trips, std::move(rhs), rows, Ns);
}

Field solve(const SparseSystem& sys, double tol) {
    const int N = sys.rows;
    if (N == 0) throw std::invalid_argument("solve: empty system");

    // Row equilibration keeps the mixed scales of interior rows (~1/ds^2/H^2)
    // and unit Dirichlet rows from degrading the factorization.
    std::vector<double> scale(N, 1.0);
    for (int r = 0; r < N; ++r) {
        double m = 0.0;
        for (int p = sys.row_ptr[r]; p < sys.row_ptr[r + 1]; ++p)
            m = std::max(m, std::abs(sys.values[p]));
        if (m > 0.0) scale[r] = 1.0 / m;
    }

    Eigen::SparseMatrix<double> A(N, N);
    {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(sys.values.size());
        for (int r = 0; r < N; ++r)
            for (int p = sys.row_ptr[r]; p < sys.row_ptr[r + 1]; ++p)
                trips.emplace_back(r, sys.col_idx[p], sys.values[p] * scale[r]);
        A.setFromTriplets(trips.begin(), trips.end());
    }
    Eigen::VectorXd b(N);
    for (int r = 0; r < N; ++r) b[r] = sys.rhs[r] * scale[r];

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw SolveError("solve: sparse LU factorization failed",
                         std::numeric_limits<double>::infinity());
    Eigen::VectorXd x = lu.solve(b);

    // Residual of the row-equilibrated system: every row is normalized to a
    // unit max coefficient, so the metric weights interior and boundary rows
    // alike instead of being dominated by the O(1/h^2) interior scale.
    double num = 0.0, den = 0.0;
    for (int r = 0; r < N; ++r) {
        double av = 0.0;
        for (int p = sys.row_ptr[r]; p < sys.row_ptr[r + 1]; ++p)
            av += sys.values[p] * scale[r] * x[sys.col_idx[p]];
        num += (av - b[r]) * (av - b[r]);
        den += b[r] * b[r];
    }
    const double residual = std::sqrt(num) / (den > 0.0 ? std::sqrt(den) : 1.0);
    if (!(residual <= tol)) {
        char msg[96];
        std::snprintf(msg, sizeof(msg),
                      "solve: residual %.3e exceeds tolerance %.3e", residual, tol);
        throw SolveError(msg, residual);
    }

    Field f;
    f.Ns = sys.Ns;
    f.Nr = N / (sys.Ns + 1) - 1;
    f.v.assign(x.data(), x.data() + N);
    f.residual = residual;
    f.solved = true;
    return f;
}

Field solve_problem(const ReducedProblem& prob, const Grid& grid, double tol) {
    return solve(assemble(prob, grid), tol);
}

GradientField gradient_surrogate(const Field& field, const ReducedProblem& prob,
                                 const Grid& grid) {
    if (!field.solved) throw std::invalid_argument("gradient_surrogate: unsolved field");
    const int Nr = grid.Nr, Ns = grid.Ns;
    const double dq = 1.0 / Nr, ds = 1.0 / Ns;
    const double kk = static_cast<double>(prob.k) * (prob.k + prob.n - 3);
    GradientField out;
    out.Nr = Nr;
    out.Ns = Ns;
    const int N = (Nr + 1) * (Ns + 1);
    out.G.assign(N, 0.0);
    out.vr.assign(N, 0.0);
    out.vz.assign(N, 0.0);

    auto vq_at = [&](int i, int j) {
        if (i == 0)
            return (-3.0 * field.at(0, j) + 4.0 * field.at(1, j) - field.at(2, j)) /
                   (2.0 * dq);
        if (i == Nr)
            return (3.0 * field.at(Nr, j) - 4.0 * field.at(Nr - 1, j) +
                    field.at(Nr - 2, j)) /
                   (2.0 * dq);
        return (field.at(i + 1, j) - field.at(i - 1, j)) / (2.0 * dq);
    };
    auto vs_at = [&](int i, int j) {
        if (j == 0)
            return (-3.0 * field.at(i, 0) + 4.0 * field.at(i, 1) - field.at(i, 2)) /
                   (2.0 * ds);
        if (j == Ns)
            return (3.0 * field.at(i, Ns) - 4.0 * field.at(i, Ns - 1) +
                    field.at(i, Ns - 2)) /
                   (2.0 * ds);
        return (field.at(i, j + 1) - field.at(i, j - 1)) / (2.0 * ds);
    };

    for (int i = 0; i <= Nr; ++i) {
        const double ri = grid.r_nodes[i];
        const double Ji = grid.dr_dq(grid.q_nodes[i]);
        const double H = grid.geom.gap(ri);
        const double Bp = grid.geom.profile_bot_d1(ri);
        const double Hp = grid.geom.profile_top_d1(ri) - Bp;
        for (int j = 0; j <= Ns; ++j) {
            const double sj = grid.s_nodes[j];
            const double sig = -(Bp + sj * Hp) / H;
            const double vq = vq_at(i, j), vs = vs_at(i, j);
            const double vr = vq / Ji + vs * sig;
            const double vz = vs / H;
            const int u = i * (Ns + 1) + j;
            out.vr[u] = vr;
            out.vz[u] = vz;
            double ang = 0.0;
            if (prob.k >= 1)
                ang = (i == 0) ? kk * vr * vr
                               : kk * (field.at(i, j) / ri) * (field.at(i, j) / ri);
            out.G[u] = std::sqrt(vr * vr + vz * vz + ang);
        }
    }
    return out;
}

}  // namespace neck
