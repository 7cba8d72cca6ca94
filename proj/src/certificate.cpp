#include "neck/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace neck {

double gamma_star(int n) {
    if (n < 3) throw std::domain_error("gamma_star requires n >= 3");
    const double nm1 = static_cast<double>(n) - 1.0;
    const double nm2 = static_cast<double>(n) - 2.0;
    // Conjugate form of the quadratic root; avoids the cancellation the
    // textbook form suffers for large n.
    return 2.0 * nm2 / (nm1 + std::sqrt(nm1 * nm1 + 4.0 * nm2));
}

double blow_up_exponent(int n) { return -(1.0 - gamma_star(n)) / 2.0; }

double rho(int n, double gamma) {
    if (n < 3) throw std::domain_error("rho requires n >= 3");
    const double nm1 = static_cast<double>(n) - 1.0;
    const double nm2 = static_cast<double>(n) - 2.0;
    return -(gamma * gamma + nm1 * gamma - nm2);
}

AuxParams AuxParams::defaults(int n) {
    AuxParams p;
    p.n = n;
    p.gamma = gamma_star(n);
    p.A = 2.05 * p.gamma;
    p.b = 50.0;
    p.delta = 0.01;
    p.eps = 1e-4;
    p.eta = 1e-3;
    p.xi0 = default_xi0(n, p.eta);
    return p;
}

double AuxParams::default_xi0(int n, double eta) {
    return 1.0 - static_cast<double>(n) / (4.0 * (static_cast<double>(n) - 1.0)) + eta;
}

void AuxParams::validate() const {
    if (n < 3) throw std::invalid_argument("aux: n must be >= 3");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("aux: gamma must lie in (0, 1)");
    if (!(gamma <= gamma_star(n)))
        throw std::invalid_argument("aux: gamma must not exceed gamma_star(n)");
    if (!(2.0 * gamma < A && A < 2.1 * gamma))
        throw std::invalid_argument("aux: A must satisfy 2*gamma < A < 2.1*gamma");
    if (!(b > 1.0)) throw std::invalid_argument("aux: b must be > 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("aux: delta must lie in (0, 1)");
    if (!(eps > 0.0)) throw std::invalid_argument("aux: eps must be > 0");
    if (!(eta > 0.0)) throw std::invalid_argument("aux: eta must be > 0");
    if (!(xi0 > 0.0 && xi0 < 1.0))
        throw std::invalid_argument("aux: xi0 must lie in (0, 1)");
}

double aux_F(const AuxParams& p, double r, double z) {
    const double t = r * r + p.b * p.eps;
    return std::pow(t, 1.0 - p.gamma) - std::pow(p.b * p.eps, 1.0 - p.gamma) +
           std::pow(p.eps, 1.0 - p.gamma * (1.0 - p.delta)) -
           p.A * std::pow(t, -p.gamma) * z * z;
}

std::array<double, 2> grad_F(const AuxParams& p, double r, double z) {
    const double t = r * r + p.b * p.eps;
    const double Fr = 2.0 * r * (1.0 - p.gamma) * std::pow(t, -p.gamma) +
                      2.0 * p.A * p.gamma * r * std::pow(t, -p.gamma - 1.0) * z * z;
    const double Fz = -2.0 * p.A * z * std::pow(t, -p.gamma);
    return {Fr, Fz};
}

double laplacian_F(const AuxParams& p, double r, double z) {
    const double n = static_cast<double>(p.n);
    const double g = p.gamma;
    const double t = r * r + p.b * p.eps;
    return 2.0 * (n - 1.0) * (1.0 - g) * std::pow(t, -g) -
           4.0 * g * (1.0 - g) * std::pow(t, -g - 1.0) * r * r +
           2.0 * p.A * (n - 1.0) * g * std::pow(t, -g - 1.0) * z * z -
           4.0 * p.A * g * (1.0 + g) * std::pow(t, -g - 2.0) * z * z * r * r -
           2.0 * p.A * std::pow(t, -g);
}

double boundary_expr(const AuxParams& p, double r) {
    const double g = p.gamma;
    const double t = r * r + p.b * p.eps;
    const double xn = p.eps / 2.0 + r * r / 2.0;
    return -2.0 * (1.0 - g) * std::pow(t, -g) * r * r -
           2.0 * p.A * g * std::pow(t, -g - 1.0) * r * r * xn * xn -
           2.0 * p.A * std::pow(t, -g) * xn + 2.0 * std::pow(t, 1.0 - g) -
           2.0 * std::pow(p.b * p.eps, 1.0 - g) +
           2.0 * std::pow(p.eps, 1.0 - g * (1.0 - p.delta)) -
           2.0 * p.A * std::pow(t, -g) * xn * xn;
}

double M_value(int n, double gamma, double phi, double eta) {
    if (!(phi > 0.0 && phi <= 1.0))
        throw std::domain_error("M_value requires phi in (0, 1]");
    const double nd = static_cast<double>(n);
    const double pg = std::pow(phi, gamma);
    return ((6.0 * nd + 4.0 - 4.0 / (nd - 1.0)) * pg - 4.0 * nd * phi - 2.0 * nd - 2.0) *
               gamma +
           (2.0 * (nd - 1.0) + 4.0 * (nd - 2.0) * phi + (8.0 - 6.0 * nd) * pg) -
           gamma / 5.0 - eta;
}

double M_value_dim3(double gamma, double phi, double eta) {
    const double pg = std::pow(phi, gamma);
    return 4.0 * (1.0 + phi + 5.0 * pg * gamma - 2.0 * gamma - 2.5 * pg -
                  3.0 * phi * gamma) -
           gamma / 5.0 - eta;
}

double hessian_coeff(const AuxParams& p, double r, double z) {
    const double n = static_cast<double>(p.n);
    const double t = r * r + p.b * p.eps;
    const double F = aux_F(p, r, z);
    const double xi = p.xi0 / (1.0 + p.eta);
    const double Fz2 = 4.0 * p.A * p.A * z * z * std::pow(t, -2.0 * p.gamma);
    return 2.0 * F - (8.0 * F * (n - 1.0) / n) * (1.0 - xi) - (4.0 / p.eta) * Fz2;
}

double phi_crit(int n, double gamma, double eta, double lo, double hi, double tol) {
    auto M = [&](double phi) { return M_value(n, gamma, phi, eta); };
    // Coarse log grid to bracket the first sign change.
    const int coarse = 200;
    double prev_phi = lo;
    double prev_val = M(lo);
    double blo = 0.0, bhi = 0.0;
    for (int i = 1; i <= coarse; ++i) {
        const double phi =
            lo * std::pow(hi / lo, static_cast<double>(i) / coarse);
        const double val = M(phi);
        if ((prev_val > 0.0) != (val > 0.0)) {
            blo = prev_phi;
            bhi = phi;
            break;
        }
        prev_phi = phi;
        prev_val = val;
    }
    if (bhi == 0.0)
        throw std::runtime_error("phi_crit: no sign change of M in the search range");
    while (bhi - blo > tol) {
        const double mid = 0.5 * (blo + bhi);
        if ((M(blo) > 0.0) == (M(mid) > 0.0))
            blo = mid;
        else
            bhi = mid;
    }
    return 0.5 * (blo + bhi);
}

std::vector<double> GridSpec::nodes() const {
    if (count <= 0)
        throw std::invalid_argument("scan box is empty (count must be >= 1)");
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(hi);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        out.push_back(log_spaced ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
    }
    return out;
}

ScanBoxes ScanBoxes::defaults(double R) {
    ScanBoxes b;
    b.boundary_r = {R / 200.0, R, 200, false};
    b.m_phi = {1e-4, 0.01, 100, true};
    b.hessian_r = {R / 50.0, R, 50, false};
    b.hessian_nz = 50;
    return b;
}

namespace {

std::string box_text(const GridSpec& g) {
    std::ostringstream os;
    os << (g.log_spaced ? "log[" : "[") << g.lo << ", " << g.hi << "] x "
       << g.count;
    return os.str();
}

// Tracks the point that most violates the expected sign.
struct Worst {
    bool want_negative = false;
    bool first = true;
    bool any_good = false;
    bool any_bad = false;
    double worst_value = 0.0;
    std::array<double, 2> worst_point{};

    void feed(double x, double y, double v) {
        const double badness = want_negative ? v : -v;
        const bool bad = badness >= 0.0;
        any_bad = any_bad || bad;
        any_good = any_good || !bad;
        const double current = want_negative ? worst_value : -worst_value;
        if (first || badness > current) {
            worst_value = v;
            worst_point = {x, y};
            first = false;
        }
    }

    std::string verdict() const {
        if (any_bad && any_good) return "mixed";
        return any_bad ? "fails" : "holds";
    }
};

}  // namespace

CertificateReport scan_certificate(const AuxParams& p, const ScanBoxes& boxes) {
    p.validate();
    CertificateReport report;

    // Boundary combination over the r-box: expected strictly negative.
    {
        Worst w;
        w.want_negative = true;
        for (double r : boxes.boundary_r.nodes()) {
            const double v = boundary_expr(p, r);
            w.feed(r, 0.0, v);
            report.points.push_back({"boundary_expr", r, 0.0, v});
        }
        report.checks.push_back({"boundary_expr", box_text(boxes.boundary_r),
                                 w.verdict(), w.worst_point, w.worst_value});
    }

    // M over the phi-box: expected strictly positive.
    {
        Worst w;
        for (double phi : boxes.m_phi.nodes()) {
            const double v = M_value(p.n, p.gamma, phi, p.eta);
            w.feed(phi, 0.0, v);
            report.points.push_back({"M_value", phi, 0.0, v});
        }
        report.checks.push_back({"M_value", box_text(boxes.m_phi), w.verdict(),
                                 w.worst_point, w.worst_value});
    }

    // Hessian coefficient over (r, z): z spans the local normalized gap
    // [-(eps + r^2)/2, +(eps + r^2)/2] at each radius; expected positive.
    {
        if (boxes.hessian_nz <= 0)
            throw std::invalid_argument("scan box is empty (hessian_nz must be >= 1)");
        Worst w;
        for (double r : boxes.hessian_r.nodes()) {
            const double half = (p.eps + r * r) / 2.0;
            for (int j = 0; j < boxes.hessian_nz; ++j) {
                const double f = boxes.hessian_nz == 1
                                     ? 0.0
                                     : -1.0 + 2.0 * static_cast<double>(j) /
                                                  (boxes.hessian_nz - 1);
                const double z = f * half;
                const double v = hessian_coeff(p, r, z);
                w.feed(r, z, v);
                report.points.push_back({"hessian_coeff", r, z, v});
            }
        }
        std::ostringstream os;
        os << box_text(boxes.hessian_r) << " x " << boxes.hessian_nz
           << " z-samples over the local gap";
        report.checks.push_back(
            {"hessian_coeff", os.str(), w.verdict(), w.worst_point, w.worst_value});
    }

    // Sign structure of M in phi: record every bracket on a log grid, then
    // bisect the first one.
    {
        const double lo = 1e-4, hi = 0.9;
        const int coarse = 200;
        double prev_phi = lo;
        double prev_val = M_value(p.n, p.gamma, lo, p.eta);
        for (int i = 1; i <= coarse; ++i) {
            const double phi = lo * std::pow(hi / lo, static_cast<double>(i) / coarse);
            const double val = M_value(p.n, p.gamma, phi, p.eta);
            if ((prev_val > 0.0) != (val > 0.0))
                report.phi_brackets.push_back({prev_phi, phi});
            prev_phi = phi;
            prev_val = val;
        }
        if (!report.phi_brackets.empty())
            report.phi_crit = phi_crit(p.n, p.gamma, p.eta, lo, hi, 1e-6);
    }

    return report;
}

}  // namespace neck
