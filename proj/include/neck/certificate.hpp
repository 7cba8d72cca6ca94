#pragma once

// Closed-form evaluation of the quantities appearing in the maximum-principle
// argument for the thin-neck insulated conduction field, plus region scans
// that report exactly where each sign condition holds.
//
// Conventions, with t = r^2 + b*eps and gamma written g:
//   F(r, z)     = t^{1-g} - (b eps)^{1-g} + eps^{1 - g(1-delta)} - A t^{-g} z^2
//   F_r         = 2 r (1-g) t^{-g} + 2 A g r t^{-g-1} z^2
//   F_z         = -2 A z t^{-g}
//   Laplacian F = 2(n-1)(1-g) t^{-g} - 4 g (1-g) t^{-g-1} r^2
//                 + 2 A (n-1) g t^{-g-1} z^2 - 4 A g (1+g) t^{-g-2} z^2 r^2
//                 - 2 A t^{-g}
// boundary_expr is the combination (grad F) . (-r, 1) + 2 F evaluated on the
// normalized top paraboloid z = eps/2 + r^2/2 (surfaces +-(eps + r^2)/2), and
// M / hessian_coeff are the two sign-controlling coefficients of the interior
// argument, with phi = r^2 / (r^2 + b eps) as the scan variable for M.

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace neck {

// gamma_star(n): the positive root of g^2 + (n-1) g - (n-2) = 0, in (0, 1).
// Throws std::domain_error for n < 3.
double gamma_star(int n);

// -(1 - gamma_star(n)) / 2: the gap exponent of the peak gradient.
double blow_up_exponent(int n);

// rho(n, g) = -(g^2 + (n-1) g - (n-2)); nonnegative iff g <= gamma_star(n).
double rho(int n, double gamma);

struct AuxParams {
    int n = 3;
    double gamma = 0.0;  // exponent in (0, 1)
    double A = 0.0;      // z^2 coefficient; admissible range 2*gamma < A < 2.1*gamma
    double b = 50.0;     // offset coefficient, > 1
    double delta = 0.01; // small exponent tweak, in (0, 1)
    double eps = 1e-4;   // gap parameter, > 0
    double eta = 1e-3;   // slack, > 0
    double xi0 = 0.0;    // mixing weight in (0, 1)

    // Defaults for dimension n: gamma = gamma_star(n), A = 2.05*gamma,
    // xi0 = 1 - n/(4(n-1)) + eta, and the literal defaults above.
    static AuxParams defaults(int n);

    // Default mixing weight 1 - n/(4(n-1)) + eta.
    static double default_xi0(int n, double eta);

    // Throws std::invalid_argument on violations: n >= 3, gamma in (0, 1),
    // gamma <= gamma_star(n), 2*gamma < A < 2.1*gamma, b > 1, delta in (0, 1),
    // eps > 0, eta > 0, xi0 in (0, 1).
    void validate() const;
};

double aux_F(const AuxParams& p, double r, double z);
std::array<double, 2> grad_F(const AuxParams& p, double r, double z);
double laplacian_F(const AuxParams& p, double r, double z);

// The boundary combination on the normalized top paraboloid (see header
// comment); negative values are what the interior argument needs.
double boundary_expr(const AuxParams& p, double r);

// M(phi, gamma) for general dimension n; throws std::domain_error for
// phi outside (0, 1].
double M_value(int n, double gamma, double phi, double eta);

// Independent specialized form for n = 3, used as a cross-check of M_value:
// 4(1 + phi + 5 phi^g g - 2 g - (5/2) phi^g - 3 phi g) - g/5 - eta.
double M_value_dim3(double gamma, double phi, double eta);

// The curvature-term coefficient 2F - (8F(n-1)/n)(1 - xi) - (4/eta)|F_z|^2
// with xi = xi0 / (1 + eta) and |F_z|^2 = 4 A^2 z^2 t^{-2 gamma}.
double hessian_coeff(const AuxParams& p, double r, double z);

// Smallest phi in (lo, hi) where M changes sign, located by bisection to tol
// after bracketing on a coarse log grid.  Throws std::runtime_error if no
// sign change is bracketed.
double phi_crit(int n, double gamma, double eta, double lo = 1e-4,
                double hi = 0.9, double tol = 1e-6);

// -------------------------------------------------------------- region scans

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    bool log_spaced = false;

    std::vector<double> nodes() const;  // throws std::invalid_argument if empty
};

struct ScanBoxes {
    GridSpec boundary_r;   // r-grid for boundary_expr
    GridSpec m_phi;        // phi-grid for M
    GridSpec hessian_r;    // r-grid for hessian_coeff
    int hessian_nz = 0;    // z-samples per radius, spanning the local gap

    // 200 radii on (0, R], 100 log-spaced phi on (0, 0.01], 50x50 (r, z).
    static ScanBoxes defaults(double R);
};

struct ScanPoint {
    std::string check;
    double x = 0.0;   // r or phi
    double y = 0.0;   // z where applicable
    double value = 0.0;
};

struct CheckRecord {
    std::string check_name;
    std::string parameter_box;           // human-readable box description
    std::string verdict;                 // "holds", "fails", or "mixed"
    std::array<double, 2> worst_point{}; // (r, z) or (phi, 0)
    double worst_value = 0.0;            // signed value at worst_point
};

struct CertificateReport {
    std::vector<CheckRecord> checks;
    double phi_crit = 0.0;                              // 0 when no sign change
    std::vector<std::pair<double, double>> phi_brackets; // all grid sign brackets
    std::vector<ScanPoint> points;                      // every evaluated point
};

// Evaluates boundary_expr over the r-box, M over the phi-box, and
// hessian_coeff over the (r, z)-box; reports a verdict, the worst point, and
// the sign-change location of M.  "Worst" means the point that most violates
// the expected sign (boundary_expr expected < 0, the others > 0).
// Throws std::invalid_argument when any box is empty.
CertificateReport scan_certificate(const AuxParams& p, const ScanBoxes& boxes);

}  // namespace neck
