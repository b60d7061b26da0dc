#ifndef QLM_CURVATURE_HPP_
#define QLM_CURVATURE_HPP_

#include <optional>

#include "qlm/bartnik.hpp"
#include "qlm/metrics.hpp"

namespace qlm {

/// Riemann tensor and its first two covariant-derivative jets at a point, in
/// an orthonormal frame.  Index order fixed by the executable fixtures: on the
/// unit round 3-sphere, riem[mu][r][nu][r] = -delta_{mu nu} for orthonormal
/// directions mu, nu orthogonal to r, and ricci (contraction of the first and
/// last slots) is +2 g.  driem carries R_{abcd|e} (derivative slot last);
/// ddriem carries R_{abcd|ef} (inner derivative e first).
struct CurvatureJet {
    double riem[3][3][3][3] = {};
    double driem[3][3][3][3][3] = {};
    double ddriem[3][3][3][3][3][3] = {};
    bool has_second = false;
    double ricci[3][3] = {};
    double scalar = 0.0;
    double lap_scalar = 0.0;

    /// Worst violation of the Riemann symmetries (antisymmetry in the first
    /// and second pairs, pair exchange, first Bianchi).
    double symmetry_violation() const;
    /// Frame-invariant contractions.
    double riemann_norm2() const;  // R_abcd R^abcd
};

/// Curvature jets from metric derivatives (jet arithmetic end to end; exact to
/// roundoff for analytic presets).  Requesting second covariant derivatives
/// needs order-6 metric data; metrics that cannot supply it raise InputError.
/// An optional rotation replaces the frame E by E Q (used for invariance
/// tests).
CurvatureJet curvature_jet(const AmbientMetric& metric, const Vec3& p,
                           bool include_second = true, const Mat3* rotation = nullptr);

/// Geodesic-sphere boundary fields at radius t, assembled from the curvature
/// series with exact rational coefficients; remainder O(t^5) relative to the
/// shown brackets.
struct GeodesicSphereExpansion {
    double t = 0.0;
    SphereSymTensorField gamma;       // induced metric gamma(t)
    SphereSymTensorField gamma_inv;   // inverse metric (series)
    SphereSymTensorField second_ff;   // A(t)
    SphereScalarField H;              // mean curvature H(t)
    int remainder_order = 5;
};

GeodesicSphereExpansion expansion_boundary_data(const CurvatureJet& jet, double t,
                                                const GridSpec& grid);

/// Geodesic-sphere data from direct integration of the geodesic equation in
/// every grid direction (adaptive 8th-order Runge-Kutta-Fehlberg), with the
/// exponential map differentiated across directions by 4th-order central
/// differences and H from the exact normal derivative of the induced metric
/// (the first variation of the area form along the unit normal).
struct OracleSphere {
    SphereSymTensorField gamma;  // unrescaled induced metric gamma(t)
    SphereScalarField H;         // unrescaled mean curvature H(t)
    double worst_unit_speed_error = 0.0;
    double ode_tolerance = 0.0;
    double direction_fd_step = 0.0;
};

OracleSphere geodesic_sphere_oracle(const AmbientMetric& metric, const Vec3& p, double t,
                                    const GridSpec& grid, double ode_tol = 1e-13,
                                    double fd_delta = 1e-3);

enum class SphereDataMode { series, oracle };

/// Bartnik data of the radius-r geodesic sphere under the rescaled metric
/// r^{-2} g:  gamma = gamma(r)/r^2, H = r H(r), both on the unit-sphere grid.
BartnikData preset_from_metric_sphere(const AmbientMetric& metric, const Vec3& p, double r,
                                      const GridSpec& grid,
                                      SphereDataMode mode = SphereDataMode::series);
/// Uses the metric's canonical center.
BartnikData preset_from_metric_sphere(const AmbientMetric& metric, double r,
                                      const GridSpec& grid,
                                      SphereDataMode mode = SphereDataMode::series);

/// r * first_order_mass of the rescaled geodesic-sphere data (the scaling law
/// m[lambda^2 g] = lambda m[g] reduces the small-sphere mass to the rescaled
/// first-order functional).
double small_sphere_mass(const AmbientMetric& metric, const Vec3& p, double r,
                         const GridSpec& grid, SphereDataMode mode = SphereDataMode::series);

/// Richardson (polynomial-in-r^2) extrapolation of mass/r^power to r -> 0.
struct LimitFit {
    double coefficient = 0.0;
    double error_estimate = 0.0;
    bool monotone = true;  // false flags non-monotone convergence (diagnostic)
};

LimitFit limit_fit(const std::vector<std::pair<double, double>>& radius_mass, int power);

}  // namespace qlm

#endif  // QLM_CURVATURE_HPP_
