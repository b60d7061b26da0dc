#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qlm/curvature.hpp"
#include "qlm/errors.hpp"

using namespace qlm;

namespace {

double loglog_slope2(double x1, double y1, double x2, double y2) {
    return (std::log(y2) - std::log(y1)) / (std::log(x2) - std::log(x1));
}

double sup_tensor_diff(const SphereSymTensorField& a, const SphereSymTensorField& b) {
    SphereSymTensorField d = a;
    d -= b;
    return d.max_abs();
}

double sup_scalar_diff(const SphereScalarField& a, const SphereScalarField& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.samples().size(); ++k)
        s = std::max(s, std::abs(a.samples()[k] - b.samples()[k]));
    return s;
}

}  // namespace

TEST_CASE("jet arithmetic reproduces closed-form partial derivatives") {
    // f = x^2 y + exp(z) * sqrt(x), expanded at (1.5, -0.7, 0.3)
    double x0 = 1.5, y0 = -0.7, z0 = 0.3;
    Jet x = Jet::variable(6, 0, x0), y = Jet::variable(6, 1, y0), z = Jet::variable(6, 2, z0);
    Jet f = x * x * y + z.exp() * x.sqrt();
    CHECK(f.value() == doctest::Approx(x0 * x0 * y0 + std::exp(z0) * std::sqrt(x0)));
    CHECK(f.deriv(1, 0, 0) ==
          doctest::Approx(2 * x0 * y0 + std::exp(z0) * 0.5 / std::sqrt(x0)));
    CHECK(f.deriv(0, 1, 0) == doctest::Approx(x0 * x0));
    CHECK(f.deriv(2, 1, 0) == doctest::Approx(2.0));
    CHECK(f.deriv(0, 0, 3) == doctest::Approx(std::exp(z0) * std::sqrt(x0)));
    CHECK(f.deriv(2, 0, 1) ==
          doctest::Approx(std::exp(z0) * (-0.25) * std::pow(x0, -1.5)));
    // derivative() agrees with coefficient extraction
    Jet fx = f.derivative(0);
    CHECK(fx.value() == doctest::Approx(f.deriv(1, 0, 0)));
    CHECK(fx.deriv(0, 0, 1) == doctest::Approx(f.deriv(1, 0, 1)));
    // reciprocal against closed form
    Jet r = (x * x + y * y + z * z).recip();
    double q = x0 * x0 + y0 * y0 + z0 * z0;
    CHECK(r.value() == doctest::Approx(1.0 / q));
    CHECK(r.deriv(1, 0, 0) == doctest::Approx(-2.0 * x0 / (q * q)));
}

TEST_CASE("curvature jets: euclidean space is flat") {
    CurvatureJet j = curvature_jet(ambient_euclidean(), {0.3, -0.1, 0.8});
    CHECK(j.riemann_norm2() < 1e-24);
    CHECK(std::abs(j.scalar) < 1e-12);
    CHECK(std::abs(j.lap_scalar) < 1e-12);
}

TEST_CASE("curvature jets: unit round 3-sphere fixtures") {
    AmbientMetric s3 = ambient_constant_curvature(1.0);
    for (Vec3 p : {Vec3{0.0, 0.0, 0.0}, Vec3{0.2, -0.1, 0.15}}) {
        CurvatureJet j = curvature_jet(s3, p);
        CHECK(j.symmetry_violation() < 1e-9);
        CHECK(j.scalar == doctest::Approx(6.0).epsilon(1e-10));
        // Ricci = 2 delta in any orthonormal frame
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                CHECK(j.ricci[a][b] == doctest::Approx(a == b ? 2.0 : 0.0).epsilon(1e-9));
        // constant-curvature tensor: R_abcd = delta_bc delta_ad - delta_ac delta_bd,
        // so the tangential block R_{mu r nu r} = -delta_{mu nu} (r = axis 2)
        CHECK(j.riem[0][2][0][2] == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(j.riem[1][2][1][2] == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(std::abs(j.riem[0][2][1][2]) < 1e-9);
        // symmetric space: the covariant derivative of curvature vanishes
        double dmax = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d)
                        for (int e = 0; e < 3; ++e)
                            dmax = std::max(dmax, std::abs(j.driem[a][b][c][d][e]));
        CHECK(dmax < 1e-9);
        CHECK(std::abs(j.lap_scalar) < 1e-8);
    }
}

TEST_CASE("curvature jets: quartic conformal factor, flat at 0 with Lap R = -480") {
    // Oracle: R = exp(-2 phi)(-4 Lap phi - 2 |grad phi|^2) in 3 dimensions;
    // phi = |x|^4 gives R = -80 r^2 + O(r^6), whose flat Laplacian at the
    // origin is -480.
    AmbientMetric cq = ambient_conformal_quartic(1.0);
    CurvatureJet j = curvature_jet(cq, {0.0, 0.0, 0.0});
    CHECK(std::sqrt(j.riemann_norm2()) < 1e-10);
    CHECK(std::abs(j.scalar) < 1e-10);
    CHECK(j.lap_scalar == doctest::Approx(-480.0).epsilon(1e-10));
}

TEST_CASE("curvature jets: the Schwarzschild slice is scalar flat with the known Ricci") {
    double m = 0.1, rho0 = 2.0;
    AmbientMetric sw = ambient_schwarzschild_isotropic(m, rho0);
    CurvatureJet j = curvature_jet(sw, sw.center);
    // The time-symmetric slice is scalar flat (the conformal factor is
    // harmonic), but not Ricci flat: with areal radius r_s = rho (1+m/2rho)^2
    // the orthonormal Ricci eigenvalues are (-2, 1, 1) m / r_s^3, and the
    // squared Riemann norm in three dimensions is 4 |Ric|^2 - R^2.
    double rs = rho0 * std::pow(1.0 + m / (2.0 * rho0), 2);
    double lam = m / std::pow(rs, 3);
    CHECK(std::abs(j.scalar) < 1e-10);
    CHECK(j.ricci[0][0] == doctest::Approx(-2.0 * lam).epsilon(1e-9));
    CHECK(j.ricci[1][1] == doctest::Approx(lam).epsilon(1e-9));
    CHECK(j.ricci[2][2] == doctest::Approx(lam).epsilon(1e-9));
    CHECK(std::abs(j.ricci[0][1]) < 1e-12);
    CHECK(j.riemann_norm2() ==
          doctest::Approx(24.0 * m * m / std::pow(rs, 6)).epsilon(1e-9));
    CHECK(j.symmetry_violation() < 1e-9);
}

TEST_CASE("curvature jets are frame covariant: scalars agree under rotations") {
    AmbientMetric sw = ambient_schwarzschild_isotropic(0.1);
    CurvatureJet j0 = curvature_jet(sw, sw.center);
    // a fixed rotation (axis-angle around (1,1,1)/sqrt(3) by 0.8 rad)
    double c = std::cos(0.8), s = std::sin(0.8), t = 1 - c, n = 1.0 / std::sqrt(3.0);
    Mat3 Q;
    double u[3] = {n, n, n};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) Q[a][b] = t * u[a] * u[b] + (a == b ? c : 0.0);
    Q[0][1] -= s * u[2];
    Q[0][2] += s * u[1];
    Q[1][0] += s * u[2];
    Q[1][2] -= s * u[0];
    Q[2][0] -= s * u[1];
    Q[2][1] += s * u[0];
    CurvatureJet j1 = curvature_jet(sw, sw.center, true, &Q);
    CHECK(j1.scalar == doctest::Approx(j0.scalar).epsilon(1e-9));
    CHECK(j1.riemann_norm2() == doctest::Approx(j0.riemann_norm2()).epsilon(1e-9));
    CHECK(j1.lap_scalar == doctest::Approx(j0.lap_scalar).epsilon(1e-7));
    CHECK(j1.symmetry_violation() < 1e-9);
}

TEST_CASE("expansion with a zero jet is the round family") {
    GridSpec grid(8);
    CurvatureJet zero{};
    zero.has_second = true;
    auto exp = expansion_boundary_data(zero, 0.3, grid);
    CHECK(std::abs(exp.gamma.tt[0] - 0.09) < 1e-15);
    CHECK(std::abs(exp.gamma.tp[0]) < 1e-15);
    CHECK(std::abs(exp.H.samples()[0] + 2.0 / 0.3) < 1e-13);
    CHECK(std::abs(exp.second_ff.tt[0] + 0.3) < 1e-15);
}

TEST_CASE("expansion on the unit 3-sphere matches the closed-form geodesic spheres") {
    GridSpec grid(6);
    AmbientMetric s3 = ambient_constant_curvature(1.0);
    CurvatureJet j = curvature_jet(s3, {0.0, 0.0, 0.0});
    for (double t : {0.2, 0.1}) {
        auto exp = expansion_boundary_data(j, t, grid);
        // t^{-2} gamma series: (1 - t^2/3 + 2 t^4/45) = sin^2(t)/t^2 + O(t^6)
        double series = 1.0 - t * t / 3.0 + 2.0 * std::pow(t, 4) / 45.0;
        double closed = std::pow(std::sin(t) / t, 2);
        CHECK(std::abs(series - closed) < std::pow(t, 6));
        CHECK(exp.gamma.tt[0] / (t * t) == doctest::Approx(series).epsilon(1e-12));
        CHECK(std::abs(exp.gamma.tp[0]) < 1e-12);
        // t H series: -2 + 2t^2/3 + 2t^4/45 = -2 t cot t + O(t^6)
        double hseries = (-2.0 + 2.0 * t * t / 3.0 + 2.0 * std::pow(t, 4) / 45.0) / t;
        double hclosed = -2.0 / std::tan(t);
        CHECK(std::abs(t * (hseries - hclosed)) < std::pow(t, 6));
        CHECK(exp.H.samples()[0] == doctest::Approx(hseries).epsilon(1e-12));
        // A(t) series: -delta (1 - 2t^2/3 + 2t^4/15)/t^{-1}... here t * bracket
        double aseries = -t * (1.0 - 2.0 * t * t / 3.0 + 2.0 * std::pow(t, 4) / 15.0);
        double aclosed = -std::sin(t) * std::cos(t);
        CHECK(std::abs(aseries - aclosed) < 2.0 * std::pow(t, 6));
        CHECK(exp.second_ff.tt[0] == doctest::Approx(aseries).epsilon(1e-12));
        // gamma * gamma_inv = id through fourth order
        double prod = exp.gamma.tt[0] * exp.gamma_inv.tt[0];
        CHECK(std::abs(prod - 1.0) < 2.0 * std::pow(t, 6));
    }
}

TEST_CASE("geodesic oracle: euclidean spheres are exactly round") {
    GridSpec grid(6);
    for (double t : {0.3, 1.7}) {
        OracleSphere orc = geodesic_sphere_oracle(ambient_euclidean(), {0, 0, 0}, t, grid);
        for (int k = 0; k < grid.n_nodes(); ++k) {
            CHECK(std::abs(orc.gamma.tt[k] - t * t) < 1e-9);
            CHECK(std::abs(orc.gamma.tp[k]) < 1e-9);
            CHECK(std::abs(orc.gamma.pp[k] - t * t) < 1e-9);
            CHECK(std::abs(orc.H.samples()[k] + 2.0 / t) < 1e-9);
        }
        CHECK(orc.worst_unit_speed_error < 1e-11);
    }
}

TEST_CASE("geodesic oracle on the unit 3-sphere matches -2 cot t") {
    GridSpec grid(6);
    AmbientMetric s3 = ambient_constant_curvature(1.0);
    double t = 0.2;
    OracleSphere orc = geodesic_sphere_oracle(s3, {0, 0, 0}, t, grid);
    double hexp = -2.0 / std::tan(t);
    double gexp = std::pow(std::sin(t), 2);
    for (int k = 0; k < grid.n_nodes(); k += 7) {
        CHECK(orc.H.samples()[k] == doctest::Approx(hexp).epsilon(1e-6));
        CHECK(orc.gamma.tt[k] == doctest::Approx(gexp).epsilon(1e-8));
        CHECK(orc.gamma.pp[k] == doctest::Approx(gexp).epsilon(1e-8));
    }
}

TEST_CASE("series and oracle agree to fifth order (quick two-point slope)") {
    GridSpec grid(6);
    AmbientMetric sw = ambient_schwarzschild_isotropic(0.1);
    double t1 = 0.2, t2 = 0.1;
    double e1 = 0.0, e2 = 0.0;
    for (double t : {t1, t2}) {
        BartnikData ser = preset_from_metric_sphere(sw, t, grid, SphereDataMode::series);
        BartnikData orc = preset_from_metric_sphere(sw, t, grid, SphereDataMode::oracle);
        double err = sup_tensor_diff(ser.gamma, orc.gamma);
        err = std::max(err, sup_scalar_diff(ser.H, orc.H));
        (t == t1 ? e1 : e2) = err;
    }
    double slope = loglog_slope2(t2, e2, t1, e1);
    CHECK(slope >= 4.7);
    CHECK(slope <= 6.5);
}

TEST_CASE("rescaled sphere data: euclidean gives round, s3 gives -2 r cot r") {
    GridSpec grid(6);
    BartnikData flat = preset_from_metric_sphere(ambient_euclidean(), 0.37, grid);
    CHECK(flat.deviation_metric().max_abs() < 1e-13);
    CHECK(std::abs(flat.H.samples()[0] + 2.0) < 1e-13);

    double r = 0.1;
    BartnikData s3 = preset_from_metric_sphere(ambient_constant_curvature(1.0), r, grid);
    // closed form: r H(r) = -2 r cot r
    double expected = -2.0 * r / std::tan(r);
    CHECK(expected == doctest::Approx(-1.993329).epsilon(2e-6));
    CHECK(s3.H.samples()[0] == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("small sphere mass: euclidean zero, s3 r^3/2, quartic conformal -4 r^5") {
    GridSpec grid(6);
    CHECK(std::abs(small_sphere_mass(ambient_euclidean(), {0, 0, 0}, 0.2, grid)) < 1e-13);

    AmbientMetric s3 = ambient_constant_curvature(1.0);
    for (double r : {0.2, 0.1}) {
        double m = small_sphere_mass(s3, {0, 0, 0}, r, grid);
        CHECK(m / (r * r * r) == doctest::Approx(0.5).epsilon(1e-10));
    }
    AmbientMetric cq = ambient_conformal_quartic(1.0);
    for (double r : {0.2, 0.1}) {
        double m = small_sphere_mass(cq, {0, 0, 0}, r, grid);
        CHECK(m / std::pow(r, 5) == doctest::Approx(-4.0).epsilon(1e-8));
    }
    // oracle route on the 3-sphere, one radius
    double mo = small_sphere_mass(s3, {0, 0, 0}, 0.1, grid, SphereDataMode::oracle);
    CHECK(mo / 1e-3 == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("limit_fit: exact cubic, 3-sphere sweep, quartic sweep") {
    std::vector<std::pair<double, double>> cubic{{0.2, 7.0 * 0.008}, {0.1, 7.0 * 0.001},
                                                 {0.05, 7.0 * 0.000125}};
    LimitFit f = limit_fit(cubic, 3);
    CHECK(f.coefficient == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(f.error_estimate < 1e-12);

    GridSpec grid(6);
    AmbientMetric s3 = ambient_constant_curvature(1.0);
    std::vector<std::pair<double, double>> sweep;
    for (double r : {0.2, 0.1, 0.05})
        sweep.push_back({r, small_sphere_mass(s3, {0, 0, 0}, r, grid)});
    LimitFit fs = limit_fit(sweep, 3);
    CHECK(std::abs(fs.coefficient - 0.5) / 0.5 < 0.01);

    AmbientMetric cq = ambient_conformal_quartic(1.0);
    std::vector<std::pair<double, double>> sweep5;
    for (double r : {0.2, 0.1, 0.05})
        sweep5.push_back({r, small_sphere_mass(cq, {0, 0, 0}, r, grid)});
    LimitFit f5 = limit_fit(sweep5, 5);
    CHECK(std::abs(f5.coefficient + 4.0) / 4.0 < 0.05);

    CHECK_THROWS_AS(limit_fit({{0.1, 1.0}, {0.2, 2.0}, {0.05, 0.5}}, 3), InputError);
    CHECK_THROWS_AS(limit_fit(cubic, 4), InputError);
}

TEST_CASE("finite-difference metric adapter: order-4 jets work, order-6 are refused") {
    AmbientMetric analytic = ambient_constant_curvature(1.0);
    AmbientMetric fd = fd_jet_metric(
        [&](const Vec3& p) { return analytic.value(p); }, "fd-s3");
    CHECK_THROWS_AS(curvature_jet(fd, {0.1, 0.0, 0.0}, true), InputError);
    CurvatureJet j = curvature_jet(fd, {0.1, 0.0, 0.0}, false);
    CHECK(j.scalar == doctest::Approx(6.0).epsilon(1e-5));
    CHECK(j.ricci[0][0] == doctest::Approx(2.0).epsilon(1e-5));
}
