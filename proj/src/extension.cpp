#include "qlm/extension.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qlm/errors.hpp"

namespace qlm {

namespace {
constexpr double kPi = std::numbers::pi;
}

ModeSolution solve_modes(const ShCoeffs& h, const ShCoeffs& k) {
    if (h.band_limit != k.band_limit)
        throw InputError("solve_modes: h and k band limits differ");
    const int L = h.band_limit;
    ModeSolution out{ShCoeffs(L, h.real_field), ShCoeffs(L, h.real_field)};
    for (int l = 0; l <= L; ++l) {
        double lv = l;
        for (int m = -l; m <= l; ++m) {
            const cplx hh = h.at(l, m), kk = k.at(l, m);
            out.v.at(l, m) = (lv - 1.0) / (lv + 1.0) * hh + 2.0 / ((lv + 1.0) * (lv + 2.0)) * kk;
            out.xi.at(l, m) = hh / (lv + 1.0) - kk / ((lv + 1.0) * (lv + 2.0));
        }
    }
    return out;
}

double mode_backsubstitution_residual(const ModeSolution& modes, const ShCoeffs& h,
                                      const ShCoeffs& k) {
    double worst = 0.0;
    for (int l = 0; l <= h.band_limit; ++l) {
        double lv = l;
        for (int m = -l; m <= l; ++m) {
            cplx v = modes.v.at(l, m), xi = modes.xi.at(l, m);
            double scale = std::abs(h.at(l, m)) + std::abs(k.at(l, m));
            if (scale == 0.0) scale = 1.0;
            double r1 = std::abs(v + 2.0 * xi - h.at(l, m));
            double r2 = std::abs((lv + 2.0) * v - (lv - 1.0) * (lv + 2.0) * xi - k.at(l, m));
            worst = std::max(worst, std::max(r1, r2) / scale);
        }
    }
    return worst;
}

namespace {

// Smoothstep pieces for the bump: f(s) = exp(-1/s) for s > 0 else 0.
struct F {
    double v = 0.0, d1 = 0.0, d2 = 0.0;
};
F fexp(double s) {
    F out;
    if (s <= 0.0) return out;
    double e = std::exp(-1.0 / s);
    out.v = e;
    out.d1 = e / (s * s);
    out.d2 = e * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
    return out;
}

}  // namespace

double BumpProfile::value(double r) const {
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    double s = outer - r;
    F q = fexp(s), p = fexp(1.0 - s);
    return q.v / (q.v + p.v);
}

double BumpProfile::d1(double r) const {
    if (r <= inner || r >= outer) return 0.0;
    double s = outer - r;
    F q = fexp(s), p = fexp(1.0 - s);
    double den = q.v + p.v;
    // d/ds B(s), with p'(s) = -f'(1-s); chain rule in r brings a minus sign.
    double dB = (q.d1 * p.v + q.v * p.d1) / (den * den);
    return -dB;
}

double BumpProfile::d2(double r) const {
    if (r <= inner || r >= outer) return 0.0;
    double s = outer - r;
    F q = fexp(s), p = fexp(1.0 - s);
    double den = q.v + p.v;
    double num = q.d1 * p.v + q.v * p.d1;                  // (q'p - q p'), p' = -f'(1-s)
    double dnum = q.d2 * p.v - q.v * p.d2;                 // q''p - q p''
    double dden = q.d1 - p.d1;                             // q' + p'
    return (dnum * den - 2.0 * num * dden) / (den * den * den);
}

LinearizedExtension::LinearizedExtension(ModeSolution modes, TangentField xi_top,
                                         const GridSpec& grid)
    : modes_(std::move(modes)), xi_top_(std::move(xi_top)), grid_(&grid) {
    const int L = grid.band_limit();
    if (modes_.v.band_limit != L || modes_.xi.band_limit != L)
        throw InputError("LinearizedExtension: mode band limit must match the grid");
    zero_ = modes_.v.max_abs() == 0.0 && modes_.xi.max_abs() == 0.0 && xi_top_.is_zero();

    // Sample the radially constant deformation direction
    //   G_a = xi_perp xhat_a + (xi_top)_a
    // on a padded grid and analyze each Cartesian component.  The components
    // are band-limited at L+1, so analysis on the L+2 grid is exact.
    GridSpec padded(L + 2);
    std::vector<double> xp = synthesize(padded, modes_.xi);
    std::vector<double> wt, wp;
    tangent_frame_components(padded, xi_top_, wt, wp);
    std::array<std::vector<double>, 3> g;
    for (auto& v : g) v.resize(padded.n_nodes());
    for (int i = 0; i < padded.n_theta(); ++i) {
        double ct = padded.cos_theta(i), st = padded.sin_theta(i);
        for (int j = 0; j < padded.n_phi(); ++j) {
            double cp = std::cos(padded.phi(j)), sp = std::sin(padded.phi(j));
            int n = padded.node_index(i, j);
            const double xh[3] = {st * cp, st * sp, ct};
            const double et[3] = {ct * cp, ct * sp, -st};
            const double ep[3] = {-sp, cp, 0.0};
            for (int a = 0; a < 3; ++a)
                g[a][n] = xp[n] * xh[a] + wt[n] * et[a] + wp[n] * ep[a];
        }
    }
    for (int a = 0; a < 3; ++a) gvec_[a] = AngularFieldEval(analyze(padded, g[a]));
    vfield_ = ExteriorFieldEval(modes_.v);
    eval_lmax_ = L + 4;
}

bool LinearizedExtension::is_zero(double tol) const {
    return modes_.v.max_abs() <= tol && modes_.xi.max_abs() <= tol && xi_top_.is_zero(tol);
}

FieldSample LinearizedExtension::eval(const Vec3& x) const {
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r < 1.0 - 1e-12) throw InputError("eval: point inside the unit sphere");
    FieldSample s{};

    PointHarmonics ph(eval_lmax_, x);
    double v = vfield_.value(ph);
    Vec3 dv = vfield_.gradient(ph);
    Mat3 d2v = vfield_.hessian(ph);

    s.u = -0.5 * v;
    for (int a = 0; a < 3; ++a) {
        s.du[a] = -0.5 * dv[a];
        for (int b = 0; b < 3; ++b) s.d2u[a][b] = -0.5 * d2v[a][b];
    }

    double psi = bump_.value(r);
    Mat3 dxi{};   // dxi[e][a] = d_e xi_a
    Ten3 ddxi{};  // ddxi[f][e][a] = d_f d_e xi_a
    if (psi != 0.0 || r < BumpProfile::outer) {
        double psi1 = bump_.d1(r), psi2 = bump_.d2(r);
        Vec3 xh{x[0] / r, x[1] / r, x[2] / r};
        for (int a = 0; a < 3; ++a) {
            double G = gvec_[a].value(ph);
            Vec3 dG = gvec_[a].gradient(ph);
            Mat3 d2G = gvec_[a].hessian(ph);
            for (int e = 0; e < 3; ++e) {
                dxi[e][a] = psi1 * xh[e] * G + psi * dG[e];
                for (int f = 0; f < 3; ++f) {
                    double dd = psi2 * xh[f] * xh[e] * G +
                                psi1 * ((f == e ? 1.0 : 0.0) - xh[f] * xh[e]) / r * G +
                                psi1 * xh[e] * dG[f] + psi1 * xh[f] * dG[e] + psi * d2G[f][e];
                    ddxi[f][e][a] = dd;
                }
            }
        }
    }

    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            s.eta[a][b] = dxi[a][b] + dxi[b][a] + (a == b ? v : 0.0);
            for (int c = 0; c < 3; ++c)
                s.deta[c][a][b] = ddxi[c][a][b] + ddxi[c][b][a] + (a == b ? dv[c] : 0.0);
        }
    return s;
}

LinearizedExtension build_extension(const BartnikData& data, double epsilon_threshold) {
    if (epsilon_threshold > 0.0) {
        double eps = data_epsilon(data);
        if (eps > epsilon_threshold) {
            std::ostringstream os;
            os << "build_extension: data deviation epsilon = " << eps
               << " exceeds the threshold " << epsilon_threshold;
            throw RegimeError(os.str());
        }
    }
    TensorDecomposition dec = decompose_sym_tensor(data.deviation_metric());
    ShCoeffs k = data.deviation_H().coeffs();
    ModeSolution modes = solve_modes(dec.h.coeffs(), k);
    return LinearizedExtension(std::move(modes), std::move(dec.W), data.grid());
}

double adm_mass_closed_form(const LinearizedExtension& ext) {
    // u = -v/2 on the boundary sphere
    std::vector<double> v = synthesize(ext.grid(), ext.modes().v);
    for (auto& w : v) w *= -0.5;
    return -integrate_sphere(ext.grid(), v) / (4.0 * kPi);
}

namespace {

FluxResult flux_quadrature(const GridSpec& grid, double radius,
                           const std::function<void(const Vec3&, Mat3&, Ten3&)>& field) {
    FluxResult out;
    out.radius = radius;
    out.asymptotic = radius >= BumpProfile::outer;
    double total = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i) {
        double ct = grid.cos_theta(i), st = grid.sin_theta(i);
        double row = 0.0;
        for (int j = 0; j < grid.n_phi(); ++j) {
            double cp = std::cos(grid.phi(j)), sp = std::sin(grid.phi(j));
            Vec3 xh{st * cp, st * sp, ct};
            Vec3 x{radius * xh[0], radius * xh[1], radius * xh[2]};
            Mat3 eta;
            Ten3 deta;
            field(x, eta, deta);
            double integrand = 0.0;
            for (int a = 0; a < 3; ++a) {
                double div = 0.0, dtr = 0.0;
                for (int k = 0; k < 3; ++k) {
                    div += deta[k][a][k];
                    dtr += deta[a][k][k];
                }
                integrand += (div - dtr) * xh[a];
            }
            row += integrand;
        }
        total += grid.weight(i) * row;
    }
    out.value = total * grid.d_phi() * radius * radius / (16.0 * kPi);
    return out;
}

}  // namespace

FluxResult adm_mass_flux(const LinearizedExtension& ext, double radius) {
    if (radius < 1.0) throw InputError("adm_mass_flux: radius must be >= 1");
    return flux_quadrature(ext.grid(), radius, [&](const Vec3& x, Mat3& eta, Ten3& deta) {
        FieldSample s = ext.eval(x);
        eta = s.eta;
        deta = s.deta;
    });
}

FluxResult adm_mass_flux(const MetricPerturbationFn& field, double radius,
                         const GridSpec& grid) {
    return flux_quadrature(grid, radius, field);
}

BoundaryDeformation bdot_vector(const SphereScalarField& xi_perp, const TangentField& W) {
    const GridSpec& grid = xi_perp.grid();
    SphereSymTensorField metric = lie_derivative_round(grid, W);
    for (int k = 0; k < grid.n_nodes(); ++k) {
        metric.tt[k] += 2.0 * xi_perp.samples()[k];
        metric.pp[k] += 2.0 * xi_perp.samples()[k];
    }
    ShCoeffs hc = xi_perp.coeffs();
    for (int l = 0; l <= hc.band_limit; ++l)
        for (int m = -l; m <= l; ++m) hc.at(l, m) *= 2.0 - double(l) * (l + 1);
    return BoundaryDeformation{std::move(metric), SphereScalarField(grid, hc)};
}

BoundaryDeformation bdot_conformal(const GridSpec& grid, const ShCoeffs& v_modes) {
    SphereSymTensorField metric = trace_tensor(SphereScalarField(grid, v_modes));
    ShCoeffs hc = v_modes;
    for (int l = 0; l <= hc.band_limit; ++l)
        for (int m = -l; m <= l; ++m) hc.at(l, m) *= l + 2.0;
    return BoundaryDeformation{std::move(metric), SphereScalarField(grid, hc)};
}

namespace {

struct MetricPoint {
    Mat3 g, ginv;
    Ten3 dg;  // dg[c][a][b] = d_c g_ab
};

Mat3 invert3(const Mat3& m) {
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (!(std::abs(det) > 1e-300)) throw SolverError("invert3: singular metric");
    double id = 1.0 / det;
    Mat3 r;
    r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * id;
    r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * id;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * id;
    r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * id;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * id;
    r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * id;
    r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * id;
    r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * id;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * id;
    return r;
}

MetricPoint metric_at(const LinearizedExtension& ext, const Vec3& x) {
    FieldSample s = ext.eval(x);
    MetricPoint mp;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            mp.g[a][b] = (a == b ? 1.0 : 0.0) + s.eta[a][b];
            for (int c = 0; c < 3; ++c) mp.dg[c][a][b] = s.deta[c][a][b];
        }
    mp.ginv = invert3(mp.g);
    return mp;
}

// Christoffel symbols Gamma^c_{ab} from exact g and analytic dg.
void christoffel(const MetricPoint& mp, double gamma[3][3][3]) {
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                double s = 0.0;
                for (int d = 0; d < 3; ++d)
                    s += mp.ginv[c][d] *
                         (mp.dg[a][d][b] + mp.dg[b][d][a] - mp.dg[d][a][b]);
                gamma[c][a][b] = gamma[c][b][a] = 0.5 * s;
            }
}

// 4th-order central derivative of the Christoffels along axis d, step h.
void dchristoffel_axis(const LinearizedExtension& ext, const Vec3& x, int d, double h,
                       double out[3][3][3]) {
    static const double coef[4] = {-1.0, 8.0, -8.0, 1.0};
    static const double off[4] = {2.0, 1.0, -1.0, -2.0};
    double acc[3][3][3] = {};
    for (int s = 0; s < 4; ++s) {
        Vec3 y = x;
        y[d] += off[s] * h;
        double gam[3][3][3];
        christoffel(metric_at(ext, y), gam);
        for (int c = 0; c < 3; ++c)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) acc[c][a][b] += coef[s] * gam[c][a][b];
    }
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) out[c][a][b] = acc[c][a][b] / (12.0 * h);
}

}  // namespace

StaticResidualStats static_residual(const LinearizedExtension& ext,
                                    const std::vector<Vec3>& points, double fd_step) {
    StaticResidualStats stats;
    if (fd_step < 1e-6) stats.fd_step_warning = true;
    double sum1 = 0.0, sum2 = 0.0;
    int n1 = 0, n2 = 0;
    for (const Vec3& x : points) {
        MetricPoint mp = metric_at(ext, x);
        double gam[3][3][3];
        christoffel(mp, gam);

        // dGamma[d][c][a][b] = d_d Gamma^c_{ab}, Richardson over steps h, h/2.
        double dgam[3][3][3][3];
        for (int d = 0; d < 3; ++d) {
            double g1[3][3][3], g2[3][3][3];
            dchristoffel_axis(ext, x, d, fd_step, g1);
            dchristoffel_axis(ext, x, d, 0.5 * fd_step, g2);
            for (int c = 0; c < 3; ++c)
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        dgam[d][c][a][b] = (16.0 * g2[c][a][b] - g1[c][a][b]) / 15.0;
        }

        // Ric_bc = d_a Gamma^a_bc - d_b Gamma^a_ac + Gamma^a_ae Gamma^e_bc
        //          - Gamma^a_be Gamma^e_ac
        Mat3 ric{};
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double v = 0.0;
                for (int a = 0; a < 3; ++a) {
                    v += dgam[a][a][b][c] - dgam[b][a][a][c];
                    for (int e = 0; e < 3; ++e)
                        v += gam[a][a][e] * gam[e][b][c] - gam[a][b][e] * gam[e][a][c];
                }
                ric[b][c] = v;
            }

        FieldSample s = ext.eval(x);
        double phi = 1.0 + s.u;
        Mat3 hess{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double v = s.d2u[a][b];
                for (int c = 0; c < 3; ++c) v -= gam[c][a][b] * s.du[c];
                hess[a][b] = v;
            }
        double lap = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) lap += mp.ginv[a][b] * hess[a][b];

        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double res = hess[a][b] - phi * ric[a][b];
                stats.sup_hessian_block = std::max(stats.sup_hessian_block, std::abs(res));
                sum1 += res * res;
                ++n1;
            }
        stats.sup_laplace_block = std::max(stats.sup_laplace_block, std::abs(lap));
        sum2 += lap * lap;
        ++n2;
    }
    if (n1) stats.rms_hessian_block = std::sqrt(sum1 / n1);
    if (n2) stats.rms_laplace_block = std::sqrt(sum2 / n2);
    return stats;
}

std::vector<Vec3> residual_sample_points(double r_min, double r_max, int n_radii) {
    // Coarse deterministic direction set plus a log ladder of radii crossing
    // the bump region.
    GridSpec dirs(4);
    std::vector<Vec3> pts;
    for (int k = 0; k < n_radii; ++k) {
        double t = n_radii == 1 ? 0.0 : double(k) / (n_radii - 1);
        double r = r_min * std::pow(r_max / r_min, t);
        for (int i = 0; i < dirs.n_theta(); i += 2) {
            double ct = dirs.cos_theta(i), st = dirs.sin_theta(i);
            for (int j = 0; j < dirs.n_phi(); j += 3) {
                double cp = std::cos(dirs.phi(j)), sp = std::sin(dirs.phi(j));
                pts.push_back({r * st * cp, r * st * sp, r * ct});
            }
        }
    }
    return pts;
}

BoundaryResidual boundary_residual(const LinearizedExtension& ext, const BartnikData& data) {
    const GridSpec& grid = data.grid();
    BoundaryResidual out;
    for (int i = 0; i < grid.n_theta(); ++i) {
        double ct = grid.cos_theta(i), st = grid.sin_theta(i);
        for (int j = 0; j < grid.n_phi(); ++j) {
            double cp = std::cos(grid.phi(j)), sp = std::sin(grid.phi(j));
            Vec3 xh{st * cp, st * sp, ct};
            Vec3 et{ct * cp, ct * sp, -st};
            Vec3 ep{-sp, cp, 0.0};
            MetricPoint mp = metric_at(ext, xh);

            auto pull = [&](const Vec3& u, const Vec3& v) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) s += mp.g[a][b] * u[a] * v[b];
                return s;
            };
            int n = grid.node_index(i, j);
            out.metric_sup = std::max(out.metric_sup,
                                      std::abs(pull(et, et) - data.gamma.tt[n]));
            out.metric_sup = std::max(out.metric_sup,
                                      std::abs(pull(et, ep) - data.gamma.tp[n]));
            out.metric_sup = std::max(out.metric_sup,
                                      std::abs(pull(ep, ep) - data.gamma.pp[n]));

            // H = div_g(nu), nu the g-normalized g-dual of -dr, pointing to
            // the origin.  With w^a = g^{ab} xhat_b and Q = g^{ab} xhat_a xhat_b:
            //   nu = -w / sqrt(Q),
            //   div_g nu = d_a nu^a + (1/2) nu^a g^{bc} d_a g_bc.
            Vec3 w{};
            double Q = 0.0;
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) w[a] += mp.ginv[a][b] * xh[b];
                Q += w[a] * xh[a];
            }
            // dginv[c][a][b] = d_c g^{ab} = -(ginv dg ginv)^{ab}
            Ten3 dginv{};
            for (int c = 0; c < 3; ++c)
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) {
                        double s = 0.0;
                        for (int p = 0; p < 3; ++p)
                            for (int q = 0; q < 3; ++q)
                                s += mp.ginv[a][p] * mp.dg[c][p][q] * mp.ginv[q][b];
                        dginv[c][a][b] = -s;
                    }
            // d_c xhat_b on the unit sphere: delta_cb - xhat_c xhat_b   (r = 1)
            double divw = 0.0, dQ[3] = {0.0, 0.0, 0.0};
            for (int c = 0; c < 3; ++c) {
                for (int b = 0; b < 3; ++b) {
                    double dxh = (c == b ? 1.0 : 0.0) - xh[c] * xh[b];
                    divw += dginv[c][c][b] * xh[b] + mp.ginv[c][b] * dxh;
                }
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) {
                        double dxa = (c == a ? 1.0 : 0.0) - xh[c] * xh[a];
                        double dxb = (c == b ? 1.0 : 0.0) - xh[c] * xh[b];
                        dQ[c] += dginv[c][a][b] * xh[a] * xh[b] +
                                 mp.ginv[a][b] * (dxa * xh[b] + xh[a] * dxb);
                    }
            }
            double sq = std::sqrt(Q);
            double div_nu = -(divw / sq);
            for (int a = 0; a < 3; ++a) div_nu += 0.5 * w[a] * dQ[a] / (sq * Q);
            double logdet = 0.0;  // nu^a g^{bc} d_a g_bc / 2
            for (int a = 0; a < 3; ++a) {
                double tr = 0.0;
                for (int b = 0; b < 3; ++b)
                    for (int c = 0; c < 3; ++c) tr += mp.ginv[b][c] * mp.dg[a][b][c];
                logdet += 0.5 * (-w[a] / sq) * tr;
            }
            double H = div_nu + logdet;
            out.H_sup = std::max(out.H_sup, std::abs(H - data.H.samples()[n]));
        }
    }
    return out;
}

namespace {

// Eigenvalues of a symmetric 3x3 matrix (trigonometric closed form).
std::array<double, 3> sym3_eigenvalues(const Mat3& m) {
    double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    if (p1 < 1e-300) return {m[0][0], m[1][1], m[2][2]};
    double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
    double p = std::sqrt(p2 / 6.0);
    Mat3 b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
    double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                  b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                  b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    double r = std::clamp(detb / 2.0, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double e1 = q + 2.0 * p * std::cos(phi);
    double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    double e2 = 3.0 * q - e1 - e3;
    return {e1, e2, e3};
}

}  // namespace

ConvexityReport convexity_check(const LinearizedExtension& ext, double r_max) {
    ConvexityReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    for (const Vec3& x : residual_sample_points(1.0, r_max, 9)) {
        MetricPoint mp = metric_at(ext, x);
        double gam[3][3][3];
        christoffel(mp, gam);
        // Hessian of r^2 under g: 2 delta_ab - Gamma^c_{ab} d_c(r^2),
        // d_c r^2 = 2 x_c.
        Mat3 hess;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double v = (a == b) ? 2.0 : 0.0;
                for (int c = 0; c < 3; ++c) v -= 2.0 * x[c] * gam[c][a][b];
                hess[a][b] = v;
            }
        for (double ev : sym3_eigenvalues(hess)) {
            if (ev < rep.margin) {
                rep.margin = ev;
                rep.worst_point = x;
            }
        }
    }
    rep.positive_definite = rep.margin > 0.0;
    return rep;
}

}  // namespace qlm
