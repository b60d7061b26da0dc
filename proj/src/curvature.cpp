#include "qlm/curvature.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "qlm/errors.hpp"

namespace qlm {

double CurvatureJet::symmetry_violation() const {
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    worst = std::max(worst, std::abs(riem[a][b][c][d] + riem[b][a][c][d]));
                    worst = std::max(worst, std::abs(riem[a][b][c][d] + riem[a][b][d][c]));
                    worst = std::max(worst, std::abs(riem[a][b][c][d] - riem[c][d][a][b]));
                    worst = std::max(worst,
                                     std::abs(riem[a][b][c][d] + riem[b][c][a][d] +
                                              riem[c][a][b][d]));
                }
    return worst;
}

double CurvatureJet::riemann_norm2() const {
    double s = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) s += riem[a][b][c][d] * riem[a][b][c][d];
    return s;
}

namespace {

using JetTen3 = std::array<JetMat3, 3>;

JetMat3 jet_inverse(const JetMat3& g) {
    Jet det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
              g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
              g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    Jet idet = det.recip();
    JetMat3 inv;
    inv[0][0] = (g[1][1] * g[2][2] - g[1][2] * g[2][1]) * idet;
    inv[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) * idet;
    inv[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) * idet;
    inv[1][0] = (g[1][2] * g[2][0] - g[1][0] * g[2][2]) * idet;
    inv[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) * idet;
    inv[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) * idet;
    inv[2][0] = (g[1][0] * g[2][1] - g[1][1] * g[2][0]) * idet;
    inv[2][1] = (g[0][1] * g[2][0] - g[0][0] * g[2][1]) * idet;
    inv[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) * idet;
    return inv;
}

// Christoffel symbols Gamma^i_{jk} as jets (order drops by one).
std::array<JetMat3, 3> jet_christoffel(const JetMat3& g, const JetMat3& ginv) {
    JetTen3 dg;  // dg[c][a][b] = d_c g_ab
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) dg[c][a][b] = g[a][b].derivative(c);
    std::array<JetMat3, 3> gam;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = j; k < 3; ++k) {
                Jet s(dg[0][0][0].order());
                for (int l = 0; l < 3; ++l)
                    s += ginv[i][l] * (dg[j][l][k] + dg[k][l][j] - dg[l][j][k]);
                gam[i][j][k] = 0.5 * s;
                gam[i][k][j] = gam[i][j][k];
            }
    return gam;
}

// Lowered Riemann tensor R_{abcd} = g_{de} (d_a Gam^e_bc - d_b Gam^e_ac
//   + Gam^e_af Gam^f_bc - Gam^e_bf Gam^f_ac); curvature convention matching
// the unit-sphere fixtures (tangential block negative, Ricci = slots 1&4).
std::array<std::array<JetMat3, 3>, 3> jet_riemann(const JetMat3& g,
                                                  const std::array<JetMat3, 3>& gam) {
    std::array<std::array<JetMat3, 3>, 3> riem;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                std::array<Jet, 3> up;
                for (int e = 0; e < 3; ++e) {
                    Jet v = gam[e][b][c].derivative(a) - gam[e][a][c].derivative(b);
                    for (int f = 0; f < 3; ++f)
                        v += gam[e][a][f] * gam[f][b][c] - gam[e][b][f] * gam[f][a][c];
                    up[e] = v;
                }
                for (int d = 0; d < 3; ++d) {
                    Jet v(up[0].order());
                    for (int e = 0; e < 3; ++e) v += g[d][e] * up[e];
                    riem[a][b][c][d] = v;
                }
            }
    return riem;
}

Mat3 cholesky_frame(const Mat3& g) {
    // g = L L^T; orthonormal frame vectors are the columns of L^{-T}
    double l00 = std::sqrt(g[0][0]);
    double l10 = g[1][0] / l00;
    double l20 = g[2][0] / l00;
    double l11 = std::sqrt(g[1][1] - l10 * l10);
    double l21 = (g[2][1] - l20 * l10) / l11;
    double l22 = std::sqrt(g[2][2] - l20 * l20 - l21 * l21);
    // invert the lower-triangular L, then transpose
    double i00 = 1.0 / l00, i11 = 1.0 / l11, i22 = 1.0 / l22;
    double i10 = -l10 * i00 * i11;
    double i21 = -l21 * i11 * i22;
    double i20 = (l10 * l21 - l11 * l20) * i00 * i11 * i22;
    // E[a][A]: Cartesian component a of frame vector A; E = L^{-T}
    Mat3 E{};
    E[0][0] = i00;
    E[0][1] = i10;
    E[0][2] = i20;
    E[1][1] = i11;
    E[1][2] = i21;
    E[2][2] = i22;
    return E;
}

}  // namespace

CurvatureJet curvature_jet(const AmbientMetric& metric, const Vec3& p, bool include_second,
                           const Mat3* rotation) {
    const int needed = include_second ? 6 : 4;
    if (metric.max_jet_order < needed) {
        std::ostringstream os;
        os << "curvature_jet: metric '" << metric.name << "' supplies jets to order "
           << metric.max_jet_order << " but order " << needed << " data is required"
           << (include_second ? " for second covariant derivatives" : "");
        throw InputError(os.str());
    }
    if (metric.validity_radius && metric.validity_radius(p) <= 0.0)
        throw InputError("curvature_jet: point outside the metric's validity ball");

    JetMat3 g = metric.eval(p, needed);
    JetMat3 ginv = jet_inverse(g);
    auto gam = jet_christoffel(g, ginv);
    auto riem = jet_riemann(g, gam);

    // First covariant derivative as jet fields: U_{abcde} = d_e R_{abcd} - 4
    // Christoffel contractions.
    int o1 = riem[0][0][0][0].order() - 1;
    auto contract4 = [&](int a, int b, int c, int d, int e) {
        Jet v = riem[a][b][c][d].derivative(e);
        for (int f = 0; f < 3; ++f) {
            v -= gam[f][a][e] * riem[f][b][c][d];
            v -= gam[f][b][e] * riem[a][f][c][d];
            v -= gam[f][c][e] * riem[a][b][f][d];
            v -= gam[f][d][e] * riem[a][b][c][f];
        }
        return v;
    };
    (void)o1;

    CurvatureJet out;
    out.has_second = include_second;

    // Frame from the Cholesky factor of g(p), optionally rotated.
    Mat3 E = cholesky_frame(metric.value(p));
    if (rotation) {
        Mat3 ER{};
        for (int a = 0; a < 3; ++a)
            for (int A = 0; A < 3; ++A) {
                double s = 0.0;
                for (int B = 0; B < 3; ++B) s += E[a][B] * (*rotation)[B][A];
                ER[a][A] = s;
            }
        E = ER;
    }

    // Values in coordinates.
    double riem_c[3][3][3][3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) riem_c[a][b][c][d] = riem[a][b][c][d].value();

    std::array<std::array<std::array<std::array<std::array<Jet, 3>, 3>, 3>, 3>, 3> nabla;
    double driem_c[3][3][3][3][3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                    for (int e = 0; e < 3; ++e) {
                        nabla[a][b][c][d][e] = contract4(a, b, c, d, e);
                        driem_c[a][b][c][d][e] = nabla[a][b][c][d][e].value();
                    }

    double ddriem_c[3][3][3][3][3][3] = {};
    if (include_second) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d)
                        for (int e = 0; e < 3; ++e)
                            for (int f = 0; f < 3; ++f) {
                                Jet v = nabla[a][b][c][d][e].derivative(f);
                                for (int h = 0; h < 3; ++h) {
                                    v -= gam[h][a][f] * nabla[h][b][c][d][e];
                                    v -= gam[h][b][f] * nabla[a][h][c][d][e];
                                    v -= gam[h][c][f] * nabla[a][b][h][d][e];
                                    v -= gam[h][d][f] * nabla[a][b][c][h][e];
                                    v -= gam[h][e][f] * nabla[a][b][c][d][h];
                                }
                                ddriem_c[a][b][c][d][e][f] = v.value();
                            }
    }

    // Transform every (covariant) index with the frame.
    for (int A = 0; A < 3; ++A)
        for (int B = 0; B < 3; ++B)
            for (int C = 0; C < 3; ++C)
                for (int D = 0; D < 3; ++D) {
                    double s = 0.0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            for (int c = 0; c < 3; ++c)
                                for (int d = 0; d < 3; ++d)
                                    s += riem_c[a][b][c][d] * E[a][A] * E[b][B] * E[c][C] *
                                         E[d][D];
                    out.riem[A][B][C][D] = s;
                }
    for (int A = 0; A < 3; ++A)
        for (int B = 0; B < 3; ++B)
            for (int C = 0; C < 3; ++C)
                for (int D = 0; D < 3; ++D)
                    for (int Ee = 0; Ee < 3; ++Ee) {
                        double s = 0.0;
                        for (int a = 0; a < 3; ++a)
                            for (int b = 0; b < 3; ++b)
                                for (int c = 0; c < 3; ++c)
                                    for (int d = 0; d < 3; ++d)
                                        for (int e = 0; e < 3; ++e)
                                            s += driem_c[a][b][c][d][e] * E[a][A] * E[b][B] *
                                                 E[c][C] * E[d][D] * E[e][Ee];
                        out.driem[A][B][C][D][Ee] = s;
                    }
    if (include_second) {
        for (int A = 0; A < 3; ++A)
            for (int B = 0; B < 3; ++B)
                for (int C = 0; C < 3; ++C)
                    for (int D = 0; D < 3; ++D)
                        for (int Ee = 0; Ee < 3; ++Ee)
                            for (int F = 0; F < 3; ++F) {
                                double s = 0.0;
                                for (int a = 0; a < 3; ++a)
                                    for (int b = 0; b < 3; ++b)
                                        for (int c = 0; c < 3; ++c)
                                            for (int d = 0; d < 3; ++d)
                                                for (int e = 0; e < 3; ++e)
                                                    for (int f = 0; f < 3; ++f)
                                                        s += ddriem_c[a][b][c][d][e][f] *
                                                             E[a][A] * E[b][B] * E[c][C] *
                                                             E[d][D] * E[e][Ee] * E[f][F];
                                out.ddriem[A][B][C][D][Ee][F] = s;
                            }
    }

    // Ricci: contraction of the first and last slots (positive on spheres).
    for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int a = 0; a < 3; ++a) s += out.riem[a][b][c][a];
            out.ricci[b][c] = s;
        }
    out.scalar = out.ricci[0][0] + out.ricci[1][1] + out.ricci[2][2];

    // Laplacian of the scalar curvature from the jet fields:
    //   R(x) = g^{bc} Ric_bc with Ric_bc = sum_a coeff-form contraction,
    //   Lap R = g^{ef} (d_e d_f R - Gam^c_ef d_c R).
    {
        JetMat3 ric_field;
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                Jet v(riem[0][0][0][0].order());
                for (int a = 0; a < 3; ++a)
                    for (int d = 0; d < 3; ++d) v += ginv[a][d] * riem[a][b][c][d];
                ric_field[b][c] = v;
            }
        Jet R(ric_field[0][0].order());
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) R += ginv[b][c] * ric_field[b][c];
        Jet lap(R.order() - 2);
        for (int e = 0; e < 3; ++e)
            for (int f = 0; f < 3; ++f) {
                Jet hess = R.derivative(e).derivative(f);
                for (int c = 0; c < 3; ++c) hess -= gam[c][e][f] * R.derivative(c);
                lap += ginv[e][f] * hess;
            }
        out.lap_scalar = lap.value();
    }
    return out;
}

namespace {

struct FrameAtNode {
    Vec3 xh, et, ep;
};

FrameAtNode node_frame(const GridSpec& grid, int i, int j) {
    double ct = grid.cos_theta(i), st = grid.sin_theta(i);
    double cp = std::cos(grid.phi(j)), sp = std::sin(grid.phi(j));
    return {{st * cp, st * sp, ct}, {ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

}  // namespace

GeodesicSphereExpansion expansion_boundary_data(const CurvatureJet& jet, double t,
                                                const GridSpec& grid) {
    GeodesicSphereExpansion out{t, SphereSymTensorField(grid), SphereSymTensorField(grid),
                                SphereSymTensorField(grid),
                                SphereScalarField::constant(grid, 0.0), 5};
    std::vector<double> hsamp(grid.n_nodes());
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    for (int i = 0; i < grid.n_theta(); ++i) {
        for (int j = 0; j < grid.n_phi(); ++j) {
            FrameAtNode fr = node_frame(grid, i, j);
            const Vec3 e[2] = {fr.et, fr.ep};
            // tangential curvature blocks in the paper-order slots (mu r nu r)
            double Rt[2][2], dRt[2][2], ddRt[2][2];
            for (int mu = 0; mu < 2; ++mu)
                for (int nu = 0; nu < 2; ++nu) {
                    double s0 = 0, s1 = 0, s2 = 0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            for (int c = 0; c < 3; ++c)
                                for (int d = 0; d < 3; ++d) {
                                    double w =
                                        e[mu][a] * fr.xh[b] * e[nu][c] * fr.xh[d];
                                    if (w == 0.0) continue;
                                    s0 += w * jet.riem[a][b][c][d];
                                    for (int q = 0; q < 3; ++q) {
                                        s1 += w * fr.xh[q] * jet.driem[a][b][c][d][q];
                                        if (jet.has_second)
                                            for (int f = 0; f < 3; ++f)
                                                s2 += w * fr.xh[q] * fr.xh[f] *
                                                      jet.ddriem[a][b][c][d][q][f];
                                    }
                                }
                    Rt[mu][nu] = s0;
                    dRt[mu][nu] = s1;
                    ddRt[mu][nu] = s2;
                }
            double ricrr = 0, dricrr = 0, ddricrr = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    ricrr += jet.ricci[a][b] * fr.xh[a] * fr.xh[b];
                    for (int c = 0; c < 3; ++c)
                        for (int q = 0; q < 3; ++q) {
                            double w = fr.xh[a] * fr.xh[b] * fr.xh[q];
                            dricrr += w * jet.driem[c][a][b][c][q];
                            if (jet.has_second)
                                for (int f = 0; f < 3; ++f)
                                    ddricrr += w * fr.xh[f] * jet.ddriem[c][a][b][c][q][f];
                        }
                }
            double R2[2][2], normR2 = 0.0;
            for (int mu = 0; mu < 2; ++mu)
                for (int nu = 0; nu < 2; ++nu) {
                    double s = 0.0;
                    for (int la = 0; la < 2; ++la) s += Rt[mu][la] * Rt[la][nu];
                    R2[mu][nu] = s;
                    normR2 += Rt[mu][nu] * Rt[mu][nu];
                }

            int n = grid.node_index(i, j);
            auto put = [&](SphereSymTensorField& f, int mu, int nu, double v) {
                if (mu == 0 && nu == 0) f.tt[n] = v;
                else if (mu == 1 && nu == 1) f.pp[n] = v;
                else f.tp[n] = v;
            };
            for (int mu = 0; mu < 2; ++mu)
                for (int nu = mu; nu < 2; ++nu) {
                    double id = (mu == nu) ? 1.0 : 0.0;
                    double bracket_g = id + t2 / 3.0 * Rt[mu][nu] + t3 / 6.0 * dRt[mu][nu] +
                                       t4 * (ddRt[mu][nu] / 20.0 + 2.0 / 45.0 * R2[mu][nu]);
                    double bracket_gi = id - t2 / 3.0 * Rt[mu][nu] - t3 / 6.0 * dRt[mu][nu] -
                                        t4 * (ddRt[mu][nu] / 20.0 - R2[mu][nu] / 15.0);
                    double bracket_a = -id - 2.0 * t2 / 3.0 * Rt[mu][nu] -
                                       5.0 * t3 / 12.0 * dRt[mu][nu] -
                                       t4 * (3.0 / 20.0 * ddRt[mu][nu] +
                                             2.0 / 15.0 * R2[mu][nu]);
                    put(out.gamma, mu, nu, t2 * bracket_g);
                    put(out.gamma_inv, mu, nu, bracket_gi / t2);
                    put(out.second_ff, mu, nu, t * bracket_a);
                }
            hsamp[n] = (-2.0 + t2 / 3.0 * ricrr + t3 / 4.0 * dricrr +
                        t4 * (ddricrr / 10.0 + normR2 / 45.0)) /
                       t;
        }
    }
    out.H = SphereScalarField(grid, hsamp);
    return out;
}

namespace {

using OdeState = std::array<double, 6>;

struct GeodesicRhs {
    const AmbientMetric* metric;
    void operator()(const OdeState& s, OdeState& ds, double) const {
        Vec3 x{s[0], s[1], s[2]};
        JetMat3 gj = metric->eval(x, 1);
        Mat3 g, dg[3];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                g[a][b] = gj[a][b].value();
                for (int c = 0; c < 3; ++c) dg[c][a][b] = gj[a][b].deriv(c == 0, c == 1, c == 2);
            }
        Mat3 ginv = Mat3{};
        {
            double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                         g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
            double id = 1.0 / det;
            ginv[0][0] = (g[1][1] * g[2][2] - g[1][2] * g[2][1]) * id;
            ginv[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) * id;
            ginv[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) * id;
            ginv[1][0] = ginv[0][1];
            ginv[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) * id;
            ginv[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) * id;
            ginv[2][0] = ginv[0][2];
            ginv[2][1] = ginv[1][2];
            ginv[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) * id;
        }
        ds[0] = s[3];
        ds[1] = s[4];
        ds[2] = s[5];
        for (int i = 0; i < 3; ++i) {
            double acc = 0.0;
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double gam = 0.0;
                    for (int l = 0; l < 3; ++l)
                        gam += ginv[i][l] * (dg[j][l][k] + dg[k][l][j] - dg[l][j][k]);
                    acc -= 0.5 * gam * s[3 + j] * s[3 + k];
                }
            ds[3 + i] = acc;
        }
    }
};

OdeState integrate_geodesic(const AmbientMetric& metric, const Vec3& p, const Vec3& v,
                            double t, double tol) {
    using namespace boost::numeric::odeint;
    OdeState s{p[0], p[1], p[2], v[0], v[1], v[2]};
    auto stepper = make_controlled(tol, tol, runge_kutta_fehlberg78<OdeState>());
    integrate_adaptive(stepper, GeodesicRhs{&metric}, s, 0.0, t, t / 16.0);
    return s;
}

}  // namespace

OracleSphere geodesic_sphere_oracle(const AmbientMetric& metric, const Vec3& p, double t,
                                    const GridSpec& grid, double ode_tol, double fd_delta) {
    if (metric.validity_radius && t >= metric.validity_radius(p))
        throw InputError("geodesic_sphere_oracle: radius exceeds the validity ball");
    OracleSphere out{SphereSymTensorField(grid), SphereScalarField::constant(grid, 0.0),
                     0.0, ode_tol, fd_delta};
    Mat3 E = cholesky_frame(metric.value(p));

    auto launch = [&](double th, double ph) {
        double st = std::sin(th), ct = std::cos(th);
        double cp = std::cos(ph), sp = std::sin(ph);
        Vec3 dir{st * cp, st * sp, ct};
        Vec3 v{};
        for (int a = 0; a < 3; ++a) {
            v[a] = 0.0;
            for (int A = 0; A < 3; ++A) v[a] += E[a][A] * dir[A];
        }
        return integrate_geodesic(metric, p, v, t, ode_tol);
    };

    std::vector<double> hsamp(grid.n_nodes());
    const double d = fd_delta;
    static const double stencil_c[4] = {-1.0, 8.0, -8.0, 1.0};
    static const double stencil_o[4] = {2.0, 1.0, -1.0, -2.0};
    for (int i = 0; i < grid.n_theta(); ++i) {
        for (int j = 0; j < grid.n_phi(); ++j) {
            double th = grid.theta(i), ph = grid.phi(j);
            OdeState c = launch(th, ph);
            Vec3 X{c[0], c[1], c[2]}, Xd{c[3], c[4], c[5]};

            // 4th-order direction derivatives of the endpoint and velocity
            Vec3 dX[2]{}, dV[2]{};
            for (int par = 0; par < 2; ++par) {
                for (int sgn = 0; sgn < 4; ++sgn) {
                    OdeState s = par == 0 ? launch(th + stencil_o[sgn] * d, ph)
                                          : launch(th, ph + stencil_o[sgn] * d);
                    for (int a = 0; a < 3; ++a) {
                        dX[par][a] += stencil_c[sgn] * s[a] / (12.0 * d);
                        dV[par][a] += stencil_c[sgn] * s[3 + a] / (12.0 * d);
                    }
                }
            }

            // metric and Christoffels at the endpoint
            JetMat3 gj = metric.eval(X, 1);
            Mat3 g;
            double dg[3][3][3];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    g[a][b] = gj[a][b].value();
                    for (int cc = 0; cc < 3; ++cc)
                        dg[cc][a][b] = gj[a][b].deriv(cc == 0, cc == 1, cc == 2);
                }
            auto dot = [&](const Vec3& u, const Vec3& w) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) s += g[a][b] * u[a] * w[b];
                return s;
            };

            double unit_err = std::abs(dot(Xd, Xd) - 1.0);
            if (unit_err > out.worst_unit_speed_error) out.worst_unit_speed_error = unit_err;
            if (unit_err > 1e3 * ode_tol + 1e-11) {
                std::ostringstream os;
                os << "geodesic_sphere_oracle: integrator tolerance failure in direction "
                   << "theta=" << th << " phi=" << ph << " (unit-speed error " << unit_err
                   << ")";
                throw SolverError(os.str());
            }

            // induced metric in chart parameters
            double gam_par[2][2];
            for (int a2 = 0; a2 < 2; ++a2)
                for (int b2 = a2; b2 < 2; ++b2)
                    gam_par[a2][b2] = gam_par[b2][a2] = dot(dX[a2], dX[b2]);

            // normal derivative of the induced metric through the velocity:
            //   d_t gamma_{mu nu} = g(D_mu xdot, d_nu X) + g(d_mu X, D_nu xdot),
            //   (D_mu xdot)^i = d_mu xdot^i + Gamma^i_{jk} d_mu X^j xdot^k
            Vec3 Dv[2] = {dV[0], dV[1]};
            {
                Mat3 ginv;
                double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                             g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                             g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
                double id = 1.0 / det;
                ginv[0][0] = (g[1][1] * g[2][2] - g[1][2] * g[2][1]) * id;
                ginv[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) * id;
                ginv[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) * id;
                ginv[1][0] = ginv[0][1];
                ginv[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) * id;
                ginv[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) * id;
                ginv[2][0] = ginv[0][2];
                ginv[2][1] = ginv[1][2];
                ginv[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) * id;
                double gam3[3][3][3];
                for (int i3 = 0; i3 < 3; ++i3)
                    for (int j3 = 0; j3 < 3; ++j3)
                        for (int k3 = j3; k3 < 3; ++k3) {
                            double s = 0.0;
                            for (int l3 = 0; l3 < 3; ++l3)
                                s += ginv[i3][l3] *
                                     (dg[j3][l3][k3] + dg[k3][l3][j3] - dg[l3][j3][k3]);
                            gam3[i3][j3][k3] = gam3[i3][k3][j3] = 0.5 * s;
                        }
                for (int par = 0; par < 2; ++par)
                    for (int i3 = 0; i3 < 3; ++i3)
                        for (int j3 = 0; j3 < 3; ++j3)
                            for (int k3 = 0; k3 < 3; ++k3)
                                Dv[par][i3] += gam3[i3][j3][k3] * dX[par][j3] * Xd[k3];
            }
            double dgam_dt[2][2];
            for (int a2 = 0; a2 < 2; ++a2)
                for (int b2 = a2; b2 < 2; ++b2)
                    dgam_dt[a2][b2] = dgam_dt[b2][a2] = dot(Dv[a2], dX[b2]) + dot(dX[a2], Dv[b2]);

            // H = -(1/2) tr(gamma^{-1} d_t gamma) with the inward convention
            double det2 = gam_par[0][0] * gam_par[1][1] - gam_par[0][1] * gam_par[0][1];
            double tr = (gam_par[1][1] * dgam_dt[0][0] - 2.0 * gam_par[0][1] * dgam_dt[0][1] +
                         gam_par[0][0] * dgam_dt[1][1]) /
                        det2;
            int n = grid.node_index(i, j);
            hsamp[n] = -0.5 * tr;

            // orthonormal frame components of gamma(t)
            double st = grid.sin_theta(i);
            out.gamma.tt[n] = gam_par[0][0];
            out.gamma.tp[n] = gam_par[0][1] / st;
            out.gamma.pp[n] = gam_par[1][1] / (st * st);
        }
    }
    out.H = SphereScalarField(grid, hsamp);
    return out;
}

BartnikData preset_from_metric_sphere(const AmbientMetric& metric, const Vec3& p, double r,
                                      const GridSpec& grid, SphereDataMode mode) {
    if (metric.validity_radius && r >= metric.validity_radius(p))
        throw InputError("preset_from_metric_sphere: radius exceeds the jet validity ball");
    if (mode == SphereDataMode::series) {
        CurvatureJet jet = curvature_jet(metric, p, true);
        GeodesicSphereExpansion exp = expansion_boundary_data(jet, r, grid);
        SphereSymTensorField gamma = exp.gamma;
        gamma *= 1.0 / (r * r);
        std::vector<double> h = exp.H.samples();
        for (auto& v : h) v *= r;
        return BartnikData(std::move(gamma), SphereScalarField(grid, h));
    }
    OracleSphere orc = geodesic_sphere_oracle(metric, p, r, grid);
    SphereSymTensorField gamma = orc.gamma;
    gamma *= 1.0 / (r * r);
    std::vector<double> h = orc.H.samples();
    for (auto& v : h) v *= r;
    return BartnikData(std::move(gamma), SphereScalarField(grid, h));
}

BartnikData preset_from_metric_sphere(const AmbientMetric& metric, double r,
                                      const GridSpec& grid, SphereDataMode mode) {
    return preset_from_metric_sphere(metric, metric.center, r, grid, mode);
}

double small_sphere_mass(const AmbientMetric& metric, const Vec3& p, double r,
                         const GridSpec& grid, SphereDataMode mode) {
    BartnikData data = preset_from_metric_sphere(metric, p, r, grid, mode);
    return r * first_order_mass(data);
}

LimitFit limit_fit(const std::vector<std::pair<double, double>>& radius_mass, int power) {
    if (power != 3 && power != 5) throw InputError("limit_fit: power must be 3 or 5");
    if (radius_mass.size() < 3) throw InputError("limit_fit: need at least three radii");
    for (size_t i = 1; i < radius_mass.size(); ++i)
        if (!(radius_mass[i].first < radius_mass[i - 1].first))
            throw InputError("limit_fit: radii must be strictly decreasing");

    const int n = int(radius_mass.size());
    std::vector<double> s(n), c(n);
    for (int i = 0; i < n; ++i) {
        s[i] = radius_mass[i].first * radius_mass[i].first;
        c[i] = radius_mass[i].second / std::pow(radius_mass[i].first, power);
    }
    // Neville extrapolation of c(s) to s = 0 (error model: even powers of r).
    std::vector<std::vector<double>> T(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) T[i][0] = c[i];
    for (int j = 1; j < n; ++j)
        for (int i = 0; i + j < n; ++i)
            T[i][j] = (s[i] * T[i + 1][j - 1] - s[i + j] * T[i][j - 1]) / (s[i] - s[i + j]);

    LimitFit fit;
    fit.coefficient = T[0][n - 1];
    fit.error_estimate = (n >= 2) ? std::abs(T[0][n - 1] - T[0][n - 2]) : 0.0;
    for (int i = 1; i < n; ++i)
        if (std::abs(c[i] - fit.coefficient) > std::abs(c[i - 1] - fit.coefficient) + 1e-30)
            fit.monotone = false;
    return fit;
}

}  // namespace qlm
