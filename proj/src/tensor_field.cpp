#include "qlm/tensor_field.hpp"

#include <algorithm>
#include <cmath>

#include "qlm/errors.hpp"

namespace qlm {

void TangentField::gauge_fix() {
    for (int l = 0; l <= std::min(1, grad_pot.band_limit); ++l) {
        for (int m = -l; m <= l; ++m) {
            grad_pot.at(l, m) = 0.0;
            curl_pot.at(l, m) = 0.0;
        }
    }
}

bool TangentField::is_zero(double tol) const {
    return grad_pot.max_abs() <= tol && curl_pot.max_abs() <= tol;
}

void tangent_frame_components(const GridSpec& grid, const TangentField& W,
                              std::vector<double>& w_theta, std::vector<double>& w_phi) {
    std::vector<double> gt, gp, st, sp;
    synthesize_gradient(grid, W.grad_pot, gt, gp);
    synthesize_gradient(grid, W.curl_pot, st, sp);
    const int n = grid.n_nodes();
    w_theta.resize(n);
    w_phi.resize(n);
    // W = grad(g) + J grad(s):  W_t = g_:t + s_:p,  W_p = g_:p - s_:t.
    for (int k = 0; k < n; ++k) {
        w_theta[k] = gt[k] + sp[k];
        w_phi[k] = gp[k] - st[k];
    }
}

std::vector<double> SphereSymTensorField::trace() const {
    std::vector<double> tr(tt.size());
    for (size_t k = 0; k < tt.size(); ++k) tr[k] = tt[k] + pp[k];
    return tr;
}

double SphereSymTensorField::max_abs() const {
    double r = 0.0;
    for (size_t k = 0; k < tt.size(); ++k)
        r = std::max({r, std::abs(tt[k]), std::abs(tp[k]), std::abs(pp[k])});
    return r;
}

SphereSymTensorField& SphereSymTensorField::operator+=(const SphereSymTensorField& o) {
    for (size_t k = 0; k < tt.size(); ++k) {
        tt[k] += o.tt[k];
        tp[k] += o.tp[k];
        pp[k] += o.pp[k];
    }
    return *this;
}

SphereSymTensorField& SphereSymTensorField::operator-=(const SphereSymTensorField& o) {
    for (size_t k = 0; k < tt.size(); ++k) {
        tt[k] -= o.tt[k];
        tp[k] -= o.tp[k];
        pp[k] -= o.pp[k];
    }
    return *this;
}

SphereSymTensorField& SphereSymTensorField::operator*=(double a) {
    for (size_t k = 0; k < tt.size(); ++k) {
        tt[k] *= a;
        tp[k] *= a;
        pp[k] *= a;
    }
    return *this;
}

SphereSymTensorField trace_tensor(const SphereScalarField& h) {
    SphereSymTensorField out(h.grid());
    out.tt = h.samples();
    out.pp = h.samples();
    return out;
}

SphereSymTensorField lie_derivative_round(const GridSpec& grid, const TangentField& W) {
    // From the potentials, with Hess the round covariant Hessian:
    //   L_{grad g} = 2 Hess(g)
    //   L_{J grad s}: (tt, tp, pp) = (2 s_:tp, s_:pp - s_:tt, -2 s_:tp)
    std::vector<double> g11, g12, g22, s11, s12, s22;
    synthesize_hessian(grid, W.grad_pot, g11, g12, g22);
    synthesize_hessian(grid, W.curl_pot, s11, s12, s22);
    SphereSymTensorField out(grid);
    for (int k = 0; k < grid.n_nodes(); ++k) {
        out.tt[k] = 2.0 * g11[k] + 2.0 * s12[k];
        out.tp[k] = 2.0 * g12[k] + (s22[k] - s11[k]);
        out.pp[k] = 2.0 * g22[k] - 2.0 * s12[k];
    }
    return out;
}

TensorDecomposition decompose_sym_tensor(const SphereSymTensorField& omega) {
    const GridSpec& grid = *omega.grid;
    const int L = grid.band_limit(), nt = grid.n_theta(), np = grid.n_phi();

    // Trace-free part in the two independent components a = (tt-pp)/2, b = tp.
    std::vector<double> a(grid.n_nodes()), b(grid.n_nodes());
    for (int k = 0; k < grid.n_nodes(); ++k) {
        a[k] = 0.5 * (omega.tt[k] - omega.pp[k]);
        b[k] = omega.tp[k];
    }

    // phi-transforms of a and b for m = 0..L.
    auto phi_an = [&](const std::vector<double>& f, std::vector<cplx>& fm) {
        fm.assign(nt * (L + 1), cplx(0.0));
        for (int m = 0; m <= L; ++m) {
            for (int i = 0; i < nt; ++i) {
                cplx s(0.0);
                for (int j = 0; j < np; ++j) {
                    double ang = m * grid.phi(j);
                    s += f[i * np + j] * cplx(std::cos(ang), -std::sin(ang));
                }
                fm[i * (L + 1) + m] = s * grid.d_phi();
            }
        }
    };
    std::vector<cplx> am, bm;
    phi_an(a, am);
    phi_an(b, bm);

    // Project onto the trace-free tensor harmonics built from Y_{lm}, l >= 2:
    //   gradient type:  (a,b) = (D1 Y, D2 Y)
    //   curl type:      (a,b) = (D2 Y, -D1 Y)
    // with D1 Y = 2 Y_:tt + l(l+1) Y and D2 Y = 2 Y_:tp.  Both have squared
    // L2 norm (in the tensor inner product) 2 (l-1) l (l+1) (l+2).
    TangentField W(L);
    for (int l = 2; l <= L; ++l) {
        double norm2 = 2.0 * (l - 1.0) * l * (l + 1.0) * (l + 2.0);
        for (int m = 0; m <= l; ++m) {
            cplx pg(0.0), pc(0.0);
            for (int i = 0; i < nt; ++i) {
                double s = grid.sin_theta(i);
                double cot = grid.cos_theta(i) / s;
                double d1 = 2.0 * grid.pbar_dtt(i, l, m) + l * (l + 1.0) * grid.pbar(i, l, m);
                // D2 Y = 2 i m (Pbar' - cot Pbar)/sin * e^{im phi}; the e^{im phi}
                // lives in the phi-transform, conjugation flips the i m factor.
                double d2 = 2.0 * m * (grid.pbar_dt(i, l, m) - cot * grid.pbar(i, l, m)) / s;
                const cplx A = am[i * (L + 1) + m], B = bm[i * (L + 1) + m];
                // <E, T> = integral 2 (conj(a_E) a + conj(b_E) b)
                pg += grid.weight(i) * 2.0 * (d1 * A + cplx(0.0, -d2) * B);
                pc += grid.weight(i) * 2.0 * (cplx(0.0, -d2) * A - d1 * B);
            }
            W.grad_pot.at(l, m) = pg / norm2;
            W.curl_pot.at(l, m) = pc / norm2;
        }
    }
    W.grad_pot.symmetrize();
    W.curl_pot.symmetrize();

    // Trace route: tr(omega) = 2h + 2 div W with div W = Lap(grad_pot), so
    // h_{lm} = tau_{lm}/2 + l(l+1) grad_pot_{lm}.
    ShCoeffs tau = analyze(grid, omega.trace());
    ShCoeffs hc(L, true);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m)
            hc.at(l, m) = 0.5 * tau.at(l, m) + double(l) * (l + 1) * W.grad_pot.at(l, m);

    return TensorDecomposition{SphereScalarField(grid, hc), std::move(W)};
}

}  // namespace qlm
