#include "qlm/scalar_field.hpp"

#include <algorithm>
#include <cmath>

#include "qlm/errors.hpp"

namespace qlm {

void ShCoeffs::symmetrize() {
    for (int l = 0; l <= band_limit; ++l) {
        c[mode_index(l, 0)] = cplx(c[mode_index(l, 0)].real(), 0.0);
        for (int m = 1; m <= l; ++m) {
            double sign = (m % 2 == 0) ? 1.0 : -1.0;
            c[mode_index(l, -m)] = sign * std::conj(c[mode_index(l, m)]);
        }
    }
}

double ShCoeffs::max_abs() const {
    double r = 0.0;
    for (const auto& z : c) r = std::max(r, std::abs(z));
    return r;
}

namespace {

// phi-transform: F_m(theta_i) = d_phi * sum_j f(i,j) e^{-i m phi_j}, m = 0..L.
// Grids are small (n_phi <= a few hundred), so direct sums are fine.
void phi_analysis(const GridSpec& g, const std::vector<double>& samples,
                  std::vector<cplx>& fm) {
    const int L = g.band_limit(), nt = g.n_theta(), np = g.n_phi();
    fm.assign(nt * (L + 1), cplx(0.0));
    std::vector<cplx> expn(np);
    for (int m = 0; m <= L; ++m) {
        for (int j = 0; j < np; ++j) {
            double a = m * g.phi(j);
            expn[j] = cplx(std::cos(a), -std::sin(a));
        }
        for (int i = 0; i < nt; ++i) {
            cplx s(0.0);
            const double* row = samples.data() + i * np;
            for (int j = 0; j < np; ++j) s += row[j] * expn[j];
            fm[i * (L + 1) + m] = s * g.d_phi();
        }
    }
}

}  // namespace

ShCoeffs analyze(const GridSpec& grid, const std::vector<double>& samples) {
    if (static_cast<int>(samples.size()) != grid.n_nodes())
        throw InputError("analyze: sample array does not match grid dimensions");
    const int L = grid.band_limit();
    ShCoeffs out(L, true);
    std::vector<cplx> fm;
    phi_analysis(grid, samples, fm);
    for (int l = 0; l <= L; ++l) {
        for (int m = 0; m <= l; ++m) {
            cplx s(0.0);
            for (int i = 0; i < grid.n_theta(); ++i)
                s += grid.weight(i) * grid.pbar(i, l, m) * fm[i * (L + 1) + m];
            out.at(l, m) = s;
        }
    }
    out.symmetrize();
    return out;
}

std::vector<double> synthesize(const GridSpec& grid, const ShCoeffs& coeffs) {
    if (coeffs.band_limit > grid.band_limit())
        throw InputError("synthesize: coefficient band limit exceeds grid band limit");
    const int L = coeffs.band_limit, nt = grid.n_theta(), np = grid.n_phi();
    std::vector<double> out(grid.n_nodes(), 0.0);
    // Accumulate g_m(theta_i) = sum_l c_{lm} Pbar_{lm}(x_i), then expand in phi.
    std::vector<cplx> gm(nt * (L + 1), cplx(0.0));
    for (int l = 0; l <= L; ++l)
        for (int m = 0; m <= l; ++m)
            for (int i = 0; i < nt; ++i)
                gm[i * (L + 1) + m] += coeffs.at(l, m) * grid.pbar(i, l, m);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < np; ++j) {
            double v = gm[i * (L + 1)].real();
            for (int m = 1; m <= L; ++m) {
                double a = m * grid.phi(j);
                cplx e(std::cos(a), std::sin(a));
                v += 2.0 * (gm[i * (L + 1) + m] * e).real();
            }
            out[i * np + j] = v;
        }
    }
    return out;
}

namespace {

// Shared driver: synthesize sum_{lm} c_{lm} T_{lm}(theta) e^{im phi} for a
// caller-supplied theta-profile T (built from Pbar and its derivatives).
template <typename ThetaFn>
void synth_with_profile(const GridSpec& grid, const ShCoeffs& coeffs, ThetaFn profile,
                        std::vector<double>& out) {
    const int L = coeffs.band_limit, nt = grid.n_theta(), np = grid.n_phi();
    out.assign(grid.n_nodes(), 0.0);
    std::vector<cplx> gm(nt * (L + 1), cplx(0.0));
    for (int l = 0; l <= L; ++l)
        for (int m = 0; m <= l; ++m)
            for (int i = 0; i < nt; ++i)
                gm[i * (L + 1) + m] += coeffs.at(l, m) * profile(i, l, m);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < np; ++j) {
            double v = gm[i * (L + 1)].real();
            for (int m = 1; m <= L; ++m) {
                double a = m * grid.phi(j);
                cplx e(std::cos(a), std::sin(a));
                v += 2.0 * (gm[i * (L + 1) + m] * e).real();
            }
            out[i * np + j] = v;
        }
    }
}

}  // namespace

void synthesize_gradient(const GridSpec& grid, const ShCoeffs& coeffs,
                         std::vector<double>& d_theta_frame, std::vector<double>& d_phi_frame) {
    if (coeffs.band_limit > grid.band_limit())
        throw InputError("synthesize_gradient: band limit exceeds grid");
    synth_with_profile(grid, coeffs,
                       [&](int i, int l, int m) { return cplx(grid.pbar_dt(i, l, m), 0.0); },
                       d_theta_frame);
    // (1/sin) d/dphi brings a factor i m / sin(theta).
    synth_with_profile(grid, coeffs,
                       [&](int i, int l, int m) {
                           return cplx(0.0, m * grid.pbar(i, l, m) / grid.sin_theta(i));
                       },
                       d_phi_frame);
}

void synthesize_hessian(const GridSpec& grid, const ShCoeffs& coeffs,
                        std::vector<double>& h11, std::vector<double>& h12,
                        std::vector<double>& h22) {
    if (coeffs.band_limit > grid.band_limit())
        throw InputError("synthesize_hessian: band limit exceeds grid");
    // f_{:tt} = f_tt
    synth_with_profile(grid, coeffs,
                       [&](int i, int l, int m) { return cplx(grid.pbar_dtt(i, l, m), 0.0); },
                       h11);
    // f_{:tp} = (f_tp - cot f_p)/sin = i m (Pbar' - cot Pbar)/sin
    synth_with_profile(grid, coeffs,
                       [&](int i, int l, int m) {
                           double cot = grid.cos_theta(i) / grid.sin_theta(i);
                           return cplx(0.0, m * (grid.pbar_dt(i, l, m) - cot * grid.pbar(i, l, m)) /
                                                grid.sin_theta(i));
                       },
                       h12);
    // f_{:pp} = f_pp/sin^2 + cot f_t = -m^2 Pbar/sin^2 + cot Pbar'
    synth_with_profile(grid, coeffs,
                       [&](int i, int l, int m) {
                           double s = grid.sin_theta(i);
                           double cot = grid.cos_theta(i) / s;
                           return cplx(-m * m * grid.pbar(i, l, m) / (s * s) +
                                           cot * grid.pbar_dt(i, l, m),
                                       0.0);
                       },
                       h22);
}

SphereScalarField::SphereScalarField(const GridSpec& grid, std::vector<double> samples)
    : grid_(&grid), samples_(std::move(samples)), coeffs_(analyze(grid, samples_)) {}

SphereScalarField::SphereScalarField(const GridSpec& grid, const ShCoeffs& coeffs)
    : grid_(&grid), samples_(synthesize(grid, coeffs)), coeffs_(coeffs) {}

SphereScalarField SphereScalarField::constant(const GridSpec& grid, double value) {
    return SphereScalarField(grid, std::vector<double>(grid.n_nodes(), value));
}

SphereScalarField laplace_beltrami(const SphereScalarField& f) {
    ShCoeffs c = f.coeffs();
    for (int l = 0; l <= c.band_limit; ++l)
        for (int m = -l; m <= l; ++m) c.at(l, m) *= -double(l) * (l + 1);
    return SphereScalarField(f.grid(), c);
}

SphereScalarField disk_extension(const SphereScalarField& f, double r) {
    if (r < 0.0 || r >= 1.0) throw InputError("disk_extension: r must lie in [0,1)");
    ShCoeffs c = f.coeffs();
    double rl = 1.0;
    for (int l = 0; l <= c.band_limit; ++l) {
        for (int m = -l; m <= l; ++m) c.at(l, m) *= rl;
        rl *= r;
    }
    return SphereScalarField(f.grid(), c);
}

SphereScalarField exterior_harmonic_extension(const SphereScalarField& f, double r) {
    if (r < 1.0) throw InputError("exterior_harmonic_extension: r must be >= 1");
    ShCoeffs c = f.coeffs();
    double w = 1.0 / r;
    for (int l = 0; l <= c.band_limit; ++l) {
        for (int m = -l; m <= l; ++m) c.at(l, m) *= w;
        w /= r;
    }
    return SphereScalarField(f.grid(), c);
}

double integrate_sphere(const GridSpec& grid, const std::vector<double>& samples) {
    double s = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i) {
        double row = 0.0;
        for (int j = 0; j < grid.n_phi(); ++j) row += samples[grid.node_index(i, j)];
        s += grid.weight(i) * row;
    }
    return s * grid.d_phi();
}

double integrate_sphere(const SphereScalarField& f) {
    return integrate_sphere(f.grid(), f.samples());
}

double inner_product(const SphereScalarField& f, const SphereScalarField& g) {
    if (!(f.grid() == g.grid())) throw InputError("inner_product: mismatched grids");
    double s = 0.0;
    for (int i = 0; i < f.grid().n_theta(); ++i) {
        double row = 0.0;
        for (int j = 0; j < f.grid().n_phi(); ++j) {
            int k = f.grid().node_index(i, j);
            row += f.samples()[k] * g.samples()[k];
        }
        s += f.grid().weight(i) * row;
    }
    return s * f.grid().d_phi();
}

}  // namespace qlm
