#ifndef QLM_SCALAR_FIELD_HPP_
#define QLM_SCALAR_FIELD_HPP_

#include <complex>
#include <vector>

#include "qlm/grid.hpp"

namespace qlm {

using cplx = std::complex<double>;

/// Coefficients c_{lm} of an expansion in orthonormal spherical harmonics,
/// 0 <= l <= L, |m| <= l, flat-indexed by mode_index(l,m).  When `real_field`
/// is set the coefficients satisfy c_{l,-m} = (-1)^m conj(c_{lm}).
struct ShCoeffs {
    int band_limit = 0;
    bool real_field = true;
    std::vector<cplx> c;

    ShCoeffs() = default;
    explicit ShCoeffs(int L, bool real = true)
        : band_limit(L), real_field(real), c(num_modes(L), cplx(0.0)) {}

    cplx& at(int l, int m) { return c[mode_index(l, m)]; }
    const cplx& at(int l, int m) const { return c[mode_index(l, m)]; }

    /// Enforce the reality constraint from the m >= 0 entries.
    void symmetrize();
    /// Largest |c_{lm}|.
    double max_abs() const;
};

/// A scalar function on the sphere held dually as samples on a GridSpec and as
/// band-limited spherical-harmonic coefficients.  Both views are kept in sync
/// at construction; the object is immutable afterwards.
class SphereScalarField {
public:
    SphereScalarField(const GridSpec& grid, std::vector<double> samples);
    SphereScalarField(const GridSpec& grid, const ShCoeffs& coeffs);

    const GridSpec& grid() const { return *grid_; }
    const std::vector<double>& samples() const { return samples_; }
    const ShCoeffs& coeffs() const { return coeffs_; }
    double sample(int i, int j) const { return samples_[grid_->node_index(i, j)]; }

    static SphereScalarField constant(const GridSpec& grid, double value);

private:
    const GridSpec* grid_;
    std::vector<double> samples_;
    ShCoeffs coeffs_;
};

/// L2 projection onto the orthonormal harmonic basis; exact for band-limited
/// samples by Gauss quadrature.
ShCoeffs analyze(const GridSpec& grid, const std::vector<double>& samples);

/// Pointwise sum of c_{lm} Y_{lm} over the grid; left inverse of analyze on
/// band-limited fields.  The coefficient band limit may not exceed the grid's.
std::vector<double> synthesize(const GridSpec& grid, const ShCoeffs& coeffs);

/// Samples of the surface gradient in the orthonormal frame (e_theta, e_phi/sin).
void synthesize_gradient(const GridSpec& grid, const ShCoeffs& coeffs,
                         std::vector<double>& d_theta_frame, std::vector<double>& d_phi_frame);

/// Samples of the covariant Hessian in the orthonormal frame:
/// h11 = f_{:tt}, h12 = f_{:tp}, h22 = f_{:pp} (round-sphere connection).
void synthesize_hessian(const GridSpec& grid, const ShCoeffs& coeffs,
                        std::vector<double>& h11, std::vector<double>& h12,
                        std::vector<double>& h22);

/// Multiplies mode (l,m) by -l(l+1).
SphereScalarField laplace_beltrami(const SphereScalarField& f);

/// Harmonic extension into the unit ball, sampled on the sphere of radius r:
/// multiplies mode l by r^l.  Requires 0 <= r < 1; self-adjoint on L2.
SphereScalarField disk_extension(const SphereScalarField& f, double r);

/// Bounded harmonic extension to the exterior, sampled at radius r >= 1:
/// multiplies mode l by r^{-l-1}.
SphereScalarField exterior_harmonic_extension(const SphereScalarField& f, double r);

/// Quadrature against the round area element (total area 4 pi).
double integrate_sphere(const SphereScalarField& f);
double integrate_sphere(const GridSpec& grid, const std::vector<double>& samples);

/// Quadrature inner product <f,g> (no conjugation; fields are real).
double inner_product(const SphereScalarField& f, const SphereScalarField& g);

}  // namespace qlm

#endif  // QLM_SCALAR_FIELD_HPP_
