#ifndef QLM_SOLID_HARMONICS_HPP_
#define QLM_SOLID_HARMONICS_HPP_

#include <array>

#include "qlm/scalar_field.hpp"

namespace qlm {

/// Coefficient-level Cartesian derivative of exterior harmonic sums.
/// For B[c](x) = sum c_{lm} r^{-l-1} Y_{lm}(xhat), the gradient is again an
/// exterior sum one degree up:  d_a B[c] = B[ladder_a(c)].  The three ladders
/// follow from the recurrences
///   d_z  I_{lm} = -(2l+1) A_{lm}      I_{l+1,m},
///   d_+  I_{lm} = +(2l+1) alpha+_{lm} I_{l+1,m+1},
///   d_-  I_{lm} = -(2l+1) alpha-_{lm} I_{l+1,m-1},
/// with I_{lm} = r^{-l-1} Y_{lm}, d_± = d_x ± i d_y,
///   A      = sqrt(((l+1)^2-m^2)/((2l+1)(2l+3))),
///   alpha+ = sqrt((l+m+1)(l+m+2)/((2l+1)(2l+3))),
///   alpha- = sqrt((l-m+1)(l-m+2)/((2l+1)(2l+3))).
/// axis: 0 = x, 1 = y, 2 = z.  Output band limit is input + 1.
ShCoeffs ladder_derivative(const ShCoeffs& c, int axis);

/// Degree weight (l+1) c_{lm}, used by derivatives of radially constant fields.
ShCoeffs degree_weight(const ShCoeffs& c);
/// Weight (l+1)(l-1) c_{lm}.
ShCoeffs degree_weight2(const ShCoeffs& c);

/// Per-point evaluation workspace: Legendre values and azimuthal phases at a
/// single direction, for synthesizing arbitrary coefficient arrays there.
class PointHarmonics {
public:
    PointHarmonics(int lmax, const std::array<double, 3>& x);

    double r() const { return r_; }
    const std::array<double, 3>& xhat() const { return xhat_; }

    /// sum c_{lm} Y_{lm}(xhat); real by conjugate symmetry of c.
    double angular(const ShCoeffs& c) const;
    /// sum c_{lm} r^{-l-1} Y_{lm}(xhat).
    double exterior(const ShCoeffs& c) const;

private:
    int lmax_;
    double r_;
    std::array<double, 3> xhat_;
    std::vector<double> pbar_;
    std::vector<cplx> eim_;      // e^{i m phi}, m = 0..lmax
    std::vector<double> rpow_;   // r^{-l-1}, l = 0..lmax
};

/// Evaluator for a radially constant field F(x) = sum c_{lm} Y_{lm}(xhat)
/// with exact first and second Cartesian derivatives:
///   d_d F     = r^{-1} ( xhat_d A[L c] + A[D_d c] )
///   d_e d_d F = r^{-2} ( xhat_e xhat_d A[L2 c] + delta_{ed} A[L c]
///               + xhat_d A[D_e L c] + xhat_e A[D_d L c] + A[D_e D_d c] )
/// where A[.] is angular synthesis, L/L2 the degree weights and D the ladders.
class AngularFieldEval {
public:
    AngularFieldEval() = default;
    explicit AngularFieldEval(const ShCoeffs& c);

    int max_degree() const { return lc_.band_limit; }
    double value(const PointHarmonics& ph) const;
    std::array<double, 3> gradient(const PointHarmonics& ph) const;
    std::array<std::array<double, 3>, 3> hessian(const PointHarmonics& ph) const;

private:
    ShCoeffs c_, lc_, l2c_;
    std::array<ShCoeffs, 3> dc_, dlc_;
    std::array<std::array<ShCoeffs, 3>, 3> ddc_;
};

/// Evaluator for an exterior harmonic sum F(x) = sum c_{lm} r^{-l-1} Y_{lm}
/// with exact derivatives through pure ladder application.
class ExteriorFieldEval {
public:
    ExteriorFieldEval() = default;
    explicit ExteriorFieldEval(const ShCoeffs& c);

    int max_degree() const { return c_.band_limit + 2; }
    double value(const PointHarmonics& ph) const;
    std::array<double, 3> gradient(const PointHarmonics& ph) const;
    std::array<std::array<double, 3>, 3> hessian(const PointHarmonics& ph) const;

private:
    ShCoeffs c_;
    std::array<ShCoeffs, 3> dc_;
    std::array<std::array<ShCoeffs, 3>, 3> ddc_;
};

}  // namespace qlm

#endif  // QLM_SOLID_HARMONICS_HPP_
