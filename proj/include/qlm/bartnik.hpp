#ifndef QLM_BARTNIK_HPP_
#define QLM_BARTNIK_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "qlm/tensor_field.hpp"

namespace qlm {

/// Boundary data (gamma, H) on the unit sphere: gamma the induced metric in
/// the round orthonormal frame, H the mean curvature with the convention
/// H[round unit sphere in flat space] = -2.
struct BartnikData {
    SphereSymTensorField gamma;
    SphereScalarField H;

    BartnikData(SphereSymTensorField g, SphereScalarField h);

    const GridSpec& grid() const { return *gamma.grid; }
    /// gamma minus the round metric.
    SphereSymTensorField deviation_metric() const;
    /// H + 2.
    SphereScalarField deviation_H() const;

    static BartnikData round(const GridSpec& grid);
};

/// Spectral Sobolev-type surrogate of order k for a C^k-size measure:
/// value = sqrt( sum_{lm} (1+l)^{2k+2} |c_{lm}|^2 ), summed over components.
/// Vanishes exactly on zero deviation and is homogeneous of degree one.
struct NormSurrogate {
    int order = 0;
    double value = 0.0;
};

double sobolev_surrogate(const ShCoeffs& c, int order);

/// (order-4 surrogate of gamma - round, order-3 surrogate of H + 2).
/// The tensor deviation is measured through scalar analysis of its three
/// frame components.
std::pair<NormSurrogate, NormSurrogate> data_norms(const BartnikData& data);

/// Combined smallness measure epsilon = norm4(gamma - round) + norm3(H + 2).
double data_epsilon(const BartnikData& data);

/// Hawking mass sqrt(A/16pi) (1 - (1/16pi) Int H^2 dA), all integrals against
/// the measure induced by gamma.  Throws InputError if gamma is not positive
/// definite at some grid node.
double hawking_mass(const BartnikData& data);

/// First-order mass (1/16pi) Int (6 + 2H - tr gamma) against the ROUND
/// measure, trace taken with the round metric.  Exactly linear in the data.
double first_order_mass(const BartnikData& data);

/// Boundary data of the mass-m Schwarzschild metric in isotropic coordinates,
/// read on the unit coordinate sphere:
///   gamma = (1+m/2)^4 * round,  H = -2 (1-m/2) (1+m/2)^{-3}.
/// Requires |m| < 1.  Hawking mass of this data is exactly m.
BartnikData preset_schwarzschild(double m, const GridSpec& grid);

/// Mass report emitted by the mass command.
struct MassReport {
    double hawking = 0.0;
    double first_order = 0.0;
    std::vector<std::pair<double, double>> adm_flux;  // (radius, value)
    double adm_closed_form = 0.0;
    double epsilon = 0.0;
    double quadratic_error_bound = 0.0;
    bool extension_refused = false;
};

/// Empirical constant for the second-order error band in MassReport
/// (|hawking - first_order| <= c * epsilon^2 on in-regime data; fitted, not
/// a proven bound).
inline constexpr double kQuadraticErrorConstant = 25.0;

/// Deterministic pseudo-random deviation direction and data with a prescribed
/// epsilon.  Coefficients are drawn with Sobolev pre-whitening over l <= 4 so
/// the grid amplitude stays a modest multiple of epsilon.
struct DeviationDirection {
    SphereSymTensorField omega;  // metric deviation
    SphereScalarField kappa;     // H deviation
};
DeviationDirection random_deviation(const GridSpec& grid, std::uint64_t seed);
BartnikData random_bartnik_data(const GridSpec& grid, double epsilon, std::uint64_t seed);

/// epsilon of the direction itself (scales linearly under t).
double deviation_epsilon(const DeviationDirection& dir);

/// data + t * direction, as Bartnik data.
BartnikData perturb_round(const DeviationDirection& dir, double t);

}  // namespace qlm

#endif  // QLM_BARTNIK_HPP_
