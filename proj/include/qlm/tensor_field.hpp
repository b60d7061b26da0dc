#ifndef QLM_TENSOR_FIELD_HPP_
#define QLM_TENSOR_FIELD_HPP_

#include <vector>

#include "qlm/scalar_field.hpp"

namespace qlm {

/// Tangent vector field on the sphere, stored through a gradient potential and
/// a curl potential:  W = grad(g) + J grad(s),  with J the rotation
/// (Jv)_theta = v_phi, (Jv)_phi = -v_theta in the orthonormal frame.
/// Decomposition output is gauge-fixed: potentials carry no l <= 1 modes
/// (l=1 gradient content is absorbed into the trace part, l=1 curl fields are
/// Killing and drop out entirely).  Hand-built fields may carry any modes.
struct TangentField {
    ShCoeffs grad_pot;
    ShCoeffs curl_pot;

    explicit TangentField(int L) : grad_pot(L), curl_pot(L) {}

    /// Zeroes the l <= 1 potential modes.
    void gauge_fix();
    bool is_zero(double tol = 0.0) const;
};

/// Frame components (W_theta, W_phi) of the field on the grid.
void tangent_frame_components(const GridSpec& grid, const TangentField& W,
                              std::vector<double>& w_theta, std::vector<double>& w_phi);

/// Symmetric 2-tensor field on the sphere in the round orthonormal frame
/// (e_theta, e_phi/sin theta); components tt, tp, pp sampled on the grid.
struct SphereSymTensorField {
    const GridSpec* grid;
    std::vector<double> tt, tp, pp;

    explicit SphereSymTensorField(const GridSpec& g)
        : grid(&g), tt(g.n_nodes(), 0.0), tp(g.n_nodes(), 0.0), pp(g.n_nodes(), 0.0) {}

    std::vector<double> trace() const;        // tt + pp
    double max_abs() const;

    SphereSymTensorField& operator+=(const SphereSymTensorField& o);
    SphereSymTensorField& operator-=(const SphereSymTensorField& o);
    SphereSymTensorField& operator*=(double a);
};

/// h * (round metric): pure trace tensor.
SphereSymTensorField trace_tensor(const SphereScalarField& h);

/// Frame components of L_W(round metric) for a potential-represented field.
SphereSymTensorField lie_derivative_round(const GridSpec& grid, const TangentField& W);

/// Splits a band-limited omega as  omega = h * (round metric) + L_W(round metric),
/// with W gauge-fixed (no l <= 1 potential modes).  Exact, up to quadrature
/// roundoff, whenever omega lies in the band-limited span of such tensors.
struct TensorDecomposition {
    SphereScalarField h;
    TangentField W;
};
TensorDecomposition decompose_sym_tensor(const SphereSymTensorField& omega);

}  // namespace qlm

#endif  // QLM_TENSOR_FIELD_HPP_
