#ifndef QLM_METRICS_HPP_
#define QLM_METRICS_HPP_

#include <functional>
#include <map>
#include <string>

#include "qlm/extension.hpp"
#include "qlm/jets.hpp"

namespace qlm {

using JetMat3 = std::array<std::array<Jet, 3>, 3>;

/// A smooth 3-metric given through a jet evaluator: g_ij expanded to the
/// requested order around any point inside the validity ball.  Presets carry
/// closed forms evaluated with jet arithmetic (derivatives exact to roundoff);
/// plain pointwise evaluators can be wrapped by fd_jet_metric, which fills the
/// jets by nested central finite differences at reduced accuracy and order.
struct AmbientMetric {
    std::string name;
    Vec3 center{0.0, 0.0, 0.0};  // canonical expansion point
    int max_jet_order = 12;
    std::function<double(const Vec3&)> validity_radius;
    std::function<JetMat3(const Vec3&, int order)> eval;

    Mat3 value(const Vec3& p) const;
};

/// Flat Euclidean space.
AmbientMetric ambient_euclidean();

/// Constant sectional curvature K:  g = delta / (1 + K |x|^2 / 4)^2.
/// K = 1 is the unit round 3-sphere in stereographic projection.
AmbientMetric ambient_constant_curvature(double K);

/// Conformal metric exp(2 phi) delta with polynomial phi given as monomial
/// terms (coef, i, j, k) meaning coef x^i y^j z^k.
struct PolyTerm {
    double coef;
    int i, j, k;
};
AmbientMetric ambient_conformal(std::vector<PolyTerm> phi, std::string name = "conformal");

/// phi = c |x|^4; flat to second order at the origin with
/// scalar curvature R = -80 c r^2 + O(r^6), so Lap R(0) = -480 c.
AmbientMetric ambient_conformal_quartic(double c = 1.0);

/// Schwarzschild in isotropic coordinates, g = (1 + m/2|x|)^4 delta, with the
/// canonical expansion point on the positive x-axis at radius rho0.
AmbientMetric ambient_schwarzschild_isotropic(double m, double rho0 = 2.0);

/// Preset lookup by name: euclidean | s3 | constant-curvature |
/// conformal-quartic | schwarzschild.  Parameters: K, c, m, rho0 as relevant.
AmbientMetric ambient_preset(const std::string& name,
                             const std::map<std::string, double>& params);

/// Wraps a pointwise metric evaluator; jets are filled by nested central
/// differences with per-order step laddering and a single Richardson pass.
/// Accuracy degrades with order; max_jet_order caps at 4.
AmbientMetric fd_jet_metric(std::function<Mat3(const Vec3&)> g, std::string name = "fd",
                            double validity = 1e30, double base_step = 1e-2);

}  // namespace qlm

#endif  // QLM_METRICS_HPP_
