#ifndef QLM_POISSON_HPP_
#define QLM_POISSON_HPP_

#include <functional>
#include <vector>

#include "qlm/extension.hpp"

namespace qlm {

/// Logarithmic radial grid on [1, r_max].
struct RadialGrid {
    double r_max = 100.0;
    int n = 400;
    double node(int i) const;
    int size() const { return n; }
};

/// One spherical-harmonic mode of a radial profile.  Pure power-law modes
/// (f = coef * r^{-power}) carry their closed form so integrals against them
/// can be done analytically; sampled modes are interpolated by a cubic spline
/// in log r and integrated adaptively, with an analytic power-law tail of
/// exponent `decay_tag` beyond r_max.
struct RadialMode {
    int l = 0, m = 0;
    bool pure_power = false;
    double coef = 0.0, power = 0.0;
    std::vector<double> samples;
};

class RadialProfile {
public:
    RadialProfile(int band_limit, double decay_tag, RadialGrid grid = {});

    int band_limit() const { return band_limit_; }
    double decay_tag() const { return decay_tag_; }
    const RadialGrid& rgrid() const { return grid_; }
    const std::vector<RadialMode>& modes() const { return modes_; }

    /// Adds f_{lm} = coef * r^{-power}.
    void add_power_mode(int l, int m, double coef, double power);
    /// Adds a sampled mode on the profile's radial grid.
    void add_sampled_mode(int l, int m, std::vector<double> samples);

    /// Value of mode k at radius r (spline or closed form; power-law tail
    /// beyond r_max).
    double eval_mode(int k, double r) const;

    static RadialProfile power_law(int l, int m, double coef, double power,
                                   double decay_tag, RadialGrid grid = {});

private:
    friend RadialProfile sample_profile(const RadialProfile&);
    int band_limit_;
    double decay_tag_;
    RadialGrid grid_;
    std::vector<RadialMode> modes_;
    mutable std::vector<std::vector<double>> spline_m2_;  // spline curvatures per mode
    void build_spline(int k) const;
};

/// Re-samples every mode onto the radial grid (used for file output).
RadialProfile sample_profile(const RadialProfile& p);

/// Solution of the exterior Poisson problem Lap u = f with the rapid-decay
/// normalization: per mode,
///   u = -1/(2l+1) [ r^{-l-1} I2(r) + r^l I1(r) ],
///   I1(r) = Int_r^inf s^{1-l} f ds,
///   I2(r) = Int_c^r  s^{l+2} f ds,  c = 1 if l+1 >= q+beta else infinity,
/// which decays like r^{-q-beta} ("forbidding the low harmonics").
class PoissonSolution {
public:
    PoissonSolution(const RadialProfile& source, int q, double beta);

    int q() const { return q_; }
    double beta() const { return beta_; }
    const RadialProfile& source() const { return *source_; }

    /// Radial value/derivatives of solution mode k.
    double mode_value(int k, double r) const;
    double mode_d1(int k, double r) const;
    double mode_d2(int k, double r) const;
    /// Residual of the radial ODE at (k, r), computed from the integral
    /// representation (vanishes identically; kept as a sanity probe).
    double mode_ode_residual(int k, double r) const;

    /// Full field u(x) = sum u_{lm}(|x|) Y_{lm}(xhat) and its gradient.
    double value(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;

    /// Materializes the solution on the source's radial grid.
    RadialProfile to_profile() const;

private:
    const RadialProfile* source_;
    int q_ = 0;
    double beta_ = 0.0;
    double I1(int k, double r) const;
    double I2(int k, double r) const;
    bool from_infinity(int l) const;
};

PoissonSolution solve_poisson(const RadialProfile& f, int q, double beta);

/// Weighted sup-norm estimate: sup over a deterministic log-spaced radius
/// ladder crossed with grid directions of (1+r)^{exponent+i} |D^i F|,
/// i = 0..order.  `magnitudes[i]` returns |D^i F| at a point.
struct WeightedNormEstimate {
    double exponent = 0.0;
    int order = 0;
    double value = 0.0;
};

WeightedNormEstimate weighted_sup_norm(
    const std::vector<std::function<double(const Vec3&)>>& magnitudes, double exponent,
    int order, double r_max = 100.0, int n_radii = 40, double r_min = 1.0);

/// |u| and |grad u| probes for a Poisson solution.
std::vector<std::function<double(const Vec3&)>> poisson_probe(const PoissonSolution& u);

/// |eta| and |d eta| Frobenius probes for a linearized extension.
std::vector<std::function<double(const Vec3&)>> extension_probe(const LinearizedExtension& e);

}  // namespace qlm

#endif  // QLM_POISSON_HPP_
