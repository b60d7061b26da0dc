#ifndef QLM_JETS_HPP_
#define QLM_JETS_HPP_

#include <array>
#include <vector>

namespace qlm {

/// Truncated multivariate Taylor polynomial in three variables around a base
/// point: value plus all partial derivatives through total degree `order`,
/// propagated exactly (to roundoff) through arithmetic and composition.
/// `order` is the trust level: operations return the minimum order of their
/// inputs, and derivative() lowers it by one.
class Jet {
public:
    Jet() : order_(0), c_(1, 0.0) {}
    explicit Jet(int order) : order_(order), c_(n_coeffs(order), 0.0) {}

    static Jet constant(int order, double v);
    /// The coordinate function x_axis, expanded at base value x0.
    static Jet variable(int order, int axis, double x0);

    int order() const { return order_; }
    double value() const { return c_[0]; }
    /// Partial derivative d^{i+j+k} f / dx^i dy^j dz^k at the base point.
    double deriv(int i, int j, int k) const;
    /// Taylor coefficient of monomial (i,j,k).
    double coeff(int i, int j, int k) const;
    double& coeff_ref(int i, int j, int k);

    /// Exact derivative along an axis; trust order drops by one.
    Jet derivative(int axis) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator*(double a, Jet b);
    friend Jet operator+(Jet a, double b);
    friend Jet operator-(Jet a, double b);

    /// Composition with smooth univariate functions of the value.
    Jet recip() const;
    Jet sqrt() const;
    Jet exp() const;
    Jet pow(double alpha) const;

    static int n_coeffs(int order);

private:
    int order_;
    std::vector<double> c_;
    Jet truncated_to(int order) const;
    Jet compose_series(const std::vector<double>& series) const;
};

}  // namespace qlm

#endif  // QLM_JETS_HPP_
