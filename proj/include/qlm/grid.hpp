#ifndef QLM_GRID_HPP_
#define QLM_GRID_HPP_

#include <memory>
#include <vector>

namespace qlm {

/// Index of mode (l,m) in a flat coefficient array covering 0 <= l <= L, |m| <= l.
inline int mode_index(int l, int m) { return l * (l + 1) + m; }
inline int num_modes(int band_limit) { return (band_limit + 1) * (band_limit + 1); }

/// Product quadrature grid on the unit sphere: Gauss-Legendre nodes in cos(theta)
/// crossed with equispaced phi.  Quadrature is exact for products of spherical
/// harmonics up to degree 2L, so analysis of band-limited fields is exact.
///
/// Precomputes the normalized associated Legendre tables
///   Pbar_{lm}(cos theta_i), with Y_{lm} = Pbar_{lm}(cos theta) e^{i m phi},
/// together with first and second theta-derivatives at the nodes.  Tables are
/// immutable after construction; the class is safe to share across threads.
class GridSpec {
public:
    /// n_theta defaults to L+1 and n_phi to 2L+1, the minimal exact choices.
    explicit GridSpec(int band_limit, int n_theta = 0, int n_phi = 0);

    int band_limit() const { return band_limit_; }
    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }
    int n_nodes() const { return n_theta_ * n_phi_; }
    int node_index(int i, int j) const { return i * n_phi_ + j; }

    double theta(int i) const { return theta_[i]; }
    double cos_theta(int i) const { return x_[i]; }
    double sin_theta(int i) const { return sin_theta_[i]; }
    double weight(int i) const { return w_[i]; }       // Gauss-Legendre weight in x
    double phi(int j) const { return phi_[j]; }
    double d_phi() const { return d_phi_; }
    /// Quadrature weight of node (i,j) against the round area element.
    double node_weight(int i, int /*j*/) const { return w_[i] * d_phi_; }

    /// Pbar tables, indexed [i][packed(l,m)] with m >= 0, packed = l(l+1)/2 + m.
    static int packed_index(int l, int m) { return l * (l + 1) / 2 + m; }
    double pbar(int i, int l, int m) const { return pbar_[i][packed_index(l, m)]; }
    double pbar_dt(int i, int l, int m) const { return pbar_dt_[i][packed_index(l, m)]; }
    double pbar_dtt(int i, int l, int m) const { return pbar_dtt_[i][packed_index(l, m)]; }

    bool operator==(const GridSpec& o) const {
        return band_limit_ == o.band_limit_ && n_theta_ == o.n_theta_ && n_phi_ == o.n_phi_;
    }

    /// Test hook: scales one Gauss weight, breaking quadrature exactness.
    void inject_quadrature_fault(double rel = 1e-6) { w_[n_theta_ / 2] *= 1.0 + rel; }

private:
    int band_limit_, n_theta_, n_phi_;
    std::vector<double> x_, w_;                 // Gauss-Legendre nodes/weights in cos(theta)
    std::vector<double> theta_, sin_theta_, phi_;
    double d_phi_;
    std::vector<std::vector<double>> pbar_, pbar_dt_, pbar_dtt_;
};

/// Gauss-Legendre nodes and weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Fills pbar[packed(l,m)] with Pbar_{lm}(x) for all l <= lmax, 0 <= m <= l.
/// The Condon-Shortley phase is included.  sin_theta = sqrt(1-x^2) is passed in
/// so callers off the Gauss grid can evaluate at arbitrary points.
void legendre_table(int lmax, double x, double sin_theta, std::vector<double>& pbar);

/// Same plus d/dtheta; requires sin_theta > 0.
void legendre_table_derivs(int lmax, double x, double sin_theta,
                           std::vector<double>& pbar, std::vector<double>& pbar_dt);

}  // namespace qlm

#endif  // QLM_GRID_HPP_
