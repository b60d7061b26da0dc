#include "qlm/grid.hpp"

#include <cmath>
#include <numbers>

#include "qlm/errors.hpp"

namespace qlm {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int mid = (n + 1) / 2;
    for (int k = 0; k < mid; ++k) {
        // Chebyshev-like initial guess, then Newton on P_n(x).
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // One more residual evaluation at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int l = 2; l <= n; ++l) {
            double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[k] = -x;  // ascending order
        nodes[n - 1 - k] = x;
        weights[k] = weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

// Three-term recurrences for the orthonormal Pbar, stable to l of a few hundred.
//   Pbar_{00} = 1/sqrt(4 pi)
//   Pbar_{mm} = -sqrt((2m+1)/(2m)) sin(theta) Pbar_{m-1,m-1}
//   Pbar_{m+1,m} = sqrt(2m+3) x Pbar_{mm}
//   Pbar_{lm} = a_{lm} (x Pbar_{l-1,m} - b_{lm} Pbar_{l-2,m}),  l >= m+2
//   a_{lm} = sqrt((4l^2-1)/(l^2-m^2)),  b_{lm} = sqrt(((l-1)^2-m^2)/(4(l-1)^2-1))
void fill_pbar(int lmax, double x, double st, std::vector<double>& pbar) {
    pbar.assign((lmax + 1) * (lmax + 2) / 2, 0.0);
    const double inv_sqrt4pi = 0.5 / std::sqrt(std::numbers::pi);
    pbar[GridSpec::packed_index(0, 0)] = inv_sqrt4pi;
    for (int m = 1; m <= lmax; ++m) {
        pbar[GridSpec::packed_index(m, m)] =
            -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * pbar[GridSpec::packed_index(m - 1, m - 1)];
    }
    for (int m = 0; m < lmax; ++m) {
        pbar[GridSpec::packed_index(m + 1, m)] =
            std::sqrt(2.0 * m + 3.0) * x * pbar[GridSpec::packed_index(m, m)];
    }
    for (int m = 0; m <= lmax; ++m) {
        for (int l = m + 2; l <= lmax; ++l) {
            double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                 (4.0 * double(l - 1) * (l - 1) - 1.0));
            pbar[GridSpec::packed_index(l, m)] =
                a * (x * pbar[GridSpec::packed_index(l - 1, m)] -
                     b * pbar[GridSpec::packed_index(l - 2, m)]);
        }
    }
}

}  // namespace

void legendre_table(int lmax, double x, double sin_theta, std::vector<double>& pbar) {
    fill_pbar(lmax, x, sin_theta, pbar);
}

void legendre_table_derivs(int lmax, double x, double sin_theta,
                           std::vector<double>& pbar, std::vector<double>& pbar_dt) {
    fill_pbar(lmax, x, sin_theta, pbar);
    pbar_dt.assign(pbar.size(), 0.0);
    // d/dtheta Pbar_{lm} = (l x Pbar_{lm} - c_{lm} Pbar_{l-1,m}) / sin(theta),
    // c_{lm} = sqrt((l^2-m^2)(2l+1)/(2l-1)).
    for (int l = 0; l <= lmax; ++l) {
        for (int m = 0; m <= l; ++m) {
            double below = (l > m) ? pbar[GridSpec::packed_index(l - 1, m)] : 0.0;
            double c = (l > 0) ? std::sqrt((double(l) * l - double(m) * m) * (2.0 * l + 1.0) /
                                           (2.0 * l - 1.0))
                               : 0.0;
            pbar_dt[GridSpec::packed_index(l, m)] =
                (l * x * pbar[GridSpec::packed_index(l, m)] - c * below) / sin_theta;
        }
    }
}

GridSpec::GridSpec(int band_limit, int n_theta, int n_phi)
    : band_limit_(band_limit),
      n_theta_(n_theta > 0 ? n_theta : band_limit + 1),
      n_phi_(n_phi > 0 ? n_phi : 2 * band_limit + 1) {
    if (band_limit_ < 4) throw InputError("GridSpec: band limit must be >= 4");
    if (n_theta_ < band_limit_ + 1)
        throw InputError("GridSpec: n_theta must be >= band_limit + 1");
    if (n_phi_ < 2 * band_limit_ + 1)
        throw InputError("GridSpec: n_phi must be >= 2*band_limit + 1");

    gauss_legendre(n_theta_, x_, w_);
    theta_.resize(n_theta_);
    sin_theta_.resize(n_theta_);
    for (int i = 0; i < n_theta_; ++i) {
        theta_[i] = std::acos(x_[i]);
        sin_theta_[i] = std::sqrt(1.0 - x_[i] * x_[i]);
    }
    d_phi_ = 2.0 * std::numbers::pi / n_phi_;
    phi_.resize(n_phi_);
    for (int j = 0; j < n_phi_; ++j) phi_[j] = j * d_phi_;

    pbar_.resize(n_theta_);
    pbar_dt_.resize(n_theta_);
    pbar_dtt_.resize(n_theta_);
    for (int i = 0; i < n_theta_; ++i) {
        legendre_table_derivs(band_limit_, x_[i], sin_theta_[i], pbar_[i], pbar_dt_[i]);
        // Second theta-derivative from the associated Legendre ODE:
        //   Pbar'' = -cot(theta) Pbar' - [l(l+1) - m^2/sin^2] Pbar.
        pbar_dtt_[i].assign(pbar_[i].size(), 0.0);
        double cot = x_[i] / sin_theta_[i];
        double inv_s2 = 1.0 / (sin_theta_[i] * sin_theta_[i]);
        for (int l = 0; l <= band_limit_; ++l) {
            for (int m = 0; m <= l; ++m) {
                int k = packed_index(l, m);
                pbar_dtt_[i][k] =
                    -cot * pbar_dt_[i][k] - (l * (l + 1.0) - m * m * inv_s2) * pbar_[i][k];
            }
        }
    }
}

}  // namespace qlm
