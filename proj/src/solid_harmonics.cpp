#include "qlm/solid_harmonics.hpp"

#include <cmath>

#include "qlm/errors.hpp"
#include "qlm/grid.hpp"

namespace qlm {

namespace {

ShCoeffs ladder_plus(const ShCoeffs& c) {
    ShCoeffs out(c.band_limit + 1, c.real_field);
    for (int l = 0; l <= c.band_limit; ++l) {
        for (int m = -l; m <= l; ++m) {
            double a = std::sqrt((l + m + 1.0) * (l + m + 2.0) / ((2.0 * l + 1) * (2.0 * l + 3)));
            out.at(l + 1, m + 1) += (2.0 * l + 1) * a * c.at(l, m);
        }
    }
    return out;
}

ShCoeffs ladder_minus(const ShCoeffs& c) {
    ShCoeffs out(c.band_limit + 1, c.real_field);
    for (int l = 0; l <= c.band_limit; ++l) {
        for (int m = -l; m <= l; ++m) {
            double a = std::sqrt((l - m + 1.0) * (l - m + 2.0) / ((2.0 * l + 1) * (2.0 * l + 3)));
            out.at(l + 1, m - 1) -= (2.0 * l + 1) * a * c.at(l, m);
        }
    }
    return out;
}

}  // namespace

ShCoeffs ladder_derivative(const ShCoeffs& c, int axis) {
    if (axis == 2) {
        ShCoeffs out(c.band_limit + 1, c.real_field);
        for (int l = 0; l <= c.band_limit; ++l) {
            for (int m = -l; m <= l; ++m) {
                double a = std::sqrt(((l + 1.0) * (l + 1) - double(m) * m) /
                                     ((2.0 * l + 1) * (2.0 * l + 3)));
                out.at(l + 1, m) -= (2.0 * l + 1) * a * c.at(l, m);
            }
        }
        return out;
    }
    if (axis != 0 && axis != 1) throw InputError("ladder_derivative: axis must be 0, 1 or 2");
    ShCoeffs p = ladder_plus(c), q = ladder_minus(c);
    ShCoeffs out(c.band_limit + 1, c.real_field);
    if (axis == 0) {
        for (size_t k = 0; k < out.c.size(); ++k) out.c[k] = 0.5 * (p.c[k] + q.c[k]);
    } else {
        for (size_t k = 0; k < out.c.size(); ++k)
            out.c[k] = cplx(0.0, -0.5) * (p.c[k] - q.c[k]);
    }
    return out;
}

ShCoeffs degree_weight(const ShCoeffs& c) {
    ShCoeffs out = c;
    for (int l = 0; l <= c.band_limit; ++l)
        for (int m = -l; m <= l; ++m) out.at(l, m) *= l + 1.0;
    return out;
}

ShCoeffs degree_weight2(const ShCoeffs& c) {
    ShCoeffs out = c;
    for (int l = 0; l <= c.band_limit; ++l)
        for (int m = -l; m <= l; ++m) out.at(l, m) *= (l + 1.0) * (l - 1.0);
    return out;
}

PointHarmonics::PointHarmonics(int lmax, const std::array<double, 3>& x) : lmax_(lmax) {
    r_ = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (!(r_ > 0.0)) throw InputError("PointHarmonics: point at the origin");
    for (int d = 0; d < 3; ++d) xhat_[d] = x[d] / r_;
    double ct = xhat_[2];
    double st = std::sqrt(std::max(0.0, (1.0 - ct) * (1.0 + ct)));
    legendre_table(lmax_, ct, st, pbar_);
    eim_.resize(lmax_ + 1);
    eim_[0] = cplx(1.0, 0.0);
    if (lmax_ >= 1) {
        // e^{i phi} from the Cartesian direction; at the poles st = 0 and all
        // m != 0 terms vanish through Pbar, so the phase there is immaterial.
        cplx e1 = (st > 1e-300) ? cplx(xhat_[0] / st, xhat_[1] / st) : cplx(1.0, 0.0);
        for (int m = 1; m <= lmax_; ++m) eim_[m] = eim_[m - 1] * e1;
    }
    rpow_.resize(lmax_ + 1);
    double w = 1.0 / r_;
    for (int l = 0; l <= lmax_; ++l) {
        rpow_[l] = w;
        w /= r_;
    }
}

double PointHarmonics::angular(const ShCoeffs& c) const {
    if (c.band_limit > lmax_) throw InternalError("PointHarmonics: band limit too high");
    double v = 0.0;
    for (int l = 0; l <= c.band_limit; ++l) {
        v += c.at(l, 0).real() * pbar_[GridSpec::packed_index(l, 0)];
        for (int m = 1; m <= l; ++m)
            v += 2.0 * (c.at(l, m) * eim_[m]).real() * pbar_[GridSpec::packed_index(l, m)];
    }
    return v;
}

double PointHarmonics::exterior(const ShCoeffs& c) const {
    if (c.band_limit > lmax_) throw InternalError("PointHarmonics: band limit too high");
    double v = 0.0;
    for (int l = 0; l <= c.band_limit; ++l) {
        double s = c.at(l, 0).real() * pbar_[GridSpec::packed_index(l, 0)];
        for (int m = 1; m <= l; ++m)
            s += 2.0 * (c.at(l, m) * eim_[m]).real() * pbar_[GridSpec::packed_index(l, m)];
        v += rpow_[l] * s;
    }
    return v;
}

AngularFieldEval::AngularFieldEval(const ShCoeffs& c)
    : c_(c), lc_(degree_weight(c)), l2c_(degree_weight2(c)) {
    for (int d = 0; d < 3; ++d) {
        dc_[d] = ladder_derivative(c_, d);
        dlc_[d] = ladder_derivative(lc_, d);
    }
    for (int d = 0; d < 3; ++d)
        for (int e = d; e < 3; ++e) {
            ddc_[d][e] = ladder_derivative(dc_[d], e);
            ddc_[e][d] = ddc_[d][e];
        }
}

double AngularFieldEval::value(const PointHarmonics& ph) const { return ph.angular(c_); }

std::array<double, 3> AngularFieldEval::gradient(const PointHarmonics& ph) const {
    const auto& xh = ph.xhat();
    double inv_r = 1.0 / ph.r();
    double alc = ph.angular(lc_);
    std::array<double, 3> g;
    for (int d = 0; d < 3; ++d) g[d] = inv_r * (xh[d] * alc + ph.angular(dc_[d]));
    return g;
}

std::array<std::array<double, 3>, 3> AngularFieldEval::hessian(const PointHarmonics& ph) const {
    const auto& xh = ph.xhat();
    double inv_r2 = 1.0 / (ph.r() * ph.r());
    double alc = ph.angular(lc_), al2c = ph.angular(l2c_);
    std::array<double, 3> adl;
    for (int d = 0; d < 3; ++d) adl[d] = ph.angular(dlc_[d]);
    std::array<std::array<double, 3>, 3> h;
    for (int d = 0; d < 3; ++d)
        for (int e = d; e < 3; ++e) {
            double v = xh[e] * xh[d] * al2c + (d == e ? alc : 0.0) + xh[d] * adl[e] +
                       xh[e] * adl[d] + ph.angular(ddc_[d][e]);
            h[d][e] = h[e][d] = inv_r2 * v;
        }
    return h;
}

ExteriorFieldEval::ExteriorFieldEval(const ShCoeffs& c) : c_(c) {
    for (int d = 0; d < 3; ++d) dc_[d] = ladder_derivative(c_, d);
    for (int d = 0; d < 3; ++d)
        for (int e = d; e < 3; ++e) {
            ddc_[d][e] = ladder_derivative(dc_[d], e);
            ddc_[e][d] = ddc_[d][e];
        }
}

double ExteriorFieldEval::value(const PointHarmonics& ph) const { return ph.exterior(c_); }

std::array<double, 3> ExteriorFieldEval::gradient(const PointHarmonics& ph) const {
    return {ph.exterior(dc_[0]), ph.exterior(dc_[1]), ph.exterior(dc_[2])};
}

std::array<std::array<double, 3>, 3> ExteriorFieldEval::hessian(
    const PointHarmonics& ph) const {
    std::array<std::array<double, 3>, 3> h;
    for (int d = 0; d < 3; ++d)
        for (int e = d; e < 3; ++e) h[d][e] = h[e][d] = ph.exterior(ddc_[d][e]);
    return h;
}

}  // namespace qlm
