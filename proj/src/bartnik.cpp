#include "qlm/bartnik.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qlm/errors.hpp"

namespace qlm {

BartnikData::BartnikData(SphereSymTensorField g, SphereScalarField h)
    : gamma(std::move(g)), H(std::move(h)) {
    if (!(*gamma.grid == H.grid())) throw InputError("BartnikData: mismatched grids");
    for (int k = 0; k < gamma.grid->n_nodes(); ++k) {
        double det = gamma.tt[k] * gamma.pp[k] - gamma.tp[k] * gamma.tp[k];
        if (!(det > 0.0) || !(gamma.tt[k] > 0.0))
            throw InputError("BartnikData: gamma is not positive definite at a grid node");
    }
}

SphereSymTensorField BartnikData::deviation_metric() const {
    SphereSymTensorField om = gamma;
    for (auto& v : om.tt) v -= 1.0;
    for (auto& v : om.pp) v -= 1.0;
    return om;
}

SphereScalarField BartnikData::deviation_H() const {
    std::vector<double> s = H.samples();
    for (auto& v : s) v += 2.0;
    return SphereScalarField(H.grid(), s);
}

BartnikData BartnikData::round(const GridSpec& grid) {
    SphereSymTensorField g(grid);
    for (auto& v : g.tt) v = 1.0;
    for (auto& v : g.pp) v = 1.0;
    return BartnikData(std::move(g), SphereScalarField::constant(grid, -2.0));
}

double sobolev_surrogate(const ShCoeffs& c, int order) {
    double s = 0.0;
    for (int l = 0; l <= c.band_limit; ++l) {
        double w = std::pow(1.0 + l, 2 * order + 2);
        for (int m = -l; m <= l; ++m) s += w * std::norm(c.at(l, m));
    }
    return std::sqrt(s);
}

std::pair<NormSurrogate, NormSurrogate> data_norms(const BartnikData& data) {
    const GridSpec& grid = data.grid();
    SphereSymTensorField om = data.deviation_metric();
    double s2 = 0.0;
    for (const auto* comp : {&om.tt, &om.tp, &om.pp}) {
        double v = sobolev_surrogate(analyze(grid, *comp), 4);
        s2 += v * v;
    }
    NormSurrogate ng{4, std::sqrt(s2)};
    NormSurrogate nh{3, sobolev_surrogate(data.deviation_H().coeffs(), 3)};
    return {ng, nh};
}

double data_epsilon(const BartnikData& data) {
    auto [ng, nh] = data_norms(data);
    return ng.value + nh.value;
}

double hawking_mass(const BartnikData& data) {
    const GridSpec& grid = data.grid();
    double area = 0.0, h2 = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i) {
        double ra = 0.0, rh = 0.0;
        for (int j = 0; j < grid.n_phi(); ++j) {
            int k = grid.node_index(i, j);
            double det = data.gamma.tt[k] * data.gamma.pp[k] - data.gamma.tp[k] * data.gamma.tp[k];
            if (!(det > 0.0))
                throw InputError("hawking_mass: gamma is not positive definite");
            double dA = std::sqrt(det);  // gamma measure relative to the round one
            double H = data.H.samples()[k];
            ra += dA;
            rh += H * H * dA;
        }
        area += grid.weight(i) * ra;
        h2 += grid.weight(i) * rh;
    }
    area *= grid.d_phi();
    h2 *= grid.d_phi();
    const double pi16 = 16.0 * std::numbers::pi;
    return std::sqrt(area / pi16) * (1.0 - h2 / pi16);
}

double first_order_mass(const BartnikData& data) {
    const GridSpec& grid = data.grid();
    double s = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i) {
        double row = 0.0;
        for (int j = 0; j < grid.n_phi(); ++j) {
            int k = grid.node_index(i, j);
            double tr = data.gamma.tt[k] + data.gamma.pp[k];
            row += 6.0 + 2.0 * data.H.samples()[k] - tr;
        }
        s += grid.weight(i) * row;
    }
    return s * grid.d_phi() / (16.0 * std::numbers::pi);
}

BartnikData preset_schwarzschild(double m, const GridSpec& grid) {
    if (std::abs(m) >= 1.0)
        throw InputError("preset_schwarzschild: |m| must be < 1 (unit sphere must stay "
                         "away from the horizon)");
    double conf = std::pow(1.0 + 0.5 * m, 4);
    double H = -2.0 * (1.0 - 0.5 * m) / std::pow(1.0 + 0.5 * m, 3);
    SphereSymTensorField g(grid);
    for (auto& v : g.tt) v = conf;
    for (auto& v : g.pp) v = conf;
    return BartnikData(std::move(g), SphereScalarField::constant(grid, H));
}

namespace {

// Deterministic gaussians: Box-Muller over mt19937_64, identical on every
// platform (std::normal_distribution is implementation-defined).
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        have_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    double uniform() {
        // in (0,1]; avoids log(0)
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    bool have_ = false;
    double spare_ = 0.0;
};

void fill_random_coeffs(ShCoeffs& c, Gaussian& gauss, int lmin, int lmax, int sobolev_order) {
    for (int l = lmin; l <= std::min(lmax, c.band_limit); ++l) {
        double w = std::pow(1.0 + l, -(sobolev_order + 1.0));
        for (int m = 0; m <= l; ++m) {
            double re = gauss(), im = (m == 0) ? 0.0 : gauss();
            c.at(l, m) = w * cplx(re, im);
        }
    }
    c.symmetrize();
}

}  // namespace

namespace {

double tensor_surrogate4(const SphereSymTensorField& om) {
    double s2 = 0.0;
    for (const auto* comp : {&om.tt, &om.tp, &om.pp}) {
        double v = sobolev_surrogate(analyze(*om.grid, *comp), 4);
        s2 += v * v;
    }
    return std::sqrt(s2);
}

}  // namespace

DeviationDirection random_deviation(const GridSpec& grid, std::uint64_t seed) {
    Gaussian gauss(seed * 0x9e3779b97f4a7c15ULL + 1);
    const int L = grid.band_limit();
    // Trace part over l <= 4, vector potentials over 2 <= l <= 4, H part l <= 3,
    // with Sobolev pre-whitening per mode, then the three blocks balanced to
    // equal surrogate weight.  This keeps the grid amplitude near epsilon/30,
    // large enough for residual scans to sit above the FD noise floor.
    ShCoeffs hc(L, true);
    fill_random_coeffs(hc, gauss, 0, 4, 4);
    TangentField W(L);
    fill_random_coeffs(W.grad_pot, gauss, 2, 4, 4);
    fill_random_coeffs(W.curl_pot, gauss, 2, 4, 4);
    ShCoeffs kc(L, true);
    fill_random_coeffs(kc, gauss, 0, 3, 3);

    SphereSymTensorField trace_part = trace_tensor(SphereScalarField(grid, hc));
    SphereSymTensorField vec_part = lie_derivative_round(grid, W);
    trace_part *= 1.0 / tensor_surrogate4(trace_part);
    vec_part *= 1.0 / tensor_surrogate4(vec_part);

    ShCoeffs kn = kc;
    double ks = sobolev_surrogate(kc, 3);
    for (auto& z : kn.c) z /= ks;

    SphereSymTensorField omega = std::move(trace_part);
    omega += vec_part;
    return DeviationDirection{std::move(omega), SphereScalarField(grid, kn)};
}

BartnikData perturb_round(const DeviationDirection& dir, double t) {
    const GridSpec& grid = *dir.omega.grid;
    SphereSymTensorField g = dir.omega;
    g *= t;
    for (auto& v : g.tt) v += 1.0;
    for (auto& v : g.pp) v += 1.0;
    std::vector<double> h = dir.kappa.samples();
    for (auto& v : h) v = -2.0 + t * v;
    return BartnikData(std::move(g), SphereScalarField(grid, h));
}

double deviation_epsilon(const DeviationDirection& dir) {
    const GridSpec& grid = *dir.omega.grid;
    double s2 = 0.0;
    for (const auto* comp : {&dir.omega.tt, &dir.omega.tp, &dir.omega.pp}) {
        double v = sobolev_surrogate(analyze(grid, *comp), 4);
        s2 += v * v;
    }
    return std::sqrt(s2) + sobolev_surrogate(dir.kappa.coeffs(), 3);
}

BartnikData random_bartnik_data(const GridSpec& grid, double epsilon, std::uint64_t seed) {
    DeviationDirection dir = random_deviation(grid, seed);
    return perturb_round(dir, epsilon / deviation_epsilon(dir));
}

}  // namespace qlm
