#include "qlm/poisson.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "qlm/errors.hpp"
#include "qlm/grid.hpp"

namespace qlm {

double RadialGrid::node(int i) const {
    return std::exp(std::log(r_max) * double(i) / double(n - 1));
}

RadialProfile::RadialProfile(int band_limit, double decay_tag, RadialGrid grid)
    : band_limit_(band_limit), decay_tag_(decay_tag), grid_(grid) {
    if (grid_.n < 8) throw InputError("RadialProfile: radial grid too coarse");
}

void RadialProfile::add_power_mode(int l, int m, double coef, double power) {
    if (l > band_limit_ || std::abs(m) > l) throw InputError("RadialProfile: bad mode index");
    RadialMode md;
    md.l = l;
    md.m = m;
    md.pure_power = true;
    md.coef = coef;
    md.power = power;
    modes_.push_back(std::move(md));
    spline_m2_.emplace_back();
}

void RadialProfile::add_sampled_mode(int l, int m, std::vector<double> samples) {
    if (l > band_limit_ || std::abs(m) > l) throw InputError("RadialProfile: bad mode index");
    if (static_cast<int>(samples.size()) != grid_.n)
        throw InputError("RadialProfile: sample count does not match the radial grid");
    RadialMode md;
    md.l = l;
    md.m = m;
    md.samples = std::move(samples);
    modes_.push_back(std::move(md));
    spline_m2_.emplace_back();
}

void RadialProfile::build_spline(int k) const {
    // natural cubic spline of the samples against x = log r (uniform step)
    const auto& s = modes_[k].samples;
    const int n = grid_.n;
    std::vector<double>& m2 = spline_m2_[k];
    m2.assign(n, 0.0);
    const double h = std::log(grid_.r_max) / (n - 1);
    // interior rows: m2[i-1] + 4 m2[i] + m2[i+1] = 6 (second difference)/h^2,
    // with natural ends m2[0] = m2[n-1] = 0
    std::vector<double> b(n, 4.0), d(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) d[i] = 6.0 * (s[i + 1] - 2.0 * s[i] + s[i - 1]) / (h * h);
    for (int i = 2; i + 1 < n; ++i) {
        double w = 1.0 / b[i - 1];
        b[i] -= w;
        d[i] -= w * d[i - 1];
    }
    for (int i = n - 2; i >= 1; --i) m2[i] = (d[i] - m2[i + 1]) / b[i];
}

double RadialProfile::eval_mode(int k, double r) const {
    const RadialMode& md = modes_[k];
    if (md.pure_power) return md.coef * std::pow(r, -md.power);
    if (r >= grid_.r_max) {
        double f_end = md.samples.back();
        return f_end * std::pow(r / grid_.r_max, -decay_tag_);
    }
    if (spline_m2_[k].empty()) build_spline(k);
    const auto& m2 = spline_m2_[k];
    const double h = std::log(grid_.r_max) / (grid_.n - 1);
    double x = std::log(std::max(r, 1.0));
    int i = std::min(int(x / h), grid_.n - 2);
    double t = (x - i * h) / h;
    double s0 = md.samples[i], s1 = md.samples[i + 1];
    return s0 * (1 - t) + s1 * t +
           h * h / 6.0 *
               ((1 - t) * ((1 - t) * (1 - t) - 1.0) * m2[i] + t * (t * t - 1.0) * m2[i + 1]);
}

RadialProfile RadialProfile::power_law(int l, int m, double coef, double power,
                                       double decay_tag, RadialGrid grid) {
    RadialProfile p(std::max(l, 4), decay_tag, grid);
    p.add_power_mode(l, m, coef, power);
    return p;
}

RadialProfile sample_profile(const RadialProfile& p) {
    RadialProfile out(p.band_limit(), p.decay_tag(), p.rgrid());
    for (size_t k = 0; k < p.modes().size(); ++k) {
        const auto& md = p.modes()[k];
        std::vector<double> s(p.rgrid().n);
        for (int i = 0; i < p.rgrid().n; ++i) s[i] = p.eval_mode(int(k), p.rgrid().node(i));
        out.add_sampled_mode(md.l, md.m, std::move(s));
    }
    return out;
}

namespace {

// Int_a^b s^p (coef s^{-w}) ds, closed form; b may be infinite.
double power_integral(double coef, double w, double p, double a, double b) {
    double e = p - w + 1.0;
    if (std::isinf(b)) {
        if (e >= 0.0) throw SolverError("power_integral: divergent tail integral");
        return -coef * std::pow(a, e) / e;
    }
    if (std::abs(e) < 1e-14) return coef * std::log(b / a);
    return coef * (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace

PoissonSolution::PoissonSolution(const RadialProfile& source, int q, double beta)
    : source_(&source), q_(q), beta_(beta) {
    if (beta <= 0.0 || beta >= 1.0) throw InputError("solve_poisson: beta must lie in (0,1)");
    if (q < 0) throw InputError("solve_poisson: q must be a nonnegative integer");
    if (source.decay_tag() < q + beta + 2.0 - 1e-12)
        throw InputError("solve_poisson: source decay tag is below q + beta + 2");
    for (const auto& md : source.modes()) {
        if (md.pure_power && md.power < q + beta + 2.0 - 1e-12)
            throw InputError("solve_poisson: power-law mode decays slower than its tag");
    }
}

bool PoissonSolution::from_infinity(int l) const { return l + 1.0 < q_ + beta_; }

double PoissonSolution::I1(int k, double r) const {
    const RadialMode& md = source_->modes()[k];
    const double p = 1.0 - md.l;
    if (md.pure_power)
        return power_integral(md.coef, md.power, p, r, std::numeric_limits<double>::infinity());
    const double rmax = source_->rgrid().r_max;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double v = 0.0;
    if (r < rmax) {
        auto f = [&](double s) { return std::pow(s, p) * source_->eval_mode(k, s); };
        v += GK::integrate(f, r, rmax, 12, 1e-13);
    }
    double a = std::max(r, rmax);
    double coef_tail = source_->eval_mode(k, rmax) * std::pow(rmax, source_->decay_tag());
    v += power_integral(coef_tail, source_->decay_tag(), p, a,
                        std::numeric_limits<double>::infinity());
    return v;
}

double PoissonSolution::I2(int k, double r) const {
    const RadialMode& md = source_->modes()[k];
    const double p = md.l + 2.0;
    if (from_infinity(md.l)) {
        // I2 = -Int_r^inf; convergent because the source outruns s^{l+2}
        if (md.pure_power)
            return -power_integral(md.coef, md.power, p, r,
                                   std::numeric_limits<double>::infinity());
        const double rmax = source_->rgrid().r_max;
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        double v = 0.0;
        if (r < rmax) {
            auto f = [&](double s) { return std::pow(s, p) * source_->eval_mode(k, s); };
            v += GK::integrate(f, r, rmax, 12, 1e-13);
        }
        double a = std::max(r, rmax);
        double coef_tail = source_->eval_mode(k, rmax) * std::pow(rmax, source_->decay_tag());
        v += power_integral(coef_tail, source_->decay_tag(), p, a,
                            std::numeric_limits<double>::infinity());
        return -v;
    }
    if (md.pure_power) return power_integral(md.coef, md.power, p, 1.0, r);
    const double rmax = source_->rgrid().r_max;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    auto f = [&](double s) { return std::pow(s, p) * source_->eval_mode(k, s); };
    if (r <= rmax) return GK::integrate(f, 1.0, r, 12, 1e-13);
    double v = GK::integrate(f, 1.0, rmax, 12, 1e-13);
    double coef_tail = source_->eval_mode(k, rmax) * std::pow(rmax, source_->decay_tag());
    return v + power_integral(coef_tail, source_->decay_tag(), p, rmax, r);
}

double PoissonSolution::mode_value(int k, double r) const {
    int l = source_->modes()[k].l;
    return -(std::pow(r, -l - 1.0) * I2(k, r) + std::pow(r, double(l)) * I1(k, r)) /
           (2.0 * l + 1.0);
}

double PoissonSolution::mode_d1(int k, double r) const {
    int l = source_->modes()[k].l;
    return -(-(l + 1.0) * std::pow(r, -l - 2.0) * I2(k, r) +
             l * std::pow(r, l - 1.0) * I1(k, r)) /
           (2.0 * l + 1.0);
}

double PoissonSolution::mode_d2(int k, double r) const {
    int l = source_->modes()[k].l;
    double f = source_->eval_mode(k, r);
    return -((l + 1.0) * (l + 2.0) * std::pow(r, -l - 3.0) * I2(k, r) +
             l * (l - 1.0) * std::pow(r, l - 2.0) * I1(k, r)) /
               (2.0 * l + 1.0) +
           f;
}

double PoissonSolution::mode_ode_residual(int k, double r) const {
    int l = source_->modes()[k].l;
    double u = mode_value(k, r), u1 = mode_d1(k, r), u2 = mode_d2(k, r);
    return u2 + 2.0 / r * u1 - l * (l + 1.0) / (r * r) * u - source_->eval_mode(k, r);
}

namespace {

// Y_{lm} values and theta-derivatives at a single direction.
struct DirectionTables {
    std::vector<double> pbar, pbar_dt;
    std::vector<cplx> eim;
    double ct = 0.0, st = 0.0;
};

DirectionTables direction_tables(int lmax, const Vec3& xh) {
    DirectionTables t;
    t.ct = xh[2];
    t.st = std::sqrt(std::max(0.0, 1.0 - t.ct * t.ct));
    legendre_table_derivs(lmax, t.ct, std::max(t.st, 1e-14), t.pbar, t.pbar_dt);
    t.eim.resize(lmax + 1);
    t.eim[0] = cplx(1.0, 0.0);
    cplx e1 = (t.st > 1e-300) ? cplx(xh[0] / t.st, xh[1] / t.st) : cplx(1.0, 0.0);
    for (int m = 1; m <= lmax; ++m) t.eim[m] = t.eim[m - 1] * e1;
    return t;
}

}  // namespace

double PoissonSolution::value(const Vec3& x) const {
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r < 1.0 - 1e-12) throw InputError("PoissonSolution::value: point inside the unit sphere");
    Vec3 xh{x[0] / r, x[1] / r, x[2] / r};
    DirectionTables t = direction_tables(source_->band_limit(), xh);
    double v = 0.0;
    for (size_t k = 0; k < source_->modes().size(); ++k) {
        const auto& md = source_->modes()[k];
        double y = t.pbar[GridSpec::packed_index(md.l, md.m)];
        double re = (md.m == 0) ? 1.0 : 2.0 * t.eim[md.m].real();
        v += mode_value(int(k), r) * y * re;
    }
    return v;
}

Vec3 PoissonSolution::gradient(const Vec3& x) const {
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r < 1.0 - 1e-12) throw InputError("PoissonSolution::gradient: point inside the unit sphere");
    Vec3 xh{x[0] / r, x[1] / r, x[2] / r};
    DirectionTables t = direction_tables(source_->band_limit(), xh);
    double st = std::max(t.st, 1e-14);
    Vec3 et{t.ct * xh[0] / st, t.ct * xh[1] / st, -st};
    Vec3 ep{-xh[1] / st, xh[0] / st, 0.0};
    Vec3 g{0, 0, 0};
    for (size_t k = 0; k < source_->modes().size(); ++k) {
        const auto& md = source_->modes()[k];
        double u = mode_value(int(k), r), u1 = mode_d1(int(k), r);
        double y = t.pbar[GridSpec::packed_index(md.l, md.m)];
        double yt = t.pbar_dt[GridSpec::packed_index(md.l, md.m)];
        double re = (md.m == 0) ? 1.0 : 2.0 * t.eim[md.m].real();
        double im = (md.m == 0) ? 0.0 : 2.0 * t.eim[md.m].imag();
        double y_val = y * re, y_th = yt * re;
        double y_ph = -md.m * y * im / st;  // (1/sin) d/dphi applied to the real pair
        for (int d = 0; d < 3; ++d)
            g[d] += u1 * xh[d] * y_val + (u / r) * (et[d] * y_th + ep[d] * y_ph);
    }
    return g;
}

RadialProfile PoissonSolution::to_profile() const {
    RadialProfile out(source_->band_limit(), q_ + beta_, source_->rgrid());
    for (size_t k = 0; k < source_->modes().size(); ++k) {
        const auto& md = source_->modes()[k];
        std::vector<double> s(out.rgrid().n);
        for (int i = 0; i < out.rgrid().n; ++i) s[i] = mode_value(int(k), out.rgrid().node(i));
        out.add_sampled_mode(md.l, md.m, std::move(s));
    }
    return out;
}

PoissonSolution solve_poisson(const RadialProfile& f, int q, double beta) {
    return PoissonSolution(f, q, beta);
}

WeightedNormEstimate weighted_sup_norm(
    const std::vector<std::function<double(const Vec3&)>>& magnitudes, double exponent,
    int order, double r_max, int n_radii, double r_min) {
    if (order + 1 > static_cast<int>(magnitudes.size()))
        throw InputError("weighted_sup_norm: no magnitude probe for the requested order");
    WeightedNormEstimate est;
    est.exponent = exponent;
    est.order = order;
    GridSpec dirs(4);
    for (int k = 0; k < n_radii; ++k) {
        double t = n_radii == 1 ? 0.0 : double(k) / (n_radii - 1);
        double r = r_min * std::pow(r_max / r_min, t);
        for (int i = 0; i < dirs.n_theta(); ++i) {
            double ct = dirs.cos_theta(i), st = dirs.sin_theta(i);
            for (int j = 0; j < dirs.n_phi(); j += 2) {
                double cp = std::cos(dirs.phi(j)), sp = std::sin(dirs.phi(j));
                Vec3 x{r * st * cp, r * st * sp, r * ct};
                for (int io = 0; io <= order; ++io) {
                    double w = std::pow(1.0 + r, exponent + io);
                    est.value = std::max(est.value, w * magnitudes[io](x));
                }
            }
        }
    }
    return est;
}

std::vector<std::function<double(const Vec3&)>> poisson_probe(const PoissonSolution& u) {
    return {[&u](const Vec3& x) { return std::abs(u.value(x)); },
            [&u](const Vec3& x) {
                Vec3 g = u.gradient(x);
                return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
            }};
}

std::vector<std::function<double(const Vec3&)>> extension_probe(const LinearizedExtension& e) {
    return {[&e](const Vec3& x) {
                FieldSample s = e.eval(x);
                double f = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) f += s.eta[a][b] * s.eta[a][b];
                return std::sqrt(f);
            },
            [&e](const Vec3& x) {
                FieldSample s = e.eval(x);
                double f = 0.0;
                for (int c = 0; c < 3; ++c)
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) f += s.deta[c][a][b] * s.deta[c][a][b];
                return std::sqrt(f);
            }};
}

}  // namespace qlm
