#include "qlm/metrics.hpp"

#include <cmath>

#include "qlm/errors.hpp"

namespace qlm {

Mat3 AmbientMetric::value(const Vec3& p) const {
    JetMat3 j = eval(p, 0);
    Mat3 g;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) g[a][b] = j[a][b].value();
    return g;
}

namespace {

JetMat3 conformal_jets(const Jet& factor) {
    JetMat3 g;
    Jet zero(factor.order());
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) g[a][b] = (a == b) ? factor : zero;
    return g;
}

std::array<Jet, 3> coords(const Vec3& p, int order) {
    return {Jet::variable(order, 0, p[0]), Jet::variable(order, 1, p[1]),
            Jet::variable(order, 2, p[2])};
}

}  // namespace

AmbientMetric ambient_euclidean() {
    AmbientMetric m;
    m.name = "euclidean";
    m.validity_radius = [](const Vec3&) { return 1e30; };
    m.eval = [](const Vec3&, int order) {
        JetMat3 g;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                g[a][b] = Jet::constant(order, a == b ? 1.0 : 0.0);
        return g;
    };
    return m;
}

AmbientMetric ambient_constant_curvature(double K) {
    AmbientMetric m;
    m.name = K == 1.0 ? "s3" : "constant-curvature";
    m.validity_radius = [K](const Vec3& p) {
        if (K >= 0.0) return 1e30;
        double chart = 2.0 / std::sqrt(-K);
        double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        return 0.9 * (chart - r);
    };
    m.eval = [K](const Vec3& p, int order) {
        auto x = coords(p, order);
        Jet r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        Jet den = (0.25 * K) * r2 + 1.0;
        Jet f = (den * den).recip();
        return conformal_jets(f);
    };
    return m;
}

AmbientMetric ambient_conformal(std::vector<PolyTerm> phi, std::string name) {
    AmbientMetric m;
    m.name = std::move(name);
    m.validity_radius = [](const Vec3&) { return 1e30; };
    m.eval = [phi = std::move(phi)](const Vec3& p, int order) {
        auto x = coords(p, order);
        Jet s(order);
        for (const auto& t : phi) {
            Jet term = Jet::constant(order, t.coef);
            for (int a = 0; a < t.i; ++a) term = term * x[0];
            for (int a = 0; a < t.j; ++a) term = term * x[1];
            for (int a = 0; a < t.k; ++a) term = term * x[2];
            s += term;
        }
        return conformal_jets((2.0 * s).exp());
    };
    return m;
}

AmbientMetric ambient_conformal_quartic(double c) {
    // |x|^4 = (x^2 + y^2 + z^2)^2 expanded into monomials
    std::vector<PolyTerm> phi;
    int pw[3][3] = {{4, 0, 0}, {0, 4, 0}, {0, 0, 4}};
    for (auto& w : pw) phi.push_back({c, w[0], w[1], w[2]});
    phi.push_back({2 * c, 2, 2, 0});
    phi.push_back({2 * c, 2, 0, 2});
    phi.push_back({2 * c, 0, 2, 2});
    AmbientMetric m = ambient_conformal(std::move(phi), "conformal-quartic");
    return m;
}

AmbientMetric ambient_schwarzschild_isotropic(double m_mass, double rho0) {
    if (rho0 <= std::abs(m_mass) / 2.0 + 0.1)
        throw InputError("ambient_schwarzschild_isotropic: expansion point too close "
                         "to the horizon");
    AmbientMetric m;
    m.name = "schwarzschild";
    m.center = {rho0, 0.0, 0.0};
    m.validity_radius = [m_mass](const Vec3& p) {
        double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        return 0.75 * (r - std::abs(m_mass) / 2.0);
    };
    m.eval = [m_mass](const Vec3& p, int order) {
        auto x = coords(p, order);
        Jet r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        Jet rinv = r2.pow(-0.5);
        Jet conf = (0.5 * m_mass) * rinv + 1.0;
        Jet c2 = conf * conf;
        return conformal_jets(c2 * c2);
    };
    return m;
}

AmbientMetric ambient_preset(const std::string& name,
                             const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "euclidean") return ambient_euclidean();
    if (name == "s3") return ambient_constant_curvature(1.0);
    if (name == "constant-curvature") return ambient_constant_curvature(get("K", 1.0));
    if (name == "conformal-quartic") return ambient_conformal_quartic(get("c", 1.0));
    if (name == "schwarzschild")
        return ambient_schwarzschild_isotropic(get("m", 0.1), get("rho0", 2.0));
    throw InputError("unknown metric preset: " + name);
}

AmbientMetric fd_jet_metric(std::function<Mat3(const Vec3&)> g, std::string name,
                            double validity, double base_step) {
    AmbientMetric m;
    m.name = std::move(name);
    m.max_jet_order = 4;
    m.validity_radius = [validity](const Vec3&) { return validity; };
    m.eval = [g = std::move(g), base_step](const Vec3& p, int order) {
        if (order > 4)
            throw InputError("fd_jet_metric: derivative data beyond order 4 unavailable");
        // Nested 2nd-order central differences, one Richardson pass, with the
        // step laddered down as the order grows.
        std::function<double(std::function<double(const Vec3&)>, const Vec3&,
                             std::array<int, 3>, double)>
            diff = [&](std::function<double(const Vec3&)> f, const Vec3& x,
                       std::array<int, 3> alpha, double h) -> double {
            int axis = alpha[0] > 0 ? 0 : alpha[1] > 0 ? 1 : alpha[2] > 0 ? 2 : -1;
            if (axis < 0) return f(x);
            auto a2 = alpha;
            --a2[axis];
            auto d1 = [&](double step) {
                Vec3 xp = x, xm = x;
                xp[axis] += step;
                xm[axis] -= step;
                return (diff(f, xp, a2, h) - diff(f, xm, a2, h)) / (2.0 * step);
            };
            return (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
        };
        JetMat3 out;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                Jet jab(order);
                auto comp = [&, a, b](const Vec3& y) { return g(y)[a][b]; };
                for (int i = 0; i <= order; ++i)
                    for (int j = 0; i + j <= order; ++j)
                        for (int k = 0; i + j + k <= order; ++k) {
                            int tot = i + j + k;
                            double h = base_step * std::pow(0.55, std::max(0, tot - 1));
                            double fact = 1.0;
                            for (int q = 2; q <= i; ++q) fact *= q;
                            for (int q = 2; q <= j; ++q) fact *= q;
                            for (int q = 2; q <= k; ++q) fact *= q;
                            jab.coeff_ref(i, j, k) =
                                diff(comp, p, {i, j, k}, h) / fact;
                        }
                out[a][b] = jab;
                out[b][a] = jab;
            }
        return out;
    };
    return m;
}

}  // namespace qlm
