#include "qlm/jets.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "qlm/errors.hpp"

namespace qlm {

namespace {

// Monomial bookkeeping per order, built once and shared.
struct MonomialTable {
    int order;
    std::vector<std::array<int, 3>> mono;      // index -> (i,j,k)
    std::vector<std::vector<int>> prod;        // prod[a][b] = index of mono sum, -1 if out
    std::vector<std::array<int, 3>> shift_dn;  // derivative target per axis, -1 if none
    std::vector<double> factorial_scale;       // i! j! k! per monomial
    int index3[13][13][13];
};

const MonomialTable& table(int order) {
    static std::map<int, MonomialTable> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    if (order < 0 || order > 12) throw InputError("Jet: order must lie in [0, 12]");
    MonomialTable t;
    t.order = order;
    for (int i = 0; i <= 12; ++i)
        for (int j = 0; j <= 12; ++j)
            for (int k = 0; k <= 12; ++k) t.index3[i][j][k] = -1;
    for (int d = 0; d <= order; ++d)
        for (int i = d; i >= 0; --i)
            for (int j = d - i; j >= 0; --j) {
                int k = d - i - j;
                t.index3[i][j][k] = int(t.mono.size());
                t.mono.push_back({i, j, k});
            }
    const int n = int(t.mono.size());
    t.prod.assign(n, std::vector<int>(n, -1));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int i = t.mono[a][0] + t.mono[b][0];
            int j = t.mono[a][1] + t.mono[b][1];
            int k = t.mono[a][2] + t.mono[b][2];
            if (i + j + k <= order) t.prod[a][b] = t.index3[i][j][k];
        }
    t.shift_dn.assign(n, {-1, -1, -1});
    for (int a = 0; a < n; ++a)
        for (int ax = 0; ax < 3; ++ax) {
            auto m = t.mono[a];
            if (m[ax] == 0) continue;
            --m[ax];
            t.shift_dn[a][ax] = t.index3[m[0]][m[1]][m[2]];
        }
    t.factorial_scale.resize(n);
    auto fact = [](int v) {
        double f = 1;
        for (int i = 2; i <= v; ++i) f *= i;
        return f;
    };
    for (int a = 0; a < n; ++a)
        t.factorial_scale[a] =
            fact(t.mono[a][0]) * fact(t.mono[a][1]) * fact(t.mono[a][2]);
    return cache.emplace(order, std::move(t)).first->second;
}

}  // namespace

int Jet::n_coeffs(int order) { return int(table(order).mono.size()); }

Jet Jet::constant(int order, double v) {
    Jet j(order);
    j.c_[0] = v;
    return j;
}

Jet Jet::variable(int order, int axis, double x0) {
    Jet j(order);
    j.c_[0] = x0;
    if (order >= 1) {
        const auto& t = table(order);
        int idx = axis == 0 ? t.index3[1][0][0]
                            : axis == 1 ? t.index3[0][1][0] : t.index3[0][0][1];
        j.c_[idx] = 1.0;
    }
    return j;
}

double Jet::coeff(int i, int j, int k) const {
    const auto& t = table(order_);
    int idx = t.index3[i][j][k];
    if (idx < 0) throw InputError("Jet::coeff: monomial beyond the trust order");
    return c_[idx];
}

double& Jet::coeff_ref(int i, int j, int k) {
    const auto& t = table(order_);
    int idx = t.index3[i][j][k];
    if (idx < 0) throw InputError("Jet::coeff_ref: monomial beyond the trust order");
    return c_[idx];
}

double Jet::deriv(int i, int j, int k) const {
    const auto& t = table(order_);
    int idx = t.index3[i][j][k];
    if (idx < 0) throw InputError("Jet::deriv: derivative beyond the trust order");
    return c_[idx] * t.factorial_scale[idx];
}

Jet Jet::truncated_to(int order) const {
    if (order == order_) return *this;
    Jet out(order);
    const auto& to = table(order);
    for (size_t a = 0; a < to.mono.size(); ++a) {
        auto m = to.mono[a];
        out.c_[a] = coeff(m[0], m[1], m[2]);
    }
    return out;
}

Jet Jet::derivative(int axis) const {
    if (order_ < 1) throw InputError("Jet::derivative: order exhausted");
    const auto& t = table(order_);
    Jet out(order_ - 1);
    const auto& to = table(order_ - 1);
    for (size_t a = 0; a < t.mono.size(); ++a) {
        int target = t.shift_dn[a][axis];
        if (target < 0) continue;
        auto m = t.mono[target];
        if (m[0] + m[1] + m[2] > order_ - 1) continue;
        int oidx = to.index3[m[0]][m[1]][m[2]];
        out.c_[oidx] += c_[a] * t.mono[a][axis];
    }
    return out;
}

Jet Jet::operator-() const {
    Jet out = *this;
    for (auto& v : out.c_) v = -v;
    return out;
}

Jet& Jet::operator+=(const Jet& o) {
    if (o.order_ < order_) *this = truncated_to(o.order_);
    const Jet rhs = (o.order_ > order_) ? o.truncated_to(order_) : o;
    for (size_t a = 0; a < c_.size(); ++a) c_[a] += rhs.c_[a];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    if (o.order_ < order_) *this = truncated_to(o.order_);
    const Jet rhs = (o.order_ > order_) ? o.truncated_to(order_) : o;
    for (size_t a = 0; a < c_.size(); ++a) c_[a] -= rhs.c_[a];
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    int order = std::min(a.order_, b.order_);
    Jet x = a.truncated_to(order), y = b.truncated_to(order);
    const auto& t = table(order);
    Jet out(order);
    const int n = int(t.mono.size());
    for (int p = 0; p < n; ++p) {
        if (x.c_[p] == 0.0) continue;
        for (int q = 0; q < n; ++q) {
            int r = t.prod[p][q];
            if (r >= 0) out.c_[r] += x.c_[p] * y.c_[q];
        }
    }
    return out;
}

Jet operator*(double a, Jet b) {
    for (auto& v : b.c_) v *= a;
    return b;
}

Jet operator+(Jet a, double b) {
    a.c_[0] += b;
    return a;
}

Jet operator-(Jet a, double b) {
    a.c_[0] -= b;
    return a;
}

Jet Jet::compose_series(const std::vector<double>& series) const {
    // series[k] = f^{(k)}(value)/k!; evaluates f(this) by Horner in the
    // nilpotent part w = this - value.
    Jet w = *this;
    w.c_[0] = 0.0;
    Jet acc = Jet::constant(order_, series[order_]);
    for (int k = order_ - 1; k >= 0; --k) {
        acc = acc * w;
        acc.c_[0] += series[k];
    }
    return acc;
}

Jet Jet::recip() const {
    double u = value();
    if (u == 0.0) throw SolverError("Jet::recip: zero value");
    std::vector<double> s(order_ + 1);
    double p = 1.0 / u;
    for (int k = 0; k <= order_; ++k) {
        s[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
        p /= u;
    }
    return compose_series(s);
}

Jet Jet::pow(double alpha) const {
    double u = value();
    if (u <= 0.0) throw SolverError("Jet::pow: non-positive value");
    std::vector<double> s(order_ + 1);
    double binom = 1.0;
    for (int k = 0; k <= order_; ++k) {
        s[k] = binom * std::pow(u, alpha - k);
        binom *= (alpha - k) / (k + 1.0);
    }
    return compose_series(s);
}

Jet Jet::sqrt() const { return pow(0.5); }

Jet Jet::exp() const {
    double e = std::exp(value());
    std::vector<double> s(order_ + 1);
    double f = 1.0;
    for (int k = 0; k <= order_; ++k) {
        s[k] = e / f;
        f *= (k + 1.0);
    }
    return compose_series(s);
}

}  // namespace qlm
