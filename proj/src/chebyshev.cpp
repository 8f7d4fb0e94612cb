#include "hcsck/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hcsck::cheb {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Series::eval_s(double s) const {
    if (c.empty()) return 0.0;
    // Clenshaw recurrence
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
        const double b0 = 2.0 * s * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return s * b1 - b2 + c[0];
}

double Series::operator()(double lambda) const { return eval_s(2.0 * lambda - 1.0); }

std::vector<double> lobatto_nodes(int m) {
    std::vector<double> x(m + 1);
    for (int k = 0; k <= m; ++k) x[k] = 0.5 * (1.0 - std::cos(kPi * k / m));
    return x;
}

std::vector<double> gauss_nodes(int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = 0.5 * (1.0 - std::cos(kPi * (2.0 * i + 1.0) / (2.0 * n)));
    return x;
}

Series from_lobatto_values(const std::vector<double>& values) {
    const int m = static_cast<int>(values.size()) - 1;
    if (m < 1) throw std::invalid_argument("from_lobatto_values: need >= 2 samples");
    // values are ordered by ascending lambda = (1 - cos(pi k / m)) / 2, i.e.
    // s_k = -cos(pi k / m); fold the sign into the cosine sum index
    Series out;
    out.c.assign(m + 1, 0.0);
    for (int j = 0; j <= m; ++j) {
        double acc = 0.0;
        for (int k = 0; k <= m; ++k) {
            const double w = (k == 0 || k == m) ? 0.5 : 1.0;
            // T_j(-cos(pi k/m)) = (-1)^j cos(j k pi / m)
            acc += w * values[k] * std::cos(kPi * j * k / m);
        }
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        out.c[j] = sign * 2.0 * acc / m;
    }
    out.c[0] *= 0.5;
    out.c[m] *= 0.5;
    return out;
}

Series from_function(const std::function<double(double)>& f, int degree) {
    const auto nodes = lobatto_nodes(degree);
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = f(nodes[i]);
    return from_lobatto_values(vals);
}

Series from_gauss_values(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    Series out;
    out.c.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            // s_i = -cos(pi (2i+1) / (2n))
            const double ang = kPi * j * (2.0 * i + 1.0) / (2.0 * n);
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            acc += values[i] * sign * std::cos(ang);
        }
        out.c[j] = 2.0 * acc / n;
    }
    out.c[0] *= 0.5;
    return out;
}

Series derivative(const Series& a) {
    const int n = a.degree();
    Series out;
    if (n <= 0) {
        out.c.assign(1, 0.0);
        return out;
    }
    out.c.assign(n, 0.0);
    // standard recurrence in s, then chain rule d/dlambda = 2 d/ds
    std::vector<double> d(n + 2, 0.0);
    for (int j = n; j >= 1; --j) d[j - 1] = d[j + 1] + 2.0 * j * a.c[j];
    d[0] *= 0.5;
    for (int j = 0; j < n; ++j) out.c[j] = 2.0 * d[j];
    return out;
}

Series antiderivative(const Series& a, double lambda0) {
    const int n = a.degree();
    Series out;
    out.c.assign(n + 2, 0.0);
    // antiderivative in s, scaled by dlambda = ds / 2
    for (int j = 1; j <= n + 1; ++j) {
        double val;
        if (j == 1) {
            val = a.c[0] - (n >= 2 ? 0.5 * a.c[2] : 0.0);
        } else {
            const double hi = (j + 1 <= n) ? a.c[j + 1] : 0.0;
            val = (a.c[j - 1] - hi) / (2.0 * j);
        }
        out.c[j] = 0.5 * val;
    }
    out.c[0] = 0.0;
    out.c[0] = -out(lambda0);
    return out;
}

double integrate01(const Series& a) {
    // only even modes contribute: int_{-1}^{1} T_j ds = 2 / (1 - j^2), j even
    double acc = 0.0;
    for (int j = 0; j <= a.degree(); j += 2)
        acc += a.c[j] * 2.0 / (1.0 - static_cast<double>(j) * j);
    return 0.5 * acc;
}

Series add(const Series& a, const Series& b) {
    Series out;
    out.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
    for (std::size_t j = 0; j < a.c.size(); ++j) out.c[j] += a.c[j];
    for (std::size_t j = 0; j < b.c.size(); ++j) out.c[j] += b.c[j];
    return out;
}

Series scale(const Series& a, double s) {
    Series out = a;
    for (double& x : out.c) x *= s;
    return out;
}

Series multiply(const Series& a, const Series& b) {
    // product via values on a Lobatto grid that resolves the total degree
    const int deg = std::max(1, a.degree() + b.degree());
    const auto nodes = lobatto_nodes(deg);
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = a(nodes[i]) * b(nodes[i]);
    return from_lobatto_values(vals);
}

Series times_lambda_one_minus(const Series& a) {
    Series poly;
    poly.c = {0.125, 0.0, -0.125}; // lambda(1-lambda) = (1 - s^2)/4
    return multiply(a, poly);
}

DivisionResult divide_linear(const Series& a, double lambda0) {
    // divide by (s - s0)/2 with s0 = 2*lambda0 - 1, i.e. by (lambda - lambda0)
    const double s0 = 2.0 * lambda0 - 1.0;
    const int n = a.degree();
    DivisionResult res;
    if (n < 1) {
        res.quotient.c.assign(1, 0.0);
        res.remainder = a.c.empty() ? 0.0 : a.c[0];
        return res;
    }
    std::vector<double> b(n + 2, 0.0); // quotient coefficients in s
    b[n - 1] = 2.0 * a.c[n];
    for (int m = n - 1; m >= 2; --m) b[m - 1] = 2.0 * a.c[m] + 2.0 * s0 * b[m] - b[m + 1];
    const double b2 = n >= 2 ? b[2] : 0.0;
    b[0] = a.c[1] + s0 * b[1] - 0.5 * b2;
    res.remainder = a.c[0] - 0.5 * b[1] + s0 * b[0];
    res.quotient.c.assign(b.begin(), b.begin() + n);
    // (lambda - lambda0) = (s - s0)/2: quotient doubles
    for (double& x : res.quotient.c) x *= 2.0;
    return res;
}

} // namespace hcsck::cheb
