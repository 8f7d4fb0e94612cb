#pragma once

// Chebyshev series on [0, 1] (argument mapped to s = 2*lambda - 1): values,
// derivatives, antiderivatives, products, and synthetic division by linear
// factors.  Backs the collocation machinery of the ruled-surface solver.

#include <cstddef>
#include <functional>
#include <vector>

namespace hcsck::cheb {

struct Series {
    std::vector<double> c; // coefficients of T_j(2*lambda - 1)

    int degree() const { return static_cast<int>(c.size()) - 1; }
    double operator()(double lambda) const;
    double eval_s(double s) const; // Clenshaw in the native variable
};

// Chebyshev-Lobatto points on [0,1], ascending, size m+1
std::vector<double> lobatto_nodes(int m);
// interior Chebyshev-Gauss points on [0,1], ascending, size n
std::vector<double> gauss_nodes(int n);

// interpolation through the Lobatto values (DCT-I, direct sum)
Series from_lobatto_values(const std::vector<double>& values);
Series from_function(const std::function<double(double)>& f, int degree);
// interpolation through interior Gauss values, degree n-1
Series from_gauss_values(const std::vector<double>& values);

Series derivative(const Series& a);
// antiderivative vanishing at lambda0
Series antiderivative(const Series& a, double lambda0);
double integrate01(const Series& a);

Series add(const Series& a, const Series& b);
Series scale(const Series& a, double s);
Series multiply(const Series& a, const Series& b);
// multiply by the polynomial lambda(1-lambda)
Series times_lambda_one_minus(const Series& a);

struct DivisionResult {
    Series quotient;
    double remainder; // value of the numerator at the divided-out root
};
// divide by (lambda - lambda0); exact coefficient recurrence
DivisionResult divide_linear(const Series& a, double lambda0);

} // namespace hcsck::cheb
