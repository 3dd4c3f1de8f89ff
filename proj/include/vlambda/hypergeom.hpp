#pragma once

// Real-parameter generalized hypergeometric series pFq at real arguments.

#include <cstddef>
#include <utility>
#include <vector>

namespace vlambda {

struct HypergeomSpec {
    std::vector<double> upper;
    std::vector<double> lower;
    double argument = 0.0;

    /// Throws Error(invalid_argument) on a lower parameter in {0,-1,-2,...},
    /// p > q+1, or |x| >= 1 (other than x = -1) when p = q+1.
    void validate() const;
};

struct PfqResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    std::size_t terms = 0;
    bool converged = true;
};

/// Series value. Direct summation inside the disk (stop once a term drops
/// below 1e-16 of the sum with a contracting ratio), Euler-accelerated
/// summation at x = -1. Throws Error(non_convergence) when the tail estimate
/// stays above 1e-10.
double pfq_eval(const HypergeomSpec& spec);

/// Same computation without the convergence throw.
PfqResult pfq_eval_detailed(const HypergeomSpec& spec);

double hyp2f1(double a, double b, double c, double x);

/// Rising factorial (a)_n.
double pochhammer(double a, std::size_t n);

/// prod (c_i)_n / (prod (d_j)_n n!) for n = 0..count-1.
std::vector<double> pfq_coefficients(const std::vector<double>& upper,
                                     const std::vector<double>& lower, std::size_t count);

/// int_0^1 ds / (1 - x s^m) by quadrature; equals 2F1(1, 1/m; 1+1/m; x).
double kernel_2f1_integral(double m, double x, double tol = 1e-11);

/// int_0^1 int_0^1 dr ds / (1 - x r^n s^m); equals 3F2(1, 1/n, 1/m; 1+1/n, 1+1/m; x).
double kernel_3f2_integral(double n, double m, double x, double tol = 1e-10);

/// Both sides of 3F2(2,a,b;c,d;z) = (c-1) 3F2(1,a,b;c-1,d;z) - (c-2) 3F2(1,a,b;c,d;z).
std::pair<double, double> contiguous_reduce_3f2(double a, double b, double c, double d, double z);

/// Both sides of b z 2F1(a+1,b+1;c+1;z) = c (2F1(a+1,b;c;z) - 2F1(a,b;c;z)).
std::pair<double, double> gauss_contiguous(double a, double b, double c, double z);

} // namespace vlambda
