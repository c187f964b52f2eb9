#pragma once

#include <cmath>
#include <functional>

namespace cpd {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10);

/// Standard normal c.d.f.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Standard normal quantile function (probit).
double normal_quantile(double p);

/// Student t c.d.f. with df degrees of freedom.
double student_t_cdf(double x, double df);

}  // namespace cpd
