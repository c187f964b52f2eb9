#include "numerics.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <stdexcept>

namespace cpd {

namespace {

double simpson_rule(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_rule(a, fa, m, fm, flm);
    const double right = simpson_rule(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           simpson_recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = simpson_rule(a, fa, b, fb, fm);
    return simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, 40);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile: p must lie in (0, 1)");
    }
    static const boost::math::normal_distribution<double> dist;
    return boost::math::quantile(dist, p);
}

double student_t_cdf(double x, double df) {
    if (!(df > 0.0)) {
        throw std::domain_error("student_t_cdf: df must be positive");
    }
    const boost::math::students_t_distribution<double> dist(df);
    return boost::math::cdf(dist, x);
}

}  // namespace cpd
