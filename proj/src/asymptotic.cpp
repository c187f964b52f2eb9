#include "asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "influence.hpp"

namespace cpd {

namespace {

constexpr double kDegenerateSigma2 = 1e-12;

std::vector<double> centered(std::span<const double> y) {
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    std::vector<double> out(y.begin(), y.end());
    for (double& v : out) v -= mean;
    return out;
}

}  // namespace

double iid_variance_of_series(std::span<const double> y) {
    if (y.empty()) throw std::invalid_argument("variance: empty series");
    const std::vector<double> yc = centered(y);
    double acc = 0.0;
    for (double v : yc) acc += v * v;
    return acc / y.size();
}

double hac_variance_of_series(std::span<const double> y, int ell, const KernelShape& kernel) {
    if (y.empty()) throw std::invalid_argument("variance: empty series");
    if (ell < 1) throw std::invalid_argument("variance: ell must be positive");
    const int n = static_cast<int>(y.size());
    const std::vector<double> yc = centered(y);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += yc[i] * yc[i];
    for (int h = 1; h <= std::min(ell, n - 1); ++h) {
        const double weight = kernel.phi(static_cast<double>(h) / ell);
        if (weight == 0.0) continue;
        double lag = 0.0;
        for (int i = 0; i + h < n; ++i) lag += yc[i] * yc[i + h];
        acc += 2.0 * weight * lag;
    }
    return std::max(acc / n, 0.0);
}

VarianceEstimate variance_iid(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                              double b_n) {
    const std::vector<double> y = influence_statistic_series(sample, f, mode, b_n);
    return VarianceEstimate{iid_variance_of_series(y), VarianceForm::Iid, 0, b_n};
}

VarianceEstimate variance_hac(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                              double b_n, int ell, const KernelShape& kernel) {
    const std::vector<double> y = influence_statistic_series(sample, f, mode, b_n);
    return VarianceEstimate{hac_variance_of_series(y, ell, kernel), VarianceForm::Hac, ell, b_n};
}

double kolmogorov_sf(double x) {
    if (x < 0.0) throw std::domain_error("kolmogorov_sf: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x >= 1.0) {
        // Tail series 2 sum (-1)^{k-1} exp(-2 k^2 x^2); a few terms suffice.
        double sum = 0.0;
        double sign = 1.0;
        for (int k = 1; k < 1000; ++k) {
            const double term = std::exp(-2.0 * k * k * x * x);
            sum += sign * term;
            sign = -sign;
            if (term < 1e-16) break;
        }
        return std::clamp(2.0 * sum, 0.0, 1.0);
    }
    // Dual theta series for the c.d.f., rapidly convergent for small x.
    const double pi = std::acos(-1.0);
    double cdf = 0.0;
    for (int k = 1; k < 1000; ++k) {
        const double e = (2.0 * k - 1.0) * pi / x;
        const double term = std::exp(-e * e / 8.0);
        cdf += term;
        if (term < 1e-18) break;
    }
    cdf *= std::sqrt(2.0 * pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
}

AsymptoticResult asymptotic_test(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                                 double b_n, VarianceForm form, int ell, unsigned threads) {
    if (!(b_n > 0.0 && b_n < 1.0)) {
        throw std::invalid_argument("asymptotic test: smoothing bandwidth must lie in (0, 1)");
    }
    AsymptoticResult result;
    result.observed = statistic(sample, f, mode, threads);
    result.variance = form == VarianceForm::Iid
                          ? variance_iid(sample, f, mode, b_n)
                          : variance_hac(sample, f, mode, b_n, ell, KernelShape::parzen());
    if (result.variance.sigma2 <= kDegenerateSigma2) {
        throw std::runtime_error("asymptotic test: degenerate variance estimate");
    }
    result.studentized = result.observed.max_value / std::sqrt(result.variance.sigma2);
    result.p_value = kolmogorov_sf(result.studentized);
    return result;
}

}  // namespace cpd
