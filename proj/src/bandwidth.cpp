#include "bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "influence.hpp"

namespace cpd {

std::vector<double> influence_series(const Sample& sample, const LinearStatistic& f,
                                     DivisorMode mode, double b_n) {
    return influence_statistic_series(sample, f, mode, b_n);
}

double autocovariance(std::span<const double> y, int k) {
    const int n = static_cast<int>(y.size());
    if (n == 0) throw std::invalid_argument("autocovariance: empty series");
    if (k < 0 || k >= n) throw std::invalid_argument("autocovariance: lag out of range");
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double acc = 0.0;
    for (int i = 0; i + k < n; ++i) acc += (y[i] - mean) * (y[i + k] - mean);
    return acc / n;
}

double autocorrelation(std::span<const double> y, int k) {
    const double tau0 = autocovariance(y, 0);
    if (tau0 <= 0.0) throw std::runtime_error("autocorrelation: degenerate (constant) series");
    return autocovariance(y, k) / tau0;
}

double flat_top_lambda(double x) {
    return std::clamp(2.0 * (1.0 - std::abs(x)), 0.0, 1.0);
}

int select_L(std::span<const double> y) {
    const int n = static_cast<int>(y.size());
    if (n < 10) throw std::invalid_argument("select_L: series too short (need n >= 10)");
    const double tau0 = autocovariance(y, 0);
    if (tau0 <= 0.0) throw std::runtime_error("select_L: degenerate (constant) series");

    const double log10n = std::log10(static_cast<double>(n));
    const int window = std::max(5, static_cast<int>(std::ceil(std::sqrt(log10n))));
    const double threshold = 2.0 * std::sqrt(log10n / n);
    const int cap = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + window;

    // Lags beyond the series are treated as zero correlation.
    std::vector<double> rho(cap + window + 1, 0.0);
    for (int k = 0; k < static_cast<int>(rho.size()) && k < n; ++k) {
        rho[k] = autocovariance(y, k) / tau0;
    }

    for (int k = 0; k <= cap; ++k) {
        bool negligible = true;
        for (int j = k + 1; j <= k + window; ++j) {
            if (std::abs(rho[j]) >= threshold) {
                negligible = false;
                break;
            }
        }
        if (negligible) return k;
    }
    return cap;
}

GammaDelta gamma_delta_from_autocovariances(std::span<const double> tau, int L,
                                            const KernelShape& kernel) {
    if (L < 0) throw std::invalid_argument("gamma_delta: L must be nonnegative");
    if (static_cast<int>(tau.size()) < L + 1) {
        throw std::invalid_argument("gamma_delta: need autocovariances for lags 0..L");
    }
    GammaDelta out;
    double weighted_sum = tau[0];
    double curvature_sum = 0.0;
    for (int k = 1; k <= L; ++k) {
        const double lam = flat_top_lambda(static_cast<double>(k) / L);
        weighted_sum += 2.0 * lam * tau[k];
        curvature_sum += 2.0 * lam * static_cast<double>(k) * k * tau[k];
    }
    out.gamma = kernel.phi_second_deriv_at_0() / 2.0 * curvature_sum;
    out.delta = 2.0 * weighted_sum * weighted_sum * kernel.integral_phi_squared();
    return out;
}

double optimal_bandwidth_real(double gamma, double delta, int n) {
    if (!(delta > 0.0)) throw std::invalid_argument("optimal_bandwidth: delta must be positive");
    return std::pow(4.0 * gamma * gamma / delta, 0.2) *
           std::pow(static_cast<double>(n), 0.2);
}

BandwidthEstimate estimate_bandwidth_from_series(std::span<const double> y,
                                                 const KernelShape& kernel) {
    const int n = static_cast<int>(y.size());
    BandwidthEstimate est;
    est.series_length = n;

    if (autocovariance(y, 0) <= 0.0) {
        est.ell_hat = 1;  // constant pilot series carries no lag information
        return est;
    }
    // Flat-top window at twice the detected lag, so every significant lag
    // keeps full weight (lambda(k/L) = 1 for k <= L/2).
    est.L_used = std::min(2 * select_L(y), n - 1);

    std::vector<double> tau(est.L_used + 1);
    for (int k = 0; k <= est.L_used; ++k) tau[k] = autocovariance(y, k);
    const GammaDelta gd = gamma_delta_from_autocovariances(tau, est.L_used, kernel);
    est.gamma_hat = gd.gamma;
    est.delta_hat = gd.delta;

    if (gd.delta <= 0.0) {
        est.ell_hat = 1;
        return est;
    }
    const double raw = optimal_bandwidth_real(gd.gamma, gd.delta, n);
    const int rounded = static_cast<int>(std::floor(raw + 0.5));
    est.ell_hat = std::clamp(rounded, 1, n - 1);
    return est;
}

BandwidthEstimate estimate_bandwidth(const Sample& sample, const LinearStatistic& f,
                                     DivisorMode mode, double b_n, const KernelShape& kernel) {
    return estimate_bandwidth_from_series(influence_series(sample, f, mode, b_n), kernel);
}

}  // namespace cpd
