#pragma once

#include <span>
#include <vector>

#include "multiplier.hpp"
#include "sample.hpp"
#include "spearman.hpp"

namespace cpd {

struct BandwidthEstimate {
    int ell_hat = 1;
    int L_used = 0;
    double gamma_hat = 0.0;
    double delta_hat = 0.0;
    int series_length = 0;
};

/// The pilot series for bandwidth selection: f applied to the full-sample
/// smoothed influences, uncentered.
std::vector<double> influence_series(const Sample& sample, const LinearStatistic& f,
                                     DivisorMode mode, double b_n);

/// Sample autocovariance (1/n) sum_{i=1}^{n-k} (y_i - mean)(y_{i+k} - mean).
double autocovariance(std::span<const double> y, int k);

/// autocovariance(k) / autocovariance(0); throws on a constant series.
double autocorrelation(std::span<const double> y, int k);

/// Flat-top (trapezoidal) lag window: 1 on |x| <= 1/2, 2(1-|x|) down to 0
/// at |x| = 1, 0 beyond.
double flat_top_lambda(double x);

/// Rule for the pilot truncation lag: with K_n = max(5, ceil(sqrt(log10 n)))
/// and threshold 2 sqrt(log10(n) / n), the smallest k >= 0 such that
/// |autocorrelation(j)| < threshold for all j = k+1 .. k+K_n, capped at
/// ceil(sqrt(n)) + K_n. Requires n >= 10 and a non-constant series.
int select_L(std::span<const double> y);

struct GammaDelta {
    double gamma = 0.0;
    double delta = 0.0;
};

/// Pilot estimates from autocovariances tau[0..L]:
///   gamma = phi''(0)/2 * sum_{k=-L}^{L} lambda(k/L) k^2 tau(|k|)
///   delta = 2 { sum_{k=-L}^{L} lambda(k/L) tau(|k|) }^2 int phi^2.
/// L = 0 uses the lag-0 term alone.
GammaDelta gamma_delta_from_autocovariances(std::span<const double> tau, int L,
                                            const KernelShape& kernel);

/// (4 gamma^2 / delta)^{1/5} n^{1/5}, the mean-square-error-optimal window
/// before rounding. Requires delta > 0.
double optimal_bandwidth_real(double gamma, double delta, int n);

/// Data-driven bandwidth from an arbitrary pilot series: automatic
/// truncation lag, pilot estimates, then the optimal window rounded
/// half-up and clamped to [1, n-1]. A degenerate pilot (delta = 0) yields
/// ell_hat = 1.
BandwidthEstimate estimate_bandwidth_from_series(std::span<const double> y,
                                                 const KernelShape& kernel);

/// The same applied to the influence series of the sample.
BandwidthEstimate estimate_bandwidth(const Sample& sample, const LinearStatistic& f,
                                     DivisorMode mode, double b_n, const KernelShape& kernel);

}  // namespace cpd
