#pragma once

#include <span>

#include "multiplier.hpp"
#include "sample.hpp"
#include "spearman.hpp"

namespace cpd {

enum class VarianceForm { Iid, Hac };

struct VarianceEstimate {
    double sigma2 = 0.0;  // clamped at 0
    VarianceForm form = VarianceForm::Iid;
    int ell = 0;  // Hac only
    double b_n = 0.0;
};

/// Population-style variance (divisor n) of the centered series.
double iid_variance_of_series(std::span<const double> y);

/// HAC long-run variance with weights phi((i-j)/ell):
/// (1/n) sum_{i,j} phi((i-j)/ell) (y_i - mean)(y_j - mean), computed by lag.
/// phi vanishes outside (-1, 1), so ell = 1 reduces to the plain variance.
/// Clamped below at 0.
double hac_variance_of_series(std::span<const double> y, int ell, const KernelShape& kernel);

/// Variance estimators for the studentized statistic, built from the series
/// y_i = f(I_{b,C_{1:n}}(U_i^{1:n})) of the full-sample smoothed influences.
VarianceEstimate variance_iid(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                              double b_n);
VarianceEstimate variance_hac(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                              double b_n, int ell, const KernelShape& kernel);

/// Survival function of the Kolmogorov distribution, the law of the supremum
/// of the absolute Brownian bridge: P(sup |U| > x).
double kolmogorov_sf(double x);

struct AsymptoticResult {
    StatisticTrajectory observed;
    VarianceEstimate variance;
    double studentized = 0.0;  // S_{n,f} / sigma
    double p_value = 1.0;
};

/// Studentizes the observed statistic by the requested variance estimator
/// and reads the p-value off the Kolmogorov distribution. ell must be
/// resolved (>= 1) when form is Hac. Throws on degenerate variance.
AsymptoticResult asymptotic_test(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                                 double b_n, VarianceForm form, int ell, unsigned threads = 1);

}  // namespace cpd
