#pragma once

#include <span>
#include <vector>

#include "sample.hpp"
#include "spearman.hpp"
#include "subsets.hpp"

namespace cpd {

/// Linear ramp replacing the indicator 1(u <= v): with u+ = min(u + b, 1)
/// and u- = max(u - b, 0), returns (min(u+, v) - min(u-, v)) / (u+ - u-).
/// Zero for v <= u-, one for v >= u+, linear in between.
double smoothing_weight(double u, double v, double b);

/// Smoothed influence I_{b, C_w, A}(u) of the window's empirical copula:
///   prod_{l in A} (1 - u_l)
///     - (1/m) sum_i sum_{j in A} prod_{l in A \ {j}} (1 - U_il) L_b(u_j, U_ij).
double smoothed_influence(const PseudoObs& pobs, SubsetMask a, std::span<const double> u,
                          double b);

/// smoothed_influence stacked over every nonempty subset, canonical order.
std::vector<double> influence_vector(const PseudoObs& pobs, std::span<const double> u, double b);

/// The series y_i = f(I_{b, C_{1:n}}(U_i^{1:n})), i = 1..n, evaluated at the
/// full-sample pseudo-observations. Uncentered. This is the input of both
/// the variance estimators and the bandwidth selector.
std::vector<double> influence_statistic_series(const Sample& sample, const LinearStatistic& f,
                                               DivisorMode mode, double b);

namespace detail {
/// Unsmoothed variant with the plain indicator; kept for b -> 0 checks.
double indicator_influence(const PseudoObs& pobs, SubsetMask a, std::span<const double> u);
}  // namespace detail

}  // namespace cpd
