#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sample.hpp"
#include "subsets.hpp"

namespace cpd {

/// Linear functional f(x) = coeffs . x on subset-indexed vectors of length
/// 2^d - 1 (canonical bitmask order, see subsets.hpp).
struct LinearStatistic {
    std::string name;
    int d = 0;
    std::vector<double> coeffs;
};

enum class BuiltinStatistic { Rho1, Rho2, Rho3 };

/// The three built-in coefficient vectors:
///   rho1: (d+1) 2^d / (2^d - d - 1) on the full set, 0 elsewhere;
///   rho2: the same constant times (-1)^|A| on every subset;
///   rho3: 24 / (d (d-1)) on every two-element subset.
/// Each turns the split process into the maximally selected difference of
/// the matching multivariate Spearman coefficient.
LinearStatistic builtin_statistic(BuiltinStatistic which, int d);

LinearStatistic builtin_statistic(const std::string& name, int d);

/// phi_A = mean over rows of prod_{j in A} (1 - U_ij); equals the integral
/// of the empirical copula of the window over u^A.
double phi_subset(const PseudoObs& pobs, SubsetMask a);

/// phi_A for every nonempty A at once (canonical order).
std::vector<double> phi_all_subsets(const PseudoObs& pobs);

/// Multivariate Spearman coefficients of a subsample.
double rho1(const PseudoObs& pobs);
double rho2(const PseudoObs& pobs);  // rho1 of the survival copula
double rho3(const PseudoObs& pobs);  // average pairwise rho1

struct StatisticTrajectory {
    std::vector<double> values;  // |f(T_n(k/n))| for k = 1..n-1
    int argmax_k = 1;            // smallest maximizing split
    double max_value = 0.0;      // the statistic S_{n,f}
};

/// The subset-indexed split process: for each split k in 1..n-1 the vector
///   sqrt(n) (k/n) ((n-k)/n) { phi_A(C_{1:k}) - phi_A(C_{k+1:n}) }
/// over nonempty subsets A in canonical order.
std::vector<std::vector<double>> t_process(const Sample& sample, DivisorMode mode);

/// Maximally selected |f(T_n(k/n))| for a linear f.
StatisticTrajectory statistic(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                              unsigned threads = 1);

/// Same with an arbitrary continuous f on the subset vector.
StatisticTrajectory statistic(const Sample& sample,
                              const std::function<double(std::span<const double>)>& f,
                              DivisorMode mode, unsigned threads = 1);

}  // namespace cpd
