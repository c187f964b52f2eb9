#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multiplier.hpp"
#include "sample.hpp"
#include "spearman.hpp"

namespace cpd {

struct BootstrapOptions {
    int replicates = 1000;  // M
    MultiplierKind kind = MultiplierKind::Iid;
    int ell = 1;      // dependence window, Dependent only
    double b_n = 0.0; // smoothing bandwidth, required in (0, 1)
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct BootstrapResult {
    StatisticTrajectory observed;
    std::vector<double> replicate_values;  // one per multiplier replicate
    double p_value = 1.0;
};

/// One multiplier replicate of the maximally selected statistic: for each
/// split k the prefix and suffix sums
///   S_A(0,k/n)  = n^{-1/2} sum_{i<=k}   (xi_i - mean_{1:k} xi) I_{b,C_{1:k},A}(U_i^{1:k})
///   S_A(k/n,1)  = n^{-1/2} sum_{i>k}    (xi_i - mean_{k+1:n} xi) I_{b,C_{k+1:n},A}(U_i^{k+1:n})
/// are combined into T_A(k/n) = ((n-k)/n) S_A(0,k/n) - (k/n) S_A(k/n,1),
/// and the result is max_k |f(T(k/n))|.
double replicate_statistic(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                           std::span<const double> xi, double b_n);

/// Full bootstrap run: M multiplier replicates (replicate m drawing from
/// RNG stream m) plus the observed statistic, p-value
/// (1/M) sum_m 1(replicate_m >= observed).
BootstrapResult bootstrap_test(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                               const BootstrapOptions& options);

}  // namespace cpd
