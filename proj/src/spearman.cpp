#include "spearman.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "window_pipeline.hpp"

namespace cpd {

namespace {

double rho1_scale(int d) {
    return static_cast<double>(d + 1) / ((1 << d) - d - 1);
}

void require_dimension(int d) {
    if (d < 2) throw std::invalid_argument("statistic requires d >= 2");
}

}  // namespace

LinearStatistic builtin_statistic(BuiltinStatistic which, int d) {
    require_dimension(d);
    const int count = subset_count(d);
    LinearStatistic f;
    f.d = d;
    f.coeffs.assign(count, 0.0);
    const double c1 = (d + 1.0) * (1 << d) / ((1 << d) - d - 1);
    switch (which) {
        case BuiltinStatistic::Rho1:
            f.name = "rho1";
            f.coeffs[full_set(d) - 1] = c1;
            break;
        case BuiltinStatistic::Rho2:
            f.name = "rho2";
            for (SubsetMask mask = 1; mask <= static_cast<SubsetMask>(count); ++mask) {
                const int bits = std::popcount(mask);
                f.coeffs[mask - 1] = (bits % 2 == 0 ? c1 : -c1);
            }
            break;
        case BuiltinStatistic::Rho3:
            f.name = "rho3";
            for (SubsetMask mask = 1; mask <= static_cast<SubsetMask>(count); ++mask) {
                if (std::popcount(mask) == 2) f.coeffs[mask - 1] = 24.0 / (d * (d - 1));
            }
            break;
    }
    return f;
}

LinearStatistic builtin_statistic(const std::string& name, int d) {
    if (name == "rho1") return builtin_statistic(BuiltinStatistic::Rho1, d);
    if (name == "rho2") return builtin_statistic(BuiltinStatistic::Rho2, d);
    if (name == "rho3") return builtin_statistic(BuiltinStatistic::Rho3, d);
    throw std::invalid_argument("unknown statistic '" + name + "' (expected rho1|rho2|rho3)");
}

double phi_subset(const PseudoObs& pobs, SubsetMask a) {
    if (a == 0) throw std::invalid_argument("phi_subset: subset must be nonempty");
    if (a >= (1u << pobs.d)) throw std::invalid_argument("phi_subset: subset out of range");
    double sum = 0.0;
    for (int i = 0; i < pobs.m; ++i) {
        double prod = 1.0;
        for (int j = 0; j < pobs.d; ++j) {
            if (a & (1u << j)) prod *= 1.0 - pobs(i, j);
        }
        sum += prod;
    }
    return sum / pobs.m;
}

std::vector<double> phi_all_subsets(const PseudoObs& pobs) {
    const int d = pobs.d;
    const int nmask = 1 << d;
    std::vector<double> sums(nmask, 0.0);
    std::vector<double> prods(nmask);
    for (int i = 0; i < pobs.m; ++i) {
        prods[0] = 1.0;
        for (int mask = 1; mask < nmask; ++mask) {
            const int low = mask & -mask;
            const int j = std::countr_zero(static_cast<unsigned>(mask));
            prods[mask] = prods[mask ^ low] * (1.0 - pobs(i, j));
        }
        for (int mask = 1; mask < nmask; ++mask) sums[mask] += prods[mask];
    }
    std::vector<double> out(subset_count(d));
    for (int mask = 1; mask < nmask; ++mask) out[mask - 1] = sums[mask] / pobs.m;
    return out;
}

double rho1(const PseudoObs& pobs) {
    require_dimension(pobs.d);
    return rho1_scale(pobs.d) * ((1 << pobs.d) * phi_subset(pobs, full_set(pobs.d)) - 1.0);
}

double rho2(const PseudoObs& pobs) {
    require_dimension(pobs.d);
    // phi of the survival empirical copula: mean over rows of prod_j U_ij.
    double sum = 0.0;
    for (int i = 0; i < pobs.m; ++i) {
        double prod = 1.0;
        for (int j = 0; j < pobs.d; ++j) prod *= pobs(i, j);
        sum += prod;
    }
    return rho1_scale(pobs.d) * ((1 << pobs.d) * (sum / pobs.m) - 1.0);
}

double rho3(const PseudoObs& pobs) {
    require_dimension(pobs.d);
    const int d = pobs.d;
    double sum = 0.0;
    for (int j1 = 0; j1 < d; ++j1) {
        for (int j2 = j1 + 1; j2 < d; ++j2) {
            const SubsetMask pair = (1u << j1) | (1u << j2);
            sum += 3.0 * (4.0 * phi_subset(pobs, pair) - 1.0);
        }
    }
    return sum / (d * (d - 1) / 2);
}

namespace {

// Runs fn(k, phi_prefix, phi_suffix, scale) for k in [k_first, k_last],
// where scale = sqrt(n) (k/n) ((n-k)/n). Window recomputation per split.
template <typename Fn>
void for_each_split(const Sample& sample, DivisorMode mode, int k_first, int k_last, Fn&& fn) {
    const int n = sample.rows();
    detail::WindowData prefix, suffix;
    for (int k = k_first; k <= k_last; ++k) {
        detail::compute_window(sample, 1, k, mode, prefix);
        detail::compute_window(sample, k + 1, n, mode, suffix);
        const double scale = std::sqrt(static_cast<double>(n)) * (static_cast<double>(k) / n) *
                             (static_cast<double>(n - k) / n);
        fn(k, prefix.phi, suffix.phi, scale);
    }
}

template <typename Eval>
StatisticTrajectory trajectory_impl(const Sample& sample, DivisorMode mode, unsigned threads,
                                    Eval&& eval) {
    const int n = sample.rows();
    const int nmask = 1 << sample.cols();
    StatisticTrajectory out;
    out.values.assign(n - 1, 0.0);
    parallel_chunks(static_cast<std::size_t>(n - 1), threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> t(subset_count(sample.cols()));
        for_each_split(sample, mode, static_cast<int>(lo) + 1, static_cast<int>(hi),
                       [&](int k, const std::vector<double>& phi_pre,
                           const std::vector<double>& phi_suf, double scale) {
                           for (int mask = 1; mask < nmask; ++mask) {
                               t[mask - 1] = scale * (phi_pre[mask] - phi_suf[mask]);
                           }
                           out.values[k - 1] = std::abs(eval(t));
                       });
    });
    out.max_value = out.values[0];
    out.argmax_k = 1;
    for (int k = 2; k <= n - 1; ++k) {
        if (out.values[k - 1] > out.max_value) {
            out.max_value = out.values[k - 1];
            out.argmax_k = k;
        }
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> t_process(const Sample& sample, DivisorMode mode) {
    const int n = sample.rows();
    const int nmask = 1 << sample.cols();
    std::vector<std::vector<double>> out(n - 1);
    for_each_split(sample, mode, 1, n - 1,
                   [&](int k, const std::vector<double>& phi_pre,
                       const std::vector<double>& phi_suf, double scale) {
                       auto& t = out[k - 1];
                       t.resize(subset_count(sample.cols()));
                       for (int mask = 1; mask < nmask; ++mask) {
                           t[mask - 1] = scale * (phi_pre[mask] - phi_suf[mask]);
                       }
                   });
    return out;
}

StatisticTrajectory statistic(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                              unsigned threads) {
    if (static_cast<int>(f.coeffs.size()) != subset_count(sample.cols())) {
        throw std::invalid_argument("statistic: coefficient length must be 2^d - 1");
    }
    for (double c : f.coeffs) {
        if (!std::isfinite(c)) throw std::invalid_argument("statistic: coefficients must be finite");
    }
    return trajectory_impl(sample, mode, threads, [&](std::span<const double> t) {
        double dot = 0.0;
        for (std::size_t a = 0; a < t.size(); ++a) dot += f.coeffs[a] * t[a];
        return dot;
    });
}

StatisticTrajectory statistic(const Sample& sample,
                              const std::function<double(std::span<const double>)>& f,
                              DivisorMode mode, unsigned threads) {
    if (!f) throw std::invalid_argument("statistic: callback must be set");
    return trajectory_impl(sample, mode, threads,
                           [&](std::span<const double> t) { return f(t); });
}

}  // namespace cpd
