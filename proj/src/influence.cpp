#include "influence.hpp"

#include <algorithm>
#include <stdexcept>

#include "window_pipeline.hpp"

namespace cpd {

double smoothing_weight(double u, double v, double b) {
    if (!(b > 0.0)) throw std::invalid_argument("smoothing_weight: b must be positive");
    const double up = std::min(u + b, 1.0);
    const double um = std::max(u - b, 0.0);
    return (std::min(up, v) - std::min(um, v)) / (up - um);
}

namespace {

template <typename Term>
double influence_impl(const PseudoObs& pobs, SubsetMask a, std::span<const double> u,
                      Term&& term) {
    if (a == 0) throw std::invalid_argument("influence: subset must be nonempty");
    if (a >= (1u << pobs.d)) throw std::invalid_argument("influence: subset out of range");
    if (static_cast<int>(u.size()) != pobs.d) {
        throw std::invalid_argument("influence: point dimension mismatch");
    }
    for (double v : u) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("influence: point must lie in [0,1]^d");
        }
    }
    double lead = 1.0;
    for (int l = 0; l < pobs.d; ++l) {
        if (a & (1u << l)) lead *= 1.0 - u[l];
    }
    double integral = 0.0;
    for (int i = 0; i < pobs.m; ++i) {
        for (int j = 0; j < pobs.d; ++j) {
            if (!(a & (1u << j))) continue;
            double prod = 1.0;
            for (int l = 0; l < pobs.d; ++l) {
                if (l != j && (a & (1u << l))) prod *= 1.0 - pobs(i, l);
            }
            integral += prod * term(u[j], pobs(i, j));
        }
    }
    return lead - integral / pobs.m;
}

}  // namespace

double smoothed_influence(const PseudoObs& pobs, SubsetMask a, std::span<const double> u,
                          double b) {
    return influence_impl(pobs, a, u,
                          [b](double x, double v) { return smoothing_weight(x, v, b); });
}

std::vector<double> influence_vector(const PseudoObs& pobs, std::span<const double> u, double b) {
    std::vector<double> out(subset_count(pobs.d));
    for (SubsetMask mask = 1; mask < (1u << pobs.d); ++mask) {
        out[mask - 1] = smoothed_influence(pobs, mask, u, b);
    }
    return out;
}

std::vector<double> influence_statistic_series(const Sample& sample, const LinearStatistic& f,
                                               DivisorMode mode, double b) {
    if (static_cast<int>(f.coeffs.size()) != subset_count(sample.cols())) {
        throw std::invalid_argument("influence series: coefficient length must be 2^d - 1");
    }
    const int n = sample.rows();
    const int nmask = 1 << sample.cols();
    detail::WindowData w;
    detail::compute_window(sample, 1, n, mode, w);
    detail::InfluenceScratch scratch;
    std::vector<double> infl;
    detail::compute_influence(w, b, scratch, infl);
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* row = infl.data() + static_cast<std::size_t>(i) * nmask;
        for (int mask = 1; mask < nmask; ++mask) acc += f.coeffs[mask - 1] * row[mask];
        y[i] = acc;
    }
    return y;
}

namespace detail {

double indicator_influence(const PseudoObs& pobs, SubsetMask a, std::span<const double> u) {
    return influence_impl(pobs, a, u,
                          [](double x, double v) { return x <= v ? 1.0 : 0.0; });
}

}  // namespace detail

}  // namespace cpd
