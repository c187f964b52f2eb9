#include "sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cpd {

Sample::Sample(std::vector<double> data, int n, int d) : data_(std::move(data)), n_(n), d_(d) {
    if (n_ < 2) throw std::invalid_argument("Sample: need at least 2 observations");
    if (d_ < 2) throw std::invalid_argument("Sample: need at least 2 components");
    if (d_ > 12) throw std::invalid_argument("Sample: dimension too large (subset vectors hold 2^d - 1 entries)");
    if (data_.size() != static_cast<std::size_t>(n_) * d_) {
        throw std::invalid_argument("Sample: data size does not match n x d");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Sample: entries must be finite");
    }
}

namespace {

void check_window(const Sample& sample, Window w) {
    if (w.first < 1 || w.last > sample.rows() || w.first > w.last) {
        throw std::out_of_range("window [" + std::to_string(w.first) + ", " +
                                std::to_string(w.last) + "] out of bounds for n = " +
                                std::to_string(sample.rows()));
    }
}

}  // namespace

namespace detail {

void column_ranks(std::span<const double> column, std::vector<int>& idx, std::vector<int>& ranks) {
    const int m = static_cast<int>(column.size());
    idx.resize(m);
    ranks.resize(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return column[a] < column[b]; });
    // Walk runs of equal values; every member of a run gets the run's end
    // position + 1, which is exactly the maximal rank.
    int r = 0;
    while (r < m) {
        int e = r;
        while (e + 1 < m && column[idx[e + 1]] == column[idx[r]]) ++e;
        for (int t = r; t <= e; ++t) ranks[idx[t]] = e + 1;
        r = e + 1;
    }
}

}  // namespace detail

std::vector<int> maximal_ranks(const Sample& sample, Window window) {
    check_window(sample, window);
    const int m = window.size();
    const int d = sample.cols();
    std::vector<int> out(static_cast<std::size_t>(m) * d);
    std::vector<double> column(m);
    std::vector<int> idx, ranks;
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < m; ++i) column[i] = sample(window.first - 1 + i, j);
        detail::column_ranks(column, idx, ranks);
        for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i) * d + j] = ranks[i];
    }
    return out;
}

PseudoObs pseudo_observations(const Sample& sample, Window window, DivisorMode mode) {
    const std::vector<int> ranks = maximal_ranks(sample, window);
    const int m = window.size();
    const int d = sample.cols();
    const double divisor = mode == DivisorMode::Theory ? m : m + 1;
    PseudoObs pobs;
    pobs.m = m;
    pobs.d = d;
    pobs.mode = mode;
    pobs.values.resize(ranks.size());
    for (std::size_t t = 0; t < ranks.size(); ++t) pobs.values[t] = ranks[t] / divisor;
    return pobs;
}

double empirical_copula(const PseudoObs& pobs, std::span<const double> u) {
    if (static_cast<int>(u.size()) != pobs.d) {
        throw std::invalid_argument("empirical_copula: point dimension mismatch");
    }
    for (double v : u) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("empirical_copula: point must lie in [0,1]^d");
        }
    }
    int count = 0;
    for (int i = 0; i < pobs.m; ++i) {
        bool below = true;
        for (int j = 0; j < pobs.d; ++j) {
            if (pobs(i, j) > u[j]) {
                below = false;
                break;
            }
        }
        count += below;
    }
    return static_cast<double>(count) / pobs.m;
}

Sample negate(const Sample& sample) {
    std::vector<double> data(sample.raw().begin(), sample.raw().end());
    for (double& v : data) v = -v;
    Sample out(std::move(data), sample.rows(), sample.cols());
    out.column_names = sample.column_names;
    return out;
}

}  // namespace cpd
