#include "window_pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <bit>

#include "subsets.hpp"

namespace cpd::detail {

namespace {
std::atomic<std::uint64_t> g_influence_cells{0};
}

std::uint64_t influence_cells_computed() { return g_influence_cells.load(); }

void compute_window(const Sample& sample, int first, int last, DivisorMode mode, WindowData& w) {
    const int m = last - first + 1;
    const int d = sample.cols();
    const int nmask = 1 << d;
    w.m = m;
    w.d = d;
    w.pobs.resize(static_cast<std::size_t>(m) * d);
    w.sort_idx.resize(static_cast<std::size_t>(d) * m);
    w.prods.resize(static_cast<std::size_t>(m) * nmask);
    w.phi.assign(nmask, 0.0);
    w.column_.resize(m);

    const double divisor = mode == DivisorMode::Theory ? m : m + 1;
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < m; ++i) w.column_[i] = sample(first - 1 + i, j);
        column_ranks(w.column_, w.idx_, w.ranks_);
        for (int i = 0; i < m; ++i) {
            w.pobs[static_cast<std::size_t>(i) * d + j] = w.ranks_[i] / divisor;
        }
        std::copy(w.idx_.begin(), w.idx_.end(), w.sort_idx.begin() + static_cast<std::size_t>(j) * m);
    }

    for (int i = 0; i < m; ++i) {
        double* p = w.prods.data() + static_cast<std::size_t>(i) * nmask;
        const double* u = w.pobs.data() + static_cast<std::size_t>(i) * d;
        p[0] = 1.0;
        for (int mask = 1; mask < nmask; ++mask) {
            const int low = mask & -mask;
            const int j = std::countr_zero(static_cast<unsigned>(mask));
            p[mask] = p[mask ^ low] * (1.0 - u[j]);
        }
        for (int mask = 1; mask < nmask; ++mask) w.phi[mask] += p[mask];
    }
    for (int mask = 1; mask < nmask; ++mask) w.phi[mask] /= m;
    w.phi[0] = 1.0;
}

namespace {

// Shared sweep over one (subset, member) pair. Emits, for each row in
// column-j-sorted order, the window-measure integral of the reduced-set
// product against either the ramp L_b or the indicator, and subtracts the
// average from out.
template <bool Smoothed>
void subtract_column_term(const WindowData& w, int j, unsigned mask, double b,
                          InfluenceScratch& s, std::vector<double>& out) {
    const int m = w.m;
    const int d = w.d;
    const int nmask = 1 << d;
    const unsigned reduced = mask ^ (1u << j);
    const int* idx = w.sort_idx.data() + static_cast<std::size_t>(j) * m;

    s.weights.resize(m);
    s.suffix_c.resize(m + 1);
    s.suffix_cv.resize(m + 1);
    for (int r = 0; r < m; ++r) {
        s.weights[r] = w.prods[static_cast<std::size_t>(idx[r]) * nmask + reduced];
    }
    s.suffix_c[m] = 0.0;
    s.suffix_cv[m] = 0.0;
    for (int r = m - 1; r >= 0; --r) {
        const double v = w.pobs[static_cast<std::size_t>(idx[r]) * d + j];
        s.suffix_c[r] = s.suffix_c[r + 1] + s.weights[r];
        s.suffix_cv[r] = s.suffix_cv[r + 1] + s.weights[r] * v;
    }

    auto value_at = [&](int r) { return w.pobs[static_cast<std::size_t>(idx[r]) * d + j]; };

    if constexpr (Smoothed) {
        int lo = 0;  // first r with value > x_minus
        int hi = 0;  // first r with value >= x_plus
        for (int r = 0; r < m; ++r) {
            const double x = value_at(r);
            const double xm = std::max(x - b, 0.0);
            const double xp = std::min(x + b, 1.0);
            while (lo < m && value_at(lo) <= xm) ++lo;
            while (hi < m && value_at(hi) < xp) ++hi;
            const double ramp =
                (s.suffix_cv[lo] - s.suffix_cv[hi]) - xm * (s.suffix_c[lo] - s.suffix_c[hi]);
            const double q = s.suffix_c[hi] + ramp / (xp - xm);
            out[static_cast<std::size_t>(idx[r]) * nmask + mask] -= q / m;
        }
    } else {
        int lo = 0;  // first r with value >= x
        for (int r = 0; r < m; ++r) {
            const double x = value_at(r);
            while (lo < m && value_at(lo) < x) ++lo;
            out[static_cast<std::size_t>(idx[r]) * nmask + mask] -= s.suffix_c[lo] / m;
        }
    }
}

template <bool Smoothed>
void compute_influence_impl(const WindowData& w, double b, std::span<const unsigned> masks,
                            InfluenceScratch& scratch, std::vector<double>& out) {
    const int nmask = 1 << w.d;
    out.resize(static_cast<std::size_t>(w.m) * nmask);
    for (unsigned mask : masks) {
        for (int i = 0; i < w.m; ++i) {
            out[static_cast<std::size_t>(i) * nmask + mask] =
                w.prods[static_cast<std::size_t>(i) * nmask + mask];
        }
        for (int j = 0; j < w.d; ++j) {
            if (mask & (1u << j)) subtract_column_term<Smoothed>(w, j, mask, b, scratch, out);
        }
    }
    g_influence_cells.fetch_add(static_cast<std::uint64_t>(w.m) * masks.size(),
                                std::memory_order_relaxed);
}

std::vector<unsigned> all_masks(int d) {
    std::vector<unsigned> masks(subset_count(d));
    for (std::size_t a = 0; a < masks.size(); ++a) masks[a] = static_cast<unsigned>(a + 1);
    return masks;
}

}  // namespace

void compute_influence(const WindowData& w, double b, InfluenceScratch& scratch,
                       std::vector<double>& out) {
    compute_influence_impl<true>(w, b, all_masks(w.d), scratch, out);
}

void compute_influence(const WindowData& w, double b, std::span<const unsigned> masks,
                       InfluenceScratch& scratch, std::vector<double>& out) {
    compute_influence_impl<true>(w, b, masks, scratch, out);
}

void compute_influence_indicator(const WindowData& w, InfluenceScratch& scratch,
                                 std::vector<double>& out) {
    compute_influence_impl<false>(w, 0.0, all_masks(w.d), scratch, out);
}

}  // namespace cpd::detail
