#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sample.hpp"

namespace cpd::detail {

/// Per-window quantities shared by the split statistics and the multiplier
/// replicates. prods holds, for each row i, the products
/// prod_{j in S} (1 - U_ij) for every subset mask S (slot 0 = empty = 1);
/// phi is their columnwise mean, so phi[mask] = phi_A of the window.
struct WindowData {
    int m = 0;
    int d = 0;
    std::vector<double> pobs;   // m x d scaled maximal ranks
    std::vector<int> sort_idx;  // d x m; sort_idx[j*m + r] = row of r-th smallest entry of column j
    std::vector<double> prods;  // m x 2^d
    std::vector<double> phi;    // 2^d, phi[0] = 1

    // scratch, reused across windows by the same caller
    std::vector<double> column_;
    std::vector<int> idx_;
    std::vector<int> ranks_;
};

void compute_window(const Sample& sample, int first, int last, DivisorMode mode, WindowData& w);

/// Scratch buffers for the influence sweep.
struct InfluenceScratch {
    std::vector<double> weights;     // reduced-set products in column-sorted order
    std::vector<double> suffix_c;    // suffix sums of weights
    std::vector<double> suffix_cv;   // suffix sums of weights * value
};

/// Smoothed influence values I_{b, C_w, A}(U_i) for every row i of the
/// window and every nonempty subset A. out is m x 2^d row-major with slot 0
/// unused. One pass per (subset, member) pair over the column-sorted order,
/// O(d 2^(d-1) m) after the per-window sort.
void compute_influence(const WindowData& w, double b, InfluenceScratch& scratch,
                       std::vector<double>& out);

/// Same restricted to the given subset masks (slots of other subsets are
/// left unset); statistics with sparse coefficients skip dead subsets.
void compute_influence(const WindowData& w, double b, std::span<const unsigned> masks,
                       InfluenceScratch& scratch, std::vector<double>& out);

/// Indicator (unsmoothed) variant; internal, used for b -> 0 checks.
void compute_influence_indicator(const WindowData& w, InfluenceScratch& scratch,
                                 std::vector<double>& out);

/// Total (row, subset) influence cells evaluated by this process. Replicates
/// must reuse precomputed tables, so the count is independent of the number
/// of multiplier replicates.
std::uint64_t influence_cells_computed();

}  // namespace cpd::detail
