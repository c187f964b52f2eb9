#pragma once

#include <span>
#include <string>
#include <vector>

namespace cpd {

/// Divisor used when scaling maximal ranks into (0, 1):
/// Theory divides by the subsample size m, Simulation by m + 1.
enum class DivisorMode { Theory, Simulation };

/// Contiguous subsample [first, last], 1-based inclusive on both ends.
struct Window {
    int first = 1;
    int last = 1;

    int size() const { return last - first + 1; }
};

/// An n x d block of real observations, rows indexed by time.
/// All entries must be finite, n >= 2 and d >= 2.
class Sample {
public:
    Sample(std::vector<double> data, int n, int d);

    int rows() const { return n_; }
    int cols() const { return d_; }

    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * d_ + j]; }

    std::span<const double> raw() const { return data_; }

    /// Full-sample window [1, n].
    Window full_window() const { return Window{1, n_}; }

    std::vector<std::string> column_names;  // optional, filled by CSV ingestion

private:
    std::vector<double> data_;  // row-major
    int n_ = 0;
    int d_ = 0;
};

/// Scaled maximal ranks of a subsample, one row per observation in the
/// window, entries in (0, 1] under Theory and (0, 1) under Simulation.
struct PseudoObs {
    int m = 0;
    int d = 0;
    DivisorMode mode = DivisorMode::Simulation;
    std::vector<double> values;  // m x d row-major

    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * d + j]; }
};

/// Maximal ranks within the window: entry (i, j) counts observations t in
/// the window with X_tj <= X_ij, so tied values share the larger rank.
/// Returned row-major, m x d, ranks in {1, ..., m}.
std::vector<int> maximal_ranks(const Sample& sample, Window window);

PseudoObs pseudo_observations(const Sample& sample, Window window, DivisorMode mode);

/// Empirical copula of the window at u: the fraction of pseudo-observations
/// componentwise <= u.
double empirical_copula(const PseudoObs& pobs, std::span<const double> u);

/// Entrywise negation; reverses all within-column orderings.
Sample negate(const Sample& sample);

namespace detail {
/// Ranks of one column of values; idx is scratch and returns the ordering
/// of the column by value (used by callers that also need sorted access).
void column_ranks(std::span<const double> column, std::vector<int>& idx, std::vector<int>& ranks);
}  // namespace detail

}  // namespace cpd
