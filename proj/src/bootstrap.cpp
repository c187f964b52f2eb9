#include "bootstrap.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "window_pipeline.hpp"

namespace cpd {

namespace {

struct ActiveCoeffs {
    std::vector<unsigned> masks;
    std::vector<double> coeffs;
};

ActiveCoeffs active_coefficients(const LinearStatistic& f, int d) {
    if (static_cast<int>(f.coeffs.size()) != subset_count(d)) {
        throw std::invalid_argument("bootstrap: coefficient length must be 2^d - 1");
    }
    for (double c : f.coeffs) {
        if (!std::isfinite(c)) throw std::invalid_argument("bootstrap: coefficients must be finite");
    }
    ActiveCoeffs active;
    for (std::size_t a = 0; a < f.coeffs.size(); ++a) {
        if (f.coeffs[a] != 0.0) {
            active.masks.push_back(static_cast<unsigned>(a + 1));
            active.coeffs.push_back(f.coeffs[a]);
        }
    }
    return active;
}

// Influence table of one window, laid out subset-major so the per-replicate
// dot products run over contiguous memory.
struct WindowTable {
    int m = 0;
    std::vector<double> values;  // active.size() x m
    std::vector<double> sums;    // per active subset: sum_i I_A(i)

    void build(const cpd::detail::WindowData& w, const std::vector<double>& infl,
               const ActiveCoeffs& active) {
        m = w.m;
        const int nmask = 1 << w.d;
        const std::size_t na = active.masks.size();
        values.resize(na * m);
        sums.assign(na, 0.0);
        for (std::size_t a = 0; a < na; ++a) {
            const unsigned mask = active.masks[a];
            double* dst = values.data() + a * m;
            double acc = 0.0;
            for (int i = 0; i < m; ++i) {
                const double v = infl[static_cast<std::size_t>(i) * nmask + mask];
                dst[i] = v;
                acc += v;
            }
            sums[a] = acc;
        }
    }
};

// Sweeps splits [k_first, k_last]; for every xi sequence updates its running
// maximum of |f(T(k/n))| and records the observed trajectory values.
void sweep_splits(const Sample& sample, DivisorMode mode, double b_n, const ActiveCoeffs& active,
                  std::span<const std::vector<double>> xis,
                  std::span<const std::vector<double>> xi_cumsums, int k_first, int k_last,
                  std::vector<double>& observed_values, std::vector<double>& replicate_max) {
    const int n = sample.rows();
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const std::size_t na = active.masks.size();
    const std::size_t m_count = xis.size();

    cpd::detail::WindowData wp, ws;
    cpd::detail::InfluenceScratch scratch;
    std::vector<double> infl_p, infl_s;
    WindowTable table_p, table_s;

    for (int k = k_first; k <= k_last; ++k) {
        cpd::detail::compute_window(sample, 1, k, mode, wp);
        cpd::detail::compute_window(sample, k + 1, n, mode, ws);

        const double lambda_pre = static_cast<double>(k) / n;
        const double lambda_suf = static_cast<double>(n - k) / n;
        double observed = 0.0;
        for (std::size_t a = 0; a < na; ++a) {
            const unsigned mask = active.masks[a];
            observed += active.coeffs[a] * (wp.phi[mask] - ws.phi[mask]);
        }
        observed_values[k - 1] = std::abs(sqrt_n * lambda_pre * lambda_suf * observed);

        if (m_count == 0) continue;
        cpd::detail::compute_influence(wp, b_n, active.masks, scratch, infl_p);
        cpd::detail::compute_influence(ws, b_n, active.masks, scratch, infl_s);
        table_p.build(wp, infl_p, active);
        table_s.build(ws, infl_s, active);

        for (std::size_t m = 0; m < m_count; ++m) {
            const double* xi = xis[m].data();
            const double* cum = xi_cumsums[m].data();
            const double mean_pre = cum[k] / k;
            const double mean_suf = (cum[n] - cum[k]) / (n - k);
            double value = 0.0;
            for (std::size_t a = 0; a < na; ++a) {
                const double* ip = table_p.values.data() + a * table_p.m;
                const double* is = table_s.values.data() + a * table_s.m;
                double dot_p = 0.0;
                for (int i = 0; i < k; ++i) dot_p += xi[i] * ip[i];
                double dot_s = 0.0;
                for (int i = 0; i < n - k; ++i) dot_s += xi[k + i] * is[i];
                const double s_pre = (dot_p - mean_pre * table_p.sums[a]) / sqrt_n;
                const double s_suf = (dot_s - mean_suf * table_s.sums[a]) / sqrt_n;
                value += active.coeffs[a] * (lambda_suf * s_pre - lambda_pre * s_suf);
            }
            replicate_max[m] = std::max(replicate_max[m], std::abs(value));
        }
    }
}

std::vector<double> cumulative_sum(const std::vector<double>& xi) {
    std::vector<double> out(xi.size() + 1, 0.0);
    for (std::size_t i = 0; i < xi.size(); ++i) out[i + 1] = out[i] + xi[i];
    return out;
}

void check_b_n(double b_n) {
    if (!(b_n > 0.0 && b_n < 1.0)) {
        throw std::invalid_argument("bootstrap: smoothing bandwidth must lie in (0, 1)");
    }
}

}  // namespace

double replicate_statistic(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                           std::span<const double> xi, double b_n) {
    check_b_n(b_n);
    const int n = sample.rows();
    if (static_cast<int>(xi.size()) != n) {
        throw std::invalid_argument("replicate_statistic: multiplier length must equal n");
    }
    const ActiveCoeffs active = active_coefficients(f, sample.cols());
    std::vector<std::vector<double>> xis(1, std::vector<double>(xi.begin(), xi.end()));
    std::vector<std::vector<double>> cums(1, cumulative_sum(xis[0]));
    std::vector<double> observed(n - 1, 0.0);
    std::vector<double> repl_max(1, 0.0);
    sweep_splits(sample, mode, b_n, active, xis, cums, 1, n - 1, observed, repl_max);
    return repl_max[0];
}

BootstrapResult bootstrap_test(const Sample& sample, const LinearStatistic& f, DivisorMode mode,
                               const BootstrapOptions& options) {
    check_b_n(options.b_n);
    if (options.replicates < 1) {
        throw std::invalid_argument("bootstrap: need at least one replicate");
    }
    const int n = sample.rows();
    const ActiveCoeffs active = active_coefficients(f, sample.cols());
    const KernelShape& kernel = KernelShape::parzen();

    const std::size_t m_count = static_cast<std::size_t>(options.replicates);
    std::vector<std::vector<double>> xis(m_count);
    std::vector<std::vector<double>> cums(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        RngStream rng(options.seed, static_cast<std::uint64_t>(m));
        xis[m] = options.kind == MultiplierKind::Iid
                     ? iid_multipliers(n, rng).xi
                     : dependent_multipliers(n, options.ell, kernel, rng).xi;
        cums[m] = cumulative_sum(xis[m]);
    }

    const unsigned threads =
        options.threads == 0 ? default_thread_count() : options.threads;
    std::vector<double> observed_values(n - 1, 0.0);
    std::vector<double> replicate_max(m_count, 0.0);
    if (threads <= 1) {
        sweep_splits(sample, mode, options.b_n, active, xis, cums, 1, n - 1, observed_values,
                     replicate_max);
    } else {
        std::vector<std::vector<double>> partial(threads);
        std::vector<std::pair<std::size_t, std::size_t>> ranges(threads);
        std::atomic<unsigned> slot{0};
        parallel_chunks(static_cast<std::size_t>(n - 1), threads,
                        [&](std::size_t lo, std::size_t hi) {
                            const unsigned s = slot.fetch_add(1);
                            partial[s].assign(m_count, 0.0);
                            sweep_splits(sample, mode, options.b_n, active, xis, cums,
                                         static_cast<int>(lo) + 1, static_cast<int>(hi),
                                         observed_values, partial[s]);
                        });
        for (const auto& part : partial) {
            for (std::size_t m = 0; m < part.size(); ++m) {
                replicate_max[m] = std::max(replicate_max[m], part[m]);
            }
        }
    }

    BootstrapResult result;
    result.observed.values = std::move(observed_values);
    result.observed.max_value = result.observed.values[0];
    result.observed.argmax_k = 1;
    for (int k = 2; k <= n - 1; ++k) {
        if (result.observed.values[k - 1] > result.observed.max_value) {
            result.observed.max_value = result.observed.values[k - 1];
            result.observed.argmax_k = k;
        }
    }
    result.replicate_values = std::move(replicate_max);
    int exceed = 0;
    for (double v : result.replicate_values) {
        if (v >= result.observed.max_value) ++exceed;
    }
    result.p_value = static_cast<double>(exceed) / static_cast<double>(m_count);
    return result;
}

}  // namespace cpd
