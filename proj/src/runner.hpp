#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgp.hpp"
#include "report.hpp"
#include "sample.hpp"

namespace cpd {

/// Configuration of a single change-point test run.
struct TestConfig {
    std::string statistic = "rho3";
    std::string method = "boot-dep";  // boot-iid | boot-dep | asymptotic
    std::string serial = "dep";       // asymptotic only: iid | dep
    int replicates = 1000;            // bootstrap replicates M
    int ell = 0;                      // dependence window; 0 = data-driven
    double bn_exponent = 0.51;        // b_n = n^(-exponent)
    DivisorMode divisor = DivisorMode::Simulation;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// Dispatches to the bootstrap or the asymptotic test; estimates the
/// dependence window first when the method needs one and ell is 0.
TestReport run_test(const Sample& sample, const TestConfig& config);

/// One cell of a simulation grid: a data-generating configuration plus the
/// test to run against it.
struct ExperimentCell {
    std::string family = "normal";
    double df = 4.0;  // student only
    int d = 2;
    int n = 0;
    std::string filter = "ar1";  // ar1 | garch
    double gamma = 0.0;
    std::vector<GarchParams> garch;  // empty = built-in bivariate defaults
    double dep1 = 0.0;               // dependence of the pre-change copula
    double dep2 = 0.0;               // dependence of the post-change copula
    std::string rho_type = "tau";    // scale of dep1/dep2: tau | spearman
    std::optional<double> t;         // change location; required when dep1 != dep2
    std::string stat = "rho1";
    std::string method = "boot-iid";  // boot-iid | boot-dep | asym-iid | asym-dep
    double alpha = 0.05;
    int reps = 1000;       // Monte Carlo repetitions R
    int replicates = 250;  // bootstrap replicates M
    int ell = 0;           // 0 = data-driven
    double bn_exponent = 0.51;
    std::string divisor = "simulation";
};

/// Parses the flat key-value grid format: cells start at a "[cell]" line,
/// followed by "key = value" lines; '#' starts a comment. Unknown keys are
/// rejected.
std::vector<ExperimentCell> parse_experiment_config(std::string_view text);

using ExperimentProgress = std::function<void(std::size_t cells_done, std::size_t cells_total,
                                              const ExperimentCell& cell, double reject_pct)>;

/// Rejection percentage (of p <= alpha) per cell, R repetitions each.
/// reps_override > 0 replaces every cell's repetition count. Deterministic
/// in (cells, seed) regardless of the thread count.
std::vector<double> run_experiment(std::span<const ExperimentCell> cells, unsigned threads,
                                   std::uint64_t seed, int reps_override = 0,
                                   const ExperimentProgress& progress = nullptr);

/// CSV table "family,n,tau1,tau2,t,gamma,stat,method,reject_pct".
std::string rejection_table_csv(std::span<const ExperimentCell> cells,
                                std::span<const double> reject_pct);

/// The DGP spec a cell describes (copula parameters resolved from the
/// requested dependence scale). Exposed for tests.
DgpSpec cell_dgp(const ExperimentCell& cell);

}  // namespace cpd
