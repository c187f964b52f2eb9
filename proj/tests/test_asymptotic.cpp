#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asymptotic.hpp"
#include "influence.hpp"
#include "test_helpers.hpp"

using namespace cpd;
using test_helpers::make_sample;
using test_helpers::random_sample;

TEST_CASE("kolmogorov survival function") {
    CHECK(kolmogorov_sf(0.0) == 1.0);
    CHECK(kolmogorov_sf(10.0) < 1e-80);
    CHECK(kolmogorov_sf(1.358) > 0.049);
    CHECK(kolmogorov_sf(1.358) < 0.051);
    CHECK_THROWS_AS(kolmogorov_sf(-0.1), std::domain_error);

    // strictly decreasing on a grid
    double prev = kolmogorov_sf(0.2);
    for (double x = 0.25; x <= 3.0; x += 0.05) {
        const double v = kolmogorov_sf(x);
        CHECK(v < prev);
        prev = v;
    }

    // the two series forms agree where they hand over
    CHECK(kolmogorov_sf(1.0 - 1e-9) == doctest::Approx(kolmogorov_sf(1.0)).epsilon(1e-9));
}

TEST_CASE("series variance basics") {
    const std::vector<double> constant(20, 2.5);
    CHECK(iid_variance_of_series(constant) == 0.0);

    const std::vector<double> y{0.0, 0.0, 3.0, 0.0};  // single nonzero entry
    // centered: mean 0.75; variance = mean(y^2) - mean^2
    double direct = 0.0;
    for (double v : y) direct += v * v;
    direct = direct / 4.0 - 0.75 * 0.75;
    CHECK(iid_variance_of_series(y) == doctest::Approx(direct).epsilon(1e-14));

    RngStream rng(3, 0);
    std::vector<double> z(50);
    for (double& v : z) v = rng.normal();
    double mean = 0.0, sq = 0.0;
    for (double v : z) {
        mean += v;
        sq += v * v;
    }
    mean /= z.size();
    sq /= z.size();
    CHECK(iid_variance_of_series(z) == doctest::Approx(sq - mean * mean).epsilon(1e-12));
}

TEST_CASE("hac variance: ell = 1 equals the iid form exactly") {
    RngStream rng(7, 0);
    std::vector<double> y(80);
    for (double& v : y) v = rng.normal() + 0.3;
    CHECK(hac_variance_of_series(y, 1, KernelShape::parzen()) == iid_variance_of_series(y));

    const Sample s = random_sample(60, 2, 12);
    const LinearStatistic f = builtin_statistic(BuiltinStatistic::Rho1, 2);
    const double b = std::pow(60.0, -0.51);
    const VarianceEstimate vi = variance_iid(s, f, DivisorMode::Simulation, b);
    const VarianceEstimate vh =
        variance_hac(s, f, DivisorMode::Simulation, b, 1, KernelShape::parzen());
    CHECK(vi.sigma2 == vh.sigma2);
}

TEST_CASE("hac variance equals the quadratic-form double loop") {
    RngStream rng(19, 0);
    std::vector<double> y(40);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.normal() + 0.2 * i;
    const KernelShape& shape = KernelShape::parzen();
    for (const int ell : {2, 3, 7}) {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= y.size();
        double naive = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            for (std::size_t j = 0; j < y.size(); ++j) {
                const double w =
                    shape.phi((static_cast<double>(i) - static_cast<double>(j)) / ell);
                naive += w * (y[i] - mean) * (y[j] - mean);
            }
        }
        naive /= y.size();
        CHECK(hac_variance_of_series(y, ell, shape) == doctest::Approx(naive).epsilon(1e-10));
    }
}

TEST_CASE("hac variance of a single-spike series") {
    std::vector<double> y(25, 0.0);
    y[11] = 2.0;
    // quadratic form has only the (11, 11) term on the centered series plus
    // the centering cross terms; compare against the double loop with ell=4
    const KernelShape& shape = KernelShape::parzen();
    double mean = 2.0 / 25.0;
    double naive = 0.0;
    for (int i = 0; i < 25; ++i) {
        for (int j = 0; j < 25; ++j) {
            naive += shape.phi((i - j) / 4.0) * (y[i] - mean) * (y[j] - mean);
        }
    }
    naive /= 25.0;
    CHECK(hac_variance_of_series(y, 4, shape) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("influence vector composes the per-subset influences") {
    const Sample s = random_sample(30, 2, 41);
    const PseudoObs p = pseudo_observations(s, s.full_window(), DivisorMode::Simulation);
    const auto vec = influence_vector(p, std::vector<double>{0.2, 0.9}, 0.05);
    CHECK(vec.size() == 3);
}

TEST_CASE("iid variance matches the multiplier-replicate variance") {
    // Var over iid-multiplier replicates of the full-window weighted sum is,
    // by construction, the iid variance estimator; a Monte Carlo estimate of
    // the former must land within 10%.
    const Sample s = random_sample(2000, 2, 55);
    const LinearStatistic f = builtin_statistic(BuiltinStatistic::Rho1, 2);
    const double b = std::pow(2000.0, -0.51);
    const std::vector<double> y = influence_statistic_series(s, f, DivisorMode::Simulation, b);
    const double sigma2 = iid_variance_of_series(y);

    const int n = 2000;
    const int reps = 3000;
    double sum = 0.0, sumsq = 0.0;
    for (int m = 0; m < reps; ++m) {
        RngStream rng(1234, static_cast<std::uint64_t>(m));
        double dot = 0.0, xibar = 0.0;
        std::vector<double> xi(n);
        for (double& v : xi) {
            v = rng.normal();
            xibar += v;
        }
        xibar /= n;
        for (int i = 0; i < n; ++i) dot += (xi[i] - xibar) * y[i];
        const double value = dot / std::sqrt(static_cast<double>(n));
        sum += value;
        sumsq += value * value;
    }
    const double mc_var = sumsq / reps - (sum / reps) * (sum / reps);
    CHECK(mc_var == doctest::Approx(sigma2).epsilon(0.10));
}

TEST_CASE("asymptotic test flags a large change") {
    // two comonotone blocks with opposite orientation
    std::vector<double> data;
    RngStream rng(77, 0);
    for (int i = 0; i < 100; ++i) {
        const double v = rng.normal();
        data.push_back(v);
        data.push_back(2.0 * v);
    }
    for (int i = 0; i < 100; ++i) {
        const double v = rng.normal();
        data.push_back(v);
        data.push_back(-3.0 * v);
    }
    const Sample s(std::move(data), 200, 2);
    const LinearStatistic f = builtin_statistic(BuiltinStatistic::Rho1, 2);
    const AsymptoticResult res =
        asymptotic_test(s, f, DivisorMode::Simulation, std::pow(200.0, -0.51),
                        VarianceForm::Iid, 0);
    CHECK(res.p_value < 0.01);
    CHECK(res.observed.argmax_k > 80);
    CHECK(res.observed.argmax_k < 120);
}

TEST_CASE("p-value is invariant to rescaling the coefficients") {
    const Sample s = random_sample(80, 2, 61);
    LinearStatistic f = builtin_statistic(BuiltinStatistic::Rho1, 2);
    const double b = std::pow(80.0, -0.51);
    const AsymptoticResult base =
        asymptotic_test(s, f, DivisorMode::Simulation, b, VarianceForm::Iid, 0);
    for (double& c : f.coeffs) c *= -7.5;
    const AsymptoticResult scaled =
        asymptotic_test(s, f, DivisorMode::Simulation, b, VarianceForm::Iid, 0);
    CHECK(base.studentized == doctest::Approx(scaled.studentized).epsilon(1e-12));
    CHECK(base.p_value == doctest::Approx(scaled.p_value).epsilon(1e-12));
}

TEST_CASE("degenerate variance raises") {
    // identical rows: every pseudo-observation coincides, the influence
    // series is constant and the studentizer collapses
    const Sample s = make_sample({{1.0, 1.0}, {1.0, 1.0}});
    const LinearStatistic f = builtin_statistic(BuiltinStatistic::Rho1, 2);
    CHECK_THROWS_AS(
        asymptotic_test(s, f, DivisorMode::Simulation, 0.3, VarianceForm::Iid, 0),
        std::runtime_error);
}

TEST_CASE("hac variance at work on dependent data still studentizes") {
    const Sample s = random_sample(150, 2, 88);
    const LinearStatistic f = builtin_statistic(BuiltinStatistic::Rho3, 2);
    const AsymptoticResult res =
        asymptotic_test(s, f, DivisorMode::Simulation, std::pow(150.0, -0.51),
                        VarianceForm::Hac, 4);
    CHECK(res.p_value >= 0.0);
    CHECK(res.p_value <= 1.0);
    CHECK(res.variance.ell == 4);
    CHECK(res.variance.sigma2 > 0.0);
}
