#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dgp.hpp"
#include "numerics.hpp"
#include "test_helpers.hpp"

using namespace cpd;
using test_helpers::ks_distance_to_uniform;

namespace {

struct DrawnPair {
    std::vector<double> x, y;
};

DrawnPair draw_pair(const CopulaSpec& spec, int count, std::uint64_t seed) {
    RngStream rng(seed, 0);
    const std::vector<double> u = sample_copula(spec, count, rng);
    DrawnPair out;
    out.x.resize(count);
    out.y.resize(count);
    for (int i = 0; i < count; ++i) {
        out.x[i] = u[static_cast<std::size_t>(i) * spec.d];
        out.y[i] = u[static_cast<std::size_t>(i) * spec.d + 1];
    }
    return out;
}

}  // namespace

TEST_CASE("copula samplers hit their Kendall tau targets") {
    const int count = 10000;
    const double pi = std::acos(-1.0);

    const CopulaSpec clayton{CopulaFamily::Clayton, 2, 2.0, 4.0};
    const auto c = draw_pair(clayton, count, 1);
    CHECK(std::abs(sample_kendall_tau(c.x, c.y) - 0.5) < 0.02);

    const CopulaSpec gumbel{CopulaFamily::GumbelHougaard, 2, 2.0, 4.0};
    const auto g = draw_pair(gumbel, count, 2);
    CHECK(std::abs(sample_kendall_tau(g.x, g.y) - 0.5) < 0.02);

    const CopulaSpec normal{CopulaFamily::Normal, 2, std::sin(0.1 * pi), 4.0};
    const auto nrm = draw_pair(normal, count, 3);
    CHECK(std::abs(sample_kendall_tau(nrm.x, nrm.y) - 0.2) < 0.02);

    const CopulaSpec frank{CopulaFamily::Frank, 2, tau_to_parameter(CopulaFamily::Frank, 0.4),
                           4.0};
    const auto f = draw_pair(frank, count, 4);
    CHECK(std::abs(sample_kendall_tau(f.x, f.y) - 0.4) < 0.02);

    const CopulaSpec student{CopulaFamily::Student, 2, std::sin(0.1 * pi), 3.0};
    const auto t = draw_pair(student, count, 5);
    CHECK(std::abs(sample_kendall_tau(t.x, t.y) - 0.2) < 0.02);
}

TEST_CASE("independence case is uncorrelated") {
    const CopulaSpec normal{CopulaFamily::Normal, 2, 0.0, 4.0};
    const auto p = draw_pair(normal, 10000, 6);
    CHECK(std::abs(sample_kendall_tau(p.x, p.y)) < 0.03);
}

TEST_CASE("margins are uniform") {
    const double pi = std::acos(-1.0);
    const std::vector<CopulaSpec> specs{
        {CopulaFamily::Clayton, 2, 2.0, 4.0},
        {CopulaFamily::GumbelHougaard, 3, 2.0, 4.0},
        {CopulaFamily::Frank, 2, 5.0, 4.0},
        {CopulaFamily::Normal, 4, 0.5, 4.0},
        {CopulaFamily::Student, 2, std::sin(0.1 * pi), 3.0},
    };
    std::uint64_t seed = 10;
    for (const auto& spec : specs) {
        RngStream rng(seed++, 0);
        const auto u = sample_copula(spec, 10000, rng);
        for (int j = 0; j < spec.d; ++j) {
            std::vector<double> column(10000);
            for (int i = 0; i < 10000; ++i) {
                column[i] = u[static_cast<std::size_t>(i) * spec.d + j];
            }
            CHECK(ks_distance_to_uniform(std::move(column)) < 0.02);
        }
    }
}

TEST_CASE("negative Frank dependence in two dimensions") {
    const double theta = tau_to_parameter(CopulaFamily::Frank, -0.4);
    CHECK(theta < 0.0);
    const CopulaSpec spec{CopulaFamily::Frank, 2, theta, 4.0};
    const auto p = draw_pair(spec, 10000, 21);
    CHECK(std::abs(sample_kendall_tau(p.x, p.y) + 0.4) < 0.02);

    const CopulaSpec bad{CopulaFamily::Frank, 3, theta, 4.0};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("copula validation rejects out-of-range parameters") {
    CHECK_THROWS_AS(validate(CopulaSpec{CopulaFamily::Clayton, 2, -1.0, 4.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(CopulaSpec{CopulaFamily::GumbelHougaard, 2, 0.5, 4.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(CopulaSpec{CopulaFamily::Frank, 2, 0.0, 4.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(CopulaSpec{CopulaFamily::Normal, 2, 1.0, 4.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(CopulaSpec{CopulaFamily::Normal, 3, -0.9, 4.0}),
                    std::invalid_argument);  // violates equicorrelation bound
    CHECK_THROWS_AS(validate(CopulaSpec{CopulaFamily::Student, 2, 0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(CopulaSpec{CopulaFamily::Normal, 1, 0.5, 4.0}),
                    std::invalid_argument);
}

TEST_CASE("closed-form parameter maps") {
    CHECK(tau_to_parameter(CopulaFamily::Clayton, 0.5) == doctest::Approx(2.0));
    CHECK(tau_to_parameter(CopulaFamily::GumbelHougaard, 0.5) == doctest::Approx(2.0));
    CHECK(tau_to_parameter(CopulaFamily::Normal, 0.2) == doctest::Approx(0.309017).epsilon(1e-5));
    CHECK(parameter_to_tau(CopulaFamily::Clayton, 2.0) == doctest::Approx(0.5));
    CHECK(parameter_to_tau(CopulaFamily::GumbelHougaard, 2.0) == doctest::Approx(0.5));

    // Frank round trip through the Debye representation
    for (const double tau : {0.2, 0.4, 0.6, -0.3}) {
        const double theta = tau_to_parameter(CopulaFamily::Frank, tau);
        CHECK(parameter_to_tau(CopulaFamily::Frank, theta) == doctest::Approx(tau).epsilon(1e-6));
    }

    CHECK_THROWS_AS(tau_to_parameter(CopulaFamily::Clayton, -0.2), std::invalid_argument);
    CHECK_THROWS_AS(tau_to_parameter(CopulaFamily::Normal, 1.0), std::invalid_argument);
}

TEST_CASE("spearman parameter maps") {
    const double pi = std::acos(-1.0);
    CHECK(spearman_to_parameter(CopulaFamily::Normal, 0.4) ==
          doctest::Approx(2.0 * std::sin(pi * 0.4 / 6.0)).epsilon(1e-12));

    // Student: invert, then verify forward with an independent seed
    for (const double target : {0.4, 0.8}) {
        const double rho = spearman_to_parameter(CopulaFamily::Student, target, 3.0);
        const CopulaSpec spec{CopulaFamily::Student, 2, rho, 3.0};
        const auto p = draw_pair(spec, 100000, 33);
        CHECK(std::abs(sample_spearman_rho(p.x, p.y) - target) < 0.015);
    }

    CHECK_THROWS_AS(spearman_to_parameter(CopulaFamily::Clayton, 0.4), std::invalid_argument);
}

TEST_CASE("default GARCH constants") {
    const auto params = default_garch_params();
    REQUIRE(params.size() == 2);
    CHECK(params[0].omega == 0.012);
    CHECK(params[0].beta == 0.919);
    CHECK(params[0].alpha == 0.072);
    CHECK(params[1].omega == 0.037);
    CHECK(params[1].beta == 0.868);
    CHECK(params[1].alpha == 0.115);
    CHECK(params[0].beta + params[0].alpha < 1.0);
    CHECK(params[1].beta + params[1].alpha < 1.0);
}

TEST_CASE("identity filter returns the probit innovations") {
    DgpSpec spec;
    spec.n = 50;
    spec.d = 2;
    spec.gamma = 0.0;
    spec.c1 = CopulaSpec{CopulaFamily::Clayton, 2, 2.0, 4.0};
    spec.c2 = spec.c1;
    RngStream rng(9, 4);
    const Sample s = generate(spec, rng);

    RngStream replay(9, 4);
    const auto u = sample_copula(spec.c1, spec.burn_in + 1 + spec.n, replay);
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double eps = normal_quantile(
                u[static_cast<std::size_t>(spec.burn_in + 1 + i) * 2 + j]);
            CHECK(s(i, j) == doctest::Approx(eps).epsilon(1e-14));
        }
    }
}

TEST_CASE("degenerate GARCH collapses to scaled innoations") {
    DgpSpec spec;
    spec.n = 30;
    spec.d = 2;
    spec.filter = FilterKind::Garch;
    spec.garch = {GarchParams{0.25, 0.0, 0.0}, GarchParams{4.0, 0.0, 0.0}};
    spec.c1 = CopulaSpec{CopulaFamily::Normal, 2, 0.3, 4.0};
    spec.c2 = spec.c1;
    RngStream rng(11, 0);
    const Sample s = generate(spec, rng);

    RngStream replay(11, 0);
    const auto u = sample_copula(spec.c1, spec.burn_in + 1 + spec.n, replay);
    for (int i = 0; i < 30; ++i) {
        const double e0 =
            normal_quantile(u[static_cast<std::size_t>(spec.burn_in + 1 + i) * 2]);
        const double e1 =
            normal_quantile(u[static_cast<std::size_t>(spec.burn_in + 1 + i) * 2 + 1]);
        CHECK(s(i, 0) == doctest::Approx(0.5 * e0).epsilon(1e-12));
        CHECK(s(i, 1) == doctest::Approx(2.0 * e1).epsilon(1e-12));
    }
}

TEST_CASE("generation is deterministic per stream") {
    DgpSpec spec;
    spec.n = 40;
    spec.d = 2;
    spec.gamma = 0.25;
    spec.c1 = CopulaSpec{CopulaFamily::GumbelHougaard, 2, 1.5, 4.0};
    spec.c2 = spec.c1;
    RngStream a(5, 7), b(5, 7), c(5, 8);
    const Sample sa = generate(spec, a);
    const Sample sb = generate(spec, b);
    const Sample sc = generate(spec, c);
    bool identical = true, distinct = false;
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 2; ++j) {
            identical = identical && sa(i, j) == sb(i, j);
            distinct = distinct || sa(i, j) != sc(i, j);
        }
    }
    CHECK(identical);
    CHECK(distinct);
}

TEST_CASE("change point splits the innovation stream where requested") {
    DgpSpec spec;
    spec.n = 300;
    spec.d = 2;
    spec.gamma = 0.0;
    spec.c1 = CopulaSpec{CopulaFamily::Normal, 2, 0.95, 4.0};
    spec.c2 = CopulaSpec{CopulaFamily::Normal, 2, 0.0, 4.0};
    spec.t = 0.5;
    RngStream rng(3, 1);
    const Sample s = generate(spec, rng);

    auto half_tau = [&](int lo, int hi) {
        std::vector<double> x, y;
        for (int i = lo; i < hi; ++i) {
            x.push_back(s(i, 0));
            y.push_back(s(i, 1));
        }
        return sample_kendall_tau(x, y);
    };
    CHECK(half_tau(0, 150) > 0.7);
    CHECK(std::abs(half_tau(150, 300)) < 0.2);
}

TEST_CASE("dgp validation") {
    DgpSpec spec;
    spec.n = 100;
    spec.d = 2;
    spec.c1 = CopulaSpec{CopulaFamily::Normal, 2, 0.4, 4.0};
    spec.c2 = spec.c1;

    spec.gamma = 1.0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec.gamma = 0.5;
    CHECK(validate(spec).empty());

    spec.t = 1.5;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
    spec.t.reset();

    spec.filter = FilterKind::Garch;
    spec.garch.clear();
    CHECK(validate(spec).empty());  // bivariate defaults kick in

    spec.garch = {GarchParams{0.1, 0.9, 0.2}, GarchParams{0.1, 0.1, 0.1}};
    const auto warnings = validate(spec);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("nonstationary") != std::string::npos);
    RngStream rng(1, 1);
    CHECK_NOTHROW(generate(spec, rng));  // runs, warning-level only

    spec.d = 3;
    spec.c1.d = 3;
    spec.c2.d = 3;
    spec.garch.clear();
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);  // no defaults beyond d = 2
}
