#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sample.hpp"
#include "test_helpers.hpp"

using namespace cpd;
using test_helpers::make_sample;
using test_helpers::random_sample;

TEST_CASE("maximal ranks of a strictly increasing relabeling") {
    const Sample s = make_sample({{3.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}});
    const auto ranks = maximal_ranks(s, s.full_window());
    CHECK(ranks[0] == 3);  // column 1: (3, 1, 2)
    CHECK(ranks[2] == 1);
    CHECK(ranks[4] == 2);
    CHECK(ranks[1] == 1);  // column 2: already sorted
    CHECK(ranks[3] == 2);
    CHECK(ranks[5] == 3);
}

TEST_CASE("ties share the maximal rank") {
    const Sample s = make_sample({{1.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}});
    const auto ranks = maximal_ranks(s, s.full_window());
    CHECK(ranks[0] == 2);
    CHECK(ranks[2] == 2);
    CHECK(ranks[4] == 3);
}

TEST_CASE("ranks are subsample-relative") {
    const Sample s = make_sample({{5.0, 1.0}, {4.0, 2.0}, {3.0, 3.0}, {2.0, 4.0}});
    const auto ranks = maximal_ranks(s, Window{2, 4});
    // column 1 values (4, 3, 2) within the window
    CHECK(ranks[0] == 3);
    CHECK(ranks[2] == 2);
    CHECK(ranks[4] == 1);
}

TEST_CASE("window bounds are enforced") {
    const Sample s = make_sample({{1.0, 2.0}, {3.0, 4.0}});
    CHECK_THROWS_AS(maximal_ranks(s, Window{0, 2}), std::out_of_range);
    CHECK_THROWS_AS(maximal_ranks(s, Window{1, 3}), std::out_of_range);
    CHECK_THROWS_AS(maximal_ranks(s, Window{2, 1}), std::out_of_range);
}

TEST_CASE("sample validation") {
    CHECK_THROWS_AS(Sample({1.0, 2.0}, 1, 2), std::invalid_argument);  // n < 2
    CHECK_THROWS_AS(Sample({1.0, 2.0}, 2, 1), std::invalid_argument);  // d < 2
    CHECK_THROWS_AS(Sample({1.0, 2.0, 3.0, std::nan("")}, 2, 2), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Sample({1.0, 2.0, 3.0, inf}, 2, 2), std::invalid_argument);
}

TEST_CASE("pseudo-observation divisors") {
    const Sample s = make_sample({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}});
    const PseudoObs sim = pseudo_observations(s, s.full_window(), DivisorMode::Simulation);
    CHECK(sim(0, 0) == doctest::Approx(0.25));
    CHECK(sim(1, 0) == doctest::Approx(0.50));
    CHECK(sim(2, 0) == doctest::Approx(0.75));
    const PseudoObs theory = pseudo_observations(s, s.full_window(), DivisorMode::Theory);
    CHECK(theory(0, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(theory(1, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(theory(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("single-point window maps to one half") {
    const Sample s = make_sample({{1.0, 5.0}, {2.0, 4.0}});
    const PseudoObs p = pseudo_observations(s, Window{1, 1}, DivisorMode::Simulation);
    CHECK(p.m == 1);
    CHECK(p(0, 0) == doctest::Approx(0.5));
    CHECK(p(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("pseudo-observations stay inside their ranges") {
    const Sample s = random_sample(40, 3, 11);
    for (const DivisorMode mode : {DivisorMode::Theory, DivisorMode::Simulation}) {
        const PseudoObs p = pseudo_observations(s, Window{5, 31}, mode);
        for (double v : p.values) {
            CHECK(v > 0.0);
            if (mode == DivisorMode::Theory) CHECK(v <= 1.0);
            else CHECK(v < 1.0);
        }
    }
}

TEST_CASE("empirical copula basics") {
    const Sample s = make_sample({{0.1, 0.2}, {0.5, 0.6}, {0.9, 0.8}});
    const PseudoObs p = pseudo_observations(s, s.full_window(), DivisorMode::Simulation);
    CHECK(empirical_copula(p, std::vector<double>{1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(empirical_copula(p, std::vector<double>{0.0, 0.0}) == doctest::Approx(0.0));
    // pseudo-obs are (0.25, 0.25), (0.5, 0.5), (0.75, 0.75): two fall
    // below (0.5, 0.5) componentwise
    CHECK(empirical_copula(p, std::vector<double>{0.5, 0.5}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("comonotone diagonal of the theory-mode empirical copula") {
    const int m = 7;
    std::vector<double> data;
    for (int i = 0; i < m; ++i) {
        data.push_back(i + 1.0);
        data.push_back(2.0 * (i + 1.0));
    }
    const Sample s(std::move(data), m, 2);
    const PseudoObs p = pseudo_observations(s, s.full_window(), DivisorMode::Theory);
    for (int j = 1; j <= m; ++j) {
        const double u = static_cast<double>(j) / m;
        CHECK(empirical_copula(p, std::vector<double>{u, u}) ==
              doctest::Approx(static_cast<double>(j) / m));
    }
}

TEST_CASE("negation is an involution and reverses ranks") {
    const Sample s = random_sample(25, 2, 3);
    const Sample neg = negate(s);
    CHECK(neg(0, 0) == -s(0, 0));
    const Sample twice = negate(neg);
    for (int i = 0; i < s.rows(); ++i) {
        for (int j = 0; j < s.cols(); ++j) CHECK(twice(i, j) == s(i, j));
    }
    const auto r = maximal_ranks(s, Window{4, 21});
    const auto rn = maximal_ranks(neg, Window{4, 21});
    const int m = 18;
    for (std::size_t t = 0; t < r.size(); ++t) CHECK(rn[t] == m + 1 - r[t]);
}

TEST_CASE("rank invariance under strictly increasing transforms") {
    const Sample s = random_sample(30, 2, 5);
    std::vector<double> transformed(s.raw().begin(), s.raw().end());
    for (int i = 0; i < s.rows(); ++i) {
        transformed[2 * i] = std::exp(transformed[2 * i]);
        const double v = transformed[2 * i + 1];
        transformed[2 * i + 1] = v * v * v;
    }
    const Sample g(std::move(transformed), s.rows(), s.cols());
    const PseudoObs a = pseudo_observations(s, Window{3, 28}, DivisorMode::Simulation);
    const PseudoObs b = pseudo_observations(g, Window{3, 28}, DivisorMode::Simulation);
    for (std::size_t t = 0; t < a.values.size(); ++t) CHECK(a.values[t] == b.values[t]);
}

TEST_CASE("tie-free columns scale to a permutation of the rank lattice") {
    const Sample s = random_sample(17, 3, 14);
    for (const DivisorMode mode : {DivisorMode::Theory, DivisorMode::Simulation}) {
        const PseudoObs p = pseudo_observations(s, Window{2, 15}, mode);
        const double div = mode == DivisorMode::Theory ? 14.0 : 15.0;
        for (int j = 0; j < 3; ++j) {
            std::vector<double> column(p.m);
            for (int i = 0; i < p.m; ++i) column[i] = p(i, j);
            std::sort(column.begin(), column.end());
            for (int i = 0; i < p.m; ++i) CHECK(column[i] == (i + 1) / div);
        }
    }
}

TEST_CASE("permuting rows permutes pseudo-observations identically") {
    const Sample s = random_sample(12, 2, 9);
    std::vector<int> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 shuffler(4);
    std::shuffle(perm.begin(), perm.end(), shuffler);
    std::vector<double> data(s.raw().size());
    for (int i = 0; i < 12; ++i) {
        data[2 * static_cast<std::size_t>(i)] = s(perm[i], 0);
        data[2 * static_cast<std::size_t>(i) + 1] = s(perm[i], 1);
    }
    const Sample shuffled(std::move(data), 12, 2);
    const PseudoObs orig = pseudo_observations(s, s.full_window(), DivisorMode::Simulation);
    const PseudoObs perm_obs =
        pseudo_observations(shuffled, shuffled.full_window(), DivisorMode::Simulation);
    for (int i = 0; i < 12; ++i) {
        CHECK(perm_obs(i, 0) == orig(perm[i], 0));
        CHECK(perm_obs(i, 1) == orig(perm[i], 1));
    }
}
