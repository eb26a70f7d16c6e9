#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "fbmwalk/grid.hpp"
#include "fbmwalk/rng.hpp"

using namespace fbmwalk;

TEST_CASE("GridSpec derives dt, horizon and step counts") {
    const GridSpec g(256, 2.0, 1024);
    CHECK(g.dt() == 1.0 / 256.0);
    CHECK(g.horizon() == 2.0);
    CHECK(g.future_steps() == 512);
    CHECK(g.past_steps() == 1024);
    CHECK(g.time_of(256) == 1.0);
    CHECK(g.step_of(1.0) == 256);
    CHECK(g.step_of(g.time_of(-300)) == -300);
}

TEST_CASE("GridSpec rejects bad arguments") {
    CHECK_THROWS_AS(GridSpec(0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(16, 0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(16, -1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(16, 1.0, 0), std::invalid_argument);
    // horizon must be a whole number of steps
    CHECK_THROWS_AS(GridSpec(16, 1.03, 8), std::invalid_argument);
    CHECK_NOTHROW(GridSpec(16, 1.0625, 8));  // 17 steps of 1/16
}

TEST_CASE("step_of rejects off-grid times") {
    const GridSpec g(10, 1.0, 4);
    CHECK_THROWS_AS((void)g.step_of(0.05), std::invalid_argument);
    CHECK(g.step_of(0.1) == 1);
    CHECK(g.step_of(0.0) == 0);
}

TEST_CASE("BernoulliStream draws are signs, reproducible and windowed") {
    const GridSpec g(16, 1.0, 64);
    const BernoulliStream s1(12345, g), s2(12345, g), s3(54321, g);
    bool all_signs = true, identical = true, any_diff = false;
    for (long k = s1.first_step(); k < s1.last_step(); ++k) {
        const double w = s1.omega(k);
        all_signs = all_signs && (w == 1.0 || w == -1.0);
        identical = identical && (w == s2.omega(k));
        any_diff = any_diff || (w != s3.omega(k));
        CHECK(s1.delta_b(k) == std::sqrt(g.dt()) * w);
    }
    CHECK(all_signs);
    CHECK(identical);
    CHECK(any_diff);
    CHECK_THROWS_AS((void)s1.omega(s1.last_step()), std::out_of_range);
    CHECK_THROWS_AS((void)s1.omega(s1.first_step() - 1), std::out_of_range);
}

TEST_CASE("grid_sum_convention includes the lower limit, excludes the upper") {
    const GridSpec g(4, 2.0, 4);
    auto f = [](double t) { return 3.0 * t + 1.0; };
    // manual: t in {0.25, 0.5, 0.75} for [0.25, 1.0)
    const double manual = f(0.25) + f(0.5) + f(0.75);
    CHECK(grid_sum_convention(g, f, 0.25, 1.0) == doctest::Approx(manual));
    CHECK(grid_sum_convention(g, f, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(grid_sum_convention(g, f, 1.0, 0.5),
                    std::invalid_argument);
}

TEST_CASE("CounterRng is pure and statistically sane") {
    const CounterRng rng(99);
    CHECK(rng.sign(7) == rng.sign(7));
    CHECK(rng.bits(CounterRng::Domain::Bernoulli, 7) !=
          rng.bits(CounterRng::Domain::Gaussian, 7));

    const long n = 100000;
    double sum_sign = 0.0, sum_n = 0.0, sum_n2 = 0.0;
    for (long i = 0; i < n; ++i) {
        sum_sign += rng.sign(static_cast<std::uint64_t>(i));
        const double z = rng.normal(static_cast<std::uint64_t>(i));
        sum_n += z;
        sum_n2 += z * z;
    }
    const double nd = static_cast<double>(n);
    // 5-sigma bands on mean and variance of the empirical draws
    CHECK(std::abs(sum_sign / nd) <= 5.0 / std::sqrt(nd));
    CHECK(std::abs(sum_n / nd) <= 5.0 / std::sqrt(nd));
    CHECK(std::abs(sum_n2 / nd - 1.0) <= 5.0 * std::sqrt(2.0 / nd));

    double u_min = 1.0, u_max = 0.0;
    for (long i = 0; i < 10000; ++i) {
        const double u = rng.uniform(CounterRng::Domain::Gaussian,
                                     static_cast<std::uint64_t>(i));
        u_min = std::min(u_min, u);
        u_max = std::max(u_max, u);
    }
    CHECK(u_min > 0.0);
    CHECK(u_max < 1.0);
}

TEST_CASE("CounterRng::schedule fans out distinct stream seeds") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 10000; ++k) {
        seen.insert(CounterRng::schedule(20070811, k));
    }
    CHECK(seen.size() == 10000);
    CHECK(CounterRng::schedule(1, 0) != CounterRng::schedule(2, 0));
}
