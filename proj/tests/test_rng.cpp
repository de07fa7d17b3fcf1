#include "continuized/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace continuized;

TEST_CASE("mix64 matches the SplitMix64 reference stream") {
    // First two outputs of SplitMix64 seeded with 0.
    CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(mix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("run seeds are distinct and depend on the master seed") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(run_seed(42, i));
    CHECK(seen.size() == 10000);
    CHECK(run_seed(1, 0) != run_seed(2, 0));
    CHECK(run_seed(7, 3) == run_seed(7, 3));
}

TEST_CASE("uniform draws lie in [0,1) with mean one half") {
    Stream s(11);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    const double se = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(sum / n - 0.5) < 3 * se);
    Stream t(11);
    for (int i = 0; i < 1000; ++i) REQUIRE(t.uniform_open_zero() > 0.0);
}

TEST_CASE("categorical frequencies follow the cumulative weights") {
    Stream s(5);
    const std::vector<double> cumulative{0.1, 0.4, 1.0};
    std::vector<int> counts(3, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[s.categorical(cumulative)];
    const double p[3] = {0.1, 0.3, 0.6};
    for (int k = 0; k < 3; ++k) {
        const double se = std::sqrt(p[k] * (1 - p[k]) / n);
        CHECK(std::abs(counts[k] / double(n) - p[k]) < 3 * se);
    }
}

TEST_CASE("clock and mark streams are independent of each other") {
    RunRng a(3);
    RunRng b(3);
    for (int i = 0; i < 50; ++i) b.marks.bits();
    for (int i = 0; i < 100; ++i) REQUIRE(a.clock.bits() == b.clock.bits());
    RunRng c(3);
    CHECK(c.clock.bits() != c.marks.bits());
}
