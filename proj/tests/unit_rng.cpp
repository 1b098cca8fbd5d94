#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "macrsv/rng.hpp"

using namespace macrsv;

TEST_CASE("same seed reproduces the stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    REQUIRE(same == 0);
}

TEST_CASE("fork is deterministic and independent of parent consumption") {
    Rng parent(7);
    Rng child1 = parent.fork(3);
    parent.next_u64();
    parent.next_u64();
    Rng child2 = Rng(7).fork(3);
    for (int i = 0; i < 100; ++i) REQUIRE(child1.next_u64() == child2.next_u64());
}

TEST_CASE("forks with different tags are distinct streams") {
    Rng parent(7);
    Rng a = parent.fork(1);
    Rng b = parent.fork(2);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    REQUIRE(same <= 1);
}

TEST_CASE("uniform01 stays in [0, 1) and fills the range") {
    Rng rng(11);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 20000; ++i) {
        double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    REQUIRE(lo < 0.01);
    REQUIRE(hi > 0.99);
}

TEST_CASE("below(n) is bounded and hits every residue") {
    Rng rng(13);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        auto v = rng.below(7);
        REQUIRE(v < 7);
        seen.insert(v);
    }
    REQUIRE(seen.size() == 7);
    REQUIRE(rng.below(0) == 0);
    REQUIRE(rng.below(1) == 0);
}

TEST_CASE("poisson sample mean tracks the parameter") {
    Rng rng(17);
    for (double mean : {0.3, 2.0, 25.0}) {
        long long total = 0;
        const int reps = 20000;
        for (int i = 0; i < reps; ++i) {
            int k = rng.poisson(mean);
            REQUIRE(k >= 0);
            total += k;
        }
        double got = static_cast<double>(total) / reps;
        REQUIRE(got == Catch::Approx(mean).margin(4.0 * std::sqrt(mean / reps) + 0.01));
    }
    REQUIRE(rng.poisson(0.0) == 0);
}

TEST_CASE("sample draws k distinct items from the pool") {
    Rng rng(19);
    std::vector<int> items = {10, 20, 30, 40, 50, 60};
    auto picked = rng.sample(items, 4);
    REQUIRE(picked.size() == 4);
    std::set<int> uniq(picked.begin(), picked.end());
    REQUIRE(uniq.size() == 4);
    for (int v : picked) REQUIRE(std::count(items.begin(), items.end(), v) == 1);

    auto all = rng.sample(items, 99);
    REQUIRE(all.size() == items.size());
}
