#include "lmopt/hash.hpp"
#include "lmopt/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

using namespace lmopt;

TEST_CASE("derive_seed is the splitmix64 sequence") {
    // Reference splitmix64 outputs from state 0.
    CHECK(derive_seed(0, 0) == 0xe220a8397b1dcdafULL);
    CHECK(derive_seed(0, 1) == 0x6e789e6aa1b965f4ULL);
    CHECK(derive_seed(0, 2) == 0x06c45d188009454fULL);
}

TEST_CASE("derived streams differ") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        for (std::uint64_t stream = 0; stream < 64; ++stream) seen.insert(derive_seed(seed, stream));
    }
    CHECK(seen.size() == 4 * 64);
}

TEST_CASE("mt19937_64 matches the standard reference") {
    std::mt19937_64 rng;
    rng.discard(9999);
    CHECK(rng() == 9981545732273789042ULL);
}

TEST_CASE("uniform_below stays in range and covers it") {
    std::mt19937_64 rng(3);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = uniform_below(rng, 7);
        REQUIRE(v < 7);
        ++hits[v];
    }
    for (int h : hits) CHECK(h > 800);
    CHECK(uniform_below(rng, 0) == 0);
    CHECK(uniform_below(rng, 1) == 0);
}

TEST_CASE("seeded_shuffle is a deterministic permutation") {
    std::vector<int> a(50), b(50);
    std::iota(a.begin(), a.end(), 0);
    std::iota(b.begin(), b.end(), 0);
    seeded_shuffle(std::span(a), 42);
    seeded_shuffle(std::span(b), 42);
    CHECK(a == b);
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(50);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(sorted == expect);
    std::vector<int> c(50);
    std::iota(c.begin(), c.end(), 0);
    seeded_shuffle(std::span(c), 43);
    CHECK(c != a);
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
