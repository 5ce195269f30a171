#include <catch2/catch_amalgamated.hpp>

#include "privgen/mining.hpp"
#include "privgen/rng.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace privgen;
using namespace testsup;

TEST_CASE("hand-enumerable corpus") {
    Dataset d = sequences_dataset({{"A", "B", "A", "B"}});
    auto top = mine_topk(d, 3, 2);
    REQUIRE(top.size() == 3);
    // supports: A=2, B=2, AB=2, BA=1; ties break shorter-first then lexicographic
    CHECK(top[0].states == std::vector<std::string>{"A"});
    CHECK(top[0].support == 2);
    CHECK(top[1].states == std::vector<std::string>{"B"});
    CHECK(top[1].support == 2);
    CHECK(top[2].states == std::vector<std::string>{"A", "B"});
    CHECK(top[2].support == 2);
}

TEST_CASE("k beyond the distinct count returns everything") {
    Dataset d = sequences_dataset({{"A", "B"}});
    auto top = mine_topk(d, 100, 3);
    CHECK(top.size() == 3);  // A, B, AB
}

TEST_CASE("parameter validation") {
    Dataset d = sequences_dataset({{"A"}});
    CHECK_THROWS_AS(mine_topk(d, 0, 2), ConfigError);
    CHECK_THROWS_AS(mine_topk(d, 2, 0), ConfigError);
    CHECK(mine_topk(sequences_dataset({}), 5, 3).empty());
}

TEST_CASE("random corpora match the exhaustive enumeration oracle") {
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::vector<std::string>> seqs;
        size_t records = 0;
        while (records < 200) {
            std::vector<std::string> seq;
            size_t len = 1 + rng.uniform_int(12);
            for (size_t j = 0; j < len; ++j)
                seq.push_back(std::string(1, static_cast<char>('a' + rng.uniform_int(4))));
            records += len;
            seqs.push_back(seq);
        }
        Dataset d = sequences_dataset(seqs);
        size_t k = 1 + rng.uniform_int(30);
        size_t max_len = 1 + rng.uniform_int(5);
        auto got = mine_topk(d, k, max_len);
        auto expected = oracle_mine_topk(d, k, max_len);
        REQUIRE(got.size() == expected.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].states == expected[i].states);
            CHECK(got[i].support == expected[i].support);
        }
    }
}

TEST_CASE("precision of a dataset against itself is one") {
    Dataset d = sequences_dataset({{"A", "B", "C"}, {"B", "C", "A"}, {"C"}});
    CHECK(topk_precision(d, d, 5, 3) == 1.0);
}

TEST_CASE("disjoint state usage has zero precision") {
    Dataset a = sequences_dataset({{"A", "B"}, {"B", "A"}});
    Dataset b = sequences_dataset({{"X", "Y"}, {"Y", "X"}});
    CHECK(topk_precision(a, b, 4, 2) == 0.0);
}

TEST_CASE("precision is always divided by k") {
    Dataset a = sequences_dataset({{"A", "B"}});
    // only 3 distinct subsequences exist; with k=6 precision can reach at most 1/2
    CHECK(topk_precision(a, a, 6, 2) == Catch::Approx(0.5));
}
