#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "config.hpp"
#include "json_out.hpp"
#include "shadowtree/errors.hpp"
#include "shadowtree/parallel.hpp"
#include "shadowtree/philox.hpp"

using namespace shadowtree;

// Known-answer vectors from the Random123 distribution.
TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}),
              (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate(C{~0u, ~0u, ~0u, ~0u}, K{~0u, ~0u}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsReproducibleAndDistinct) {
    PhiloxStream a(42, 7), b(42, 7), c(42, 8), e(43, 7);
    bool differ_c = false, differ_e = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u32();
        EXPECT_EQ(x, b.next_u32());
        differ_c |= x != c.next_u32();
        differ_e |= x != e.next_u32();
    }
    EXPECT_TRUE(differ_c);
    EXPECT_TRUE(differ_e);
}

TEST(Philox, UniformMoments) {
    PhiloxStream s(1, 0);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.next_uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12, 2e-3);
}

TEST(PairwiseSum, ExactAndOrderFixed) {
    EXPECT_EQ(pairwise_sum({}), 0.0);
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    EXPECT_EQ(pairwise_sum(v), 500500.0);
    std::vector<double> w(1 << 20, 0.1);
    EXPECT_NEAR(pairwise_sum(w), 0.1 * (1 << 20), 1e-8);
}

TEST(ParallelFor, VisitsEachIndexOnce) {
    for (int workers : {1, 2, 4, 7}) {
        std::vector<std::atomic<int>> hits(101);
        parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i].fetch_add(1); });
        for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    }
}

TEST(WorkerCount, EnvironmentOverride) {
    setenv("SHADOWTREE_THREADS", "3", 1);
    EXPECT_EQ(worker_count(), 3);
    setenv("SHADOWTREE_THREADS", "junk", 1);
    EXPECT_GE(worker_count(), 1);
    unsetenv("SHADOWTREE_THREADS");
    EXPECT_GE(worker_count(), 1);
}

TEST(Errors, NamesAreStable) {
    EXPECT_STREQ(to_string(ErrorCode::RejectsDrift), "RejectsDrift");
    EXPECT_STREQ(to_string(ErrorCode::OffLattice), "OffLattice");
    const Error e(ErrorCode::NoBracket, "x");
    EXPECT_EQ(e.code(), ErrorCode::NoBracket);
}

TEST(Config, Toml) {
    const auto cv = cli::parse_toml_config(
        "# model\n[model]\nd = 0.5\np = 0.52 # inline\nname = \"x # y\"\nk = 3\n");
    EXPECT_EQ(cv.number("d"), 0.5);
    EXPECT_EQ(cv.number("p"), 0.52);
    EXPECT_EQ(cv.number("k"), 3.0);
    EXPECT_EQ(cv.string("name"), "x # y");
    EXPECT_FALSE(cv.number("lambda").has_value());
    EXPECT_THROW(cli::parse_toml_config("d 0.5\n"), cli::UsageError);
}

TEST(Config, Json) {
    const auto cv = cli::parse_json_config(R"({"d": 0.5, "p": 0.5, "path": "UUD", "nested": {"a": 1}, "v": [1, 2]})");
    EXPECT_EQ(cv.number("d"), 0.5);
    EXPECT_EQ(cv.string("path"), "UUD");
    EXPECT_FALSE(cv.number("nested").has_value());
    EXPECT_THROW(cli::parse_json_config("{"), cli::UsageError);
}

TEST(JsonOut, SeventeenDigitsRoundTrip) {
    nlohmann::ordered_json j;
    j["a"] = 0.1;
    j["b"] = 1.0 / 3.0;
    j["c"] = 3;
    j["v"] = {2.0 / 3.0, 1e-300};
    const auto text = cli::dump17(j);
    const auto back = nlohmann::json::parse(text);
    EXPECT_EQ(back["a"].get<double>(), 0.1);
    EXPECT_EQ(back["b"].get<double>(), 1.0 / 3.0);
    EXPECT_EQ(back["v"][1].get<double>(), 1e-300);
    EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
    EXPECT_EQ(cli::fmt17(0.1), "0.10000000000000001");
}
