#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string_view>
#include <vector>

#include "oracle_helpers.hpp"
#include "skillcap/complexity.hpp"
#include "skillcap/rng.hpp"

using namespace skillcap;
using namespace skillcap::features;

namespace {

std::vector<int> symbols(std::string_view text) {
    std::vector<int> out;
    for (char c : text) out.push_back(static_cast<int>(c));
    return out;
}

} // namespace

TEST_CASE("lzw_code_count: hand-run fixtures") {
    CHECK(lzw_code_count(symbols("a")) == 1);
    CHECK(lzw_code_count(symbols("aaaa")) == 3);
    CHECK(lzw_code_count(symbols("abababa")) == 4);
    CHECK_THROWS_AS(lzw_code_count({}), std::invalid_argument);
}

TEST_CASE("lzw_code_count: bounded by length, tight for distinct symbols") {
    CHECK(lzw_code_count(symbols("abcdef")) == 6);
    rng::Rng gen(21);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<int> seq;
        const int n = 1 + static_cast<int>(gen.next_below(200));
        const int k = 1 + static_cast<int>(gen.next_below(5));
        for (int i = 0; i < n; ++i) seq.push_back(static_cast<int>(gen.next_below(k)));
        const int codes = lzw_code_count(seq);
        CHECK(codes >= 1);
        CHECK(codes <= n);
    }
}

TEST_CASE("huffman_bits: fixtures") {
    CHECK(huffman_bits(symbols("aabb")) == 4);   // two equiprobable symbols
    CHECK(huffman_bits(symbols("aaaa")) == 4);   // degenerate 1-bit code
    // skewed distribution {a:4, b:2, c:1, d:1}
    const auto seq = symbols("aaaabbcd");
    CHECK(huffman_bits(seq) == oracle::best_prefix_code_bits({4, 2, 1, 1}));
    CHECK(huffman_bits(seq) == 14);
    CHECK_THROWS_AS(huffman_bits({}), std::invalid_argument);
}

TEST_CASE("huffman_bits: optimal against exhaustive prefix-code search") {
    rng::Rng gen(22);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 2 + static_cast<int>(gen.next_below(5)); // up to 6 symbols
        std::vector<int> seq;
        std::vector<std::int64_t> weights;
        for (int s = 0; s < k; ++s) {
            const int reps = 1 + static_cast<int>(gen.next_below(9));
            weights.push_back(reps);
            for (int i = 0; i < reps; ++i) seq.push_back(s);
        }
        gen.shuffle(seq);
        CHECK(huffman_bits(seq) == oracle::best_prefix_code_bits(weights));
    }
}

TEST_CASE("huffman_bits: within [H, H+1) bits per symbol") {
    rng::Rng gen(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> seq;
        const int k = 2 + static_cast<int>(gen.next_below(8));
        const int n = k + static_cast<int>(gen.next_below(300));
        for (int i = 0; i < n; ++i) seq.push_back(static_cast<int>(gen.next_below(k)));
        std::set<int> alphabet(seq.begin(), seq.end());
        if (alphabet.size() < 2) continue;
        const double h = shannon_entropy(seq);
        const double bits = static_cast<double>(huffman_bits(seq));
        CHECK(bits >= h * n - 1e-9);
        CHECK(bits < (h + 1.0) * n);
    }
}

TEST_CASE("shannon_entropy: fixtures exact") {
    CHECK(shannon_entropy(symbols("aaaa")) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(shannon_entropy(symbols("abab")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shannon_entropy(symbols("aabc")) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK_THROWS_AS(shannon_entropy({}), std::invalid_argument);
}

TEST_CASE("shannon_entropy: bounded by log2 alphabet size") {
    rng::Rng gen(24);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> seq;
        const int k = 1 + static_cast<int>(gen.next_below(10));
        const int n = 1 + static_cast<int>(gen.next_below(100));
        for (int i = 0; i < n; ++i) seq.push_back(static_cast<int>(gen.next_below(k)));
        std::set<int> alphabet(seq.begin(), seq.end());
        CHECK(shannon_entropy(seq) <=
              std::log2(static_cast<double>(alphabet.size())) + 1e-12);
    }
}

TEST_CASE("sample_entropy: constant series is 0") {
    const std::vector<double> series(32, 1.5);
    const auto got = sample_entropy(series);
    REQUIRE(got.has_value());
    CHECK(*got == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sample_entropy: matches brute-force template counting") {
    rng::Rng gen(25);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 10 + static_cast<int>(gen.next_below(190));
        std::vector<double> series;
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
            v = 0.7 * v + gen.next_normal(0, 1.0);
            series.push_back(v);
        }
        SampEnParams p;
        p.m = 1 + static_cast<int>(gen.next_below(3));
        p.r_tol = 0.15 + 0.2 * gen.next_double();
        bool undefined = false;
        const double want = oracle::sampen_bruteforce(series, p.m, p.r_tol, &undefined);
        const auto got = sample_entropy(series, p);
        if (undefined) {
            CHECK(!got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(*got == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("sample_entropy: scale covariance and edge cases") {
    rng::Rng gen(26);
    std::vector<double> series;
    for (int i = 0; i < 60; ++i) series.push_back(gen.next_normal(0, 1));
    const auto base = sample_entropy(series);
    std::vector<double> scaled;
    for (double v : series) scaled.push_back(3.0 * v);
    const auto same = sample_entropy(scaled);
    REQUIRE(base.has_value());
    REQUIRE(same.has_value());
    CHECK(*same == doctest::Approx(*base).epsilon(1e-9));

    CHECK_THROWS_AS(sample_entropy(std::vector<double>{1.0, 2.0, 3.0}, {2, 0.2}),
                    std::invalid_argument);
    // far-apart values: no template matches at all -> undefined sentinel
    const std::vector<double> sparse{0, 1e6, -2e6, 3e6, -4e6, 5e6};
    CHECK(!sample_entropy(sparse, {2, 0.01}).has_value());
}

TEST_CASE("dft_band_fractions: pure tone concentrates in its band") {
    const double fs = 20.0;
    std::vector<double> series;
    for (int i = 0; i < 200; ++i)
        series.push_back(std::sin(2.0 * M_PI * 2.0 * i / fs)); // 2 Hz
    const std::vector<Band> bands{{1.5, 2.5}};
    const auto got = dft_band_fractions(series, fs, bands);
    CHECK(got[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dft_band_fractions: constant signal has zero non-DC power") {
    const std::vector<double> series(64, 3.0);
    const std::vector<Band> bands{{0.0, 5.0}, {5.0, 10.0}};
    const auto got = dft_band_fractions(series, 20.0, bands);
    CHECK(got[0] == 0.0);
    CHECK(got[1] == 0.0);
}

TEST_CASE("dft_band_fractions: two-tone fixture matches the direct oracle") {
    const double fs = 50.0;
    std::vector<double> series;
    for (int i = 0; i < 250; ++i)
        series.push_back(std::sin(2.0 * M_PI * 3.0 * i / fs) +
                         0.5 * std::cos(2.0 * M_PI * 11.0 * i / fs) + 0.2);
    const std::vector<Band> bands{{0.0, 5.0}, {5.0, 15.0}, {15.0, 25.0}};
    const auto got = dft_band_fractions(series, fs, bands);
    const auto want = oracle::dft_fractions_direct(series, fs, bands);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
}

TEST_CASE("dft_band_fractions: partition of (0, Nyquist] sums to 1") {
    rng::Rng gen(27);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> series;
        const int n = 32 + static_cast<int>(gen.next_below(200));
        for (int i = 0; i < n; ++i) series.push_back(gen.next_normal(0, 1));
        const double fs = 100.0;
        const std::vector<Band> bands{{0.0, 10.0}, {10.0, 25.0}, {25.0, 50.0}};
        const auto got = dft_band_fractions(series, fs, bands);
        CHECK(got[0] + got[1] + got[2] == doctest::Approx(1.0).epsilon(1e-9));
    }
}
