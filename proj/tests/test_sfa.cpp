#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"

#include "tde/error.hpp"
#include "tde/sfa.hpp"

#include <cmath>
#include <limits>
#include <optional>

using namespace tde;

namespace {

oracle::WordMap as_map(const Bag& bag) {
    oracle::WordMap out;
    for (const auto& e : bag) out[{e.word.is_bigram(), e.word.level(), e.word.region(), e.word.letters}] += e.count;
    return out;
}

BreakpointTable table_from(std::vector<std::vector<double>> rows) { return {4, std::move(rows)}; }

} // namespace

TEST_CASE("window_dft matches the naive transform") {
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t w = 8 + uniform_index(rng, 40);
        const int l = 2 * static_cast<int>(1 + uniform_index(rng, 4));
        const bool p = uniform_index(rng, 2) == 0;
        const auto x = synth::noise(rng, w, 3.0);
        const auto got = window_dft(x, l, p);
        const auto want = oracle::sfa_coefficients(x, l, p);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
    }
}

TEST_CASE("constant window gives zero normalised coefficients") {
    const std::vector<double> x(12, 4.25);
    for (double v : window_dft(x, 8, true)) CHECK(v == 0.0);
    const auto raw = window_dft(x, 4, false);
    CHECK(raw[0] == doctest::Approx(12 * 4.25));
    CHECK(raw[1] == doctest::Approx(0.0));
}

TEST_CASE("sliding_dft agrees with per-window transforms over long series") {
    Rng rng(3);
    const auto x = synth::noise(rng, 600, 2.0);
    for (bool p : {true, false}) {
        const auto all = sliding_dft(x, 37, 10, p);
        REQUIRE(all.size() == 600 - 37 + 1);
        for (std::size_t j = 0; j < all.size(); j += 17) {
            const auto want = oracle::sfa_coefficients(std::vector<double>(x.begin() + static_cast<long>(j),
                                                                           x.begin() + static_cast<long>(j + 37)),
                                                       10, p);
            for (std::size_t i = 0; i < want.size(); ++i) {
                CHECK(all[j][i] == doctest::Approx(want[i]).epsilon(1e-9).scale(1.0));
            }
        }
    }
}

TEST_CASE("discretise counts breakpoints strictly below") {
    const auto table = table_from({{-1, 0, 1}, {-1, 0, 1}, {-1, 0, 1}, {-1, 0, 1}});
    const std::vector<double> c{-5.0, 0.0, 0.5, 7.0};
    const auto packed = discretise(c, table);
    CHECK(unpack_letters(packed, 4) == std::vector<int>{0, 1, 2, 3});
    CHECK(packed == ((0u << 6) | (1u << 4) | (2u << 2) | 3u));

    Rng rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<std::vector<double>> rows;
        std::vector<double> coeffs;
        for (int i = 0; i < 6; ++i) {
            auto r = synth::noise(rng, 3);
            std::sort(r.begin(), r.end());
            if (rep % 3 == 0) r[2] = std::numeric_limits<double>::infinity();
            rows.push_back(r);
            coeffs.push_back(rep % 4 == 0 ? r[uniform_index(rng, 2)] : synth::noise(rng, 1)[0]);
        }
        CHECK(unpack_letters(discretise(coeffs, table_from(rows)), 6) == oracle::scan_letters(coeffs, rows));
    }
}

TEST_CASE("MCB breakpoints are equal-frequency quantiles per column") {
    Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 4 + uniform_index(rng, 60);
        std::vector<std::vector<double>> coeffs(n);
        for (auto& row : coeffs) row = synth::noise(rng, 4);
        const auto table = mcb_fit(coeffs, 4);
        REQUIRE(table.rows.size() == 4);
        for (std::size_t col = 0; col < 4; ++col) {
            std::vector<double> column;
            for (const auto& r : coeffs) column.push_back(r[col]);
            CHECK(table.rows[col] == oracle::quantile_breakpoints(column, 4));
        }
    }
}

TEST_CASE("MCB on a known column") {
    std::vector<std::vector<double>> coeffs;
    for (int v : {8, 1, 7, 2, 6, 3, 5, 4}) coeffs.push_back({static_cast<double>(v)});
    const auto table = mcb_fit(coeffs, 4);
    CHECK(table.rows[0] == std::vector<double>{2.5, 4.5, 6.5});
}

TEST_CASE("IGB splits separate perfectly separable classes") {
    std::vector<std::vector<double>> coeffs;
    std::vector<ClassId> labels;
    for (int i = 0; i < 10; ++i) {
        coeffs.push_back({static_cast<double>(i)});
        labels.push_back(i < 5 ? 0 : 1);
    }
    const auto table = igb_fit(coeffs, labels, 4);
    REQUIRE(table.rows[0].size() == 3);
    CHECK(table.rows[0][0] == 4.5);
    // No further positive-gain split: the rest is padding.
    CHECK(std::isinf(table.rows[0][2]));
}

TEST_CASE("IGB first split maximises information gain") {
    Rng rng(21);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 6 + uniform_index(rng, 30);
        std::vector<std::vector<double>> coeffs;
        std::vector<int> labels;
        std::vector<double> column;
        for (std::size_t i = 0; i < n; ++i) {
            const int c = static_cast<int>(uniform_index(rng, 3));
            const double v = std::round((synth::noise(rng, 1)[0] + c) * 4.0) / 4.0;
            coeffs.push_back({v});
            labels.push_back(c);
            column.push_back(v);
        }
        const auto table = igb_fit(coeffs, labels, 2);
        const auto mids = oracle::candidate_midpoints(column);
        double best = oracle::binned_entropy(column, labels, {});
        for (double mid : mids) best = std::min(best, oracle::binned_entropy(column, labels, {mid}));
        const double base = oracle::binned_entropy(column, labels, {});
        if (best < base - 1e-9) {
            CHECK(oracle::binned_entropy(column, labels, {table.rows[0][0]}) == doctest::Approx(best).epsilon(1e-12));
        } else {
            CHECK(table.rows[0] == oracle::quantile_breakpoints(column, 2));
        }
    }
}

TEST_CASE("IGB with alphabet 4 is greedy over successive splits") {
    Rng rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<std::vector<double>> coeffs;
        std::vector<int> labels;
        std::vector<double> column;
        for (int i = 0; i < 40; ++i) {
            const int c = static_cast<int>(uniform_index(rng, 4));
            const double v = synth::noise(rng, 1, 0.6)[0] + 2.0 * c;
            coeffs.push_back({v});
            labels.push_back(c);
            column.push_back(v);
        }
        const auto row = igb_fit(coeffs, labels, 4).rows[0];
        REQUIRE(row.size() == 3);
        CHECK(std::is_sorted(row.begin(), row.end()));
        // The final cut set is no worse than any single best split plus any other midpoint.
        const auto mids = oracle::candidate_midpoints(column);
        double single = 1e9;
        for (double a : mids) single = std::min(single, oracle::binned_entropy(column, labels, {a}));
        CHECK(oracle::binned_entropy(column, labels, row) <= single + 1e-12);
    }
}

TEST_CASE("series_to_bag matches brute-force windows, words and reduction") {
    Rng rng(17);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t m = 20 + uniform_index(rng, 80);
        SfaParameters p;
        p.word_length = 2 * static_cast<int>(1 + uniform_index(rng, 4));
        p.normalise = uniform_index(rng, 2) == 0;
        p.window_length = static_cast<int>(10 + uniform_index(rng, m - 9));
        const auto x = synth::noise(rng, m);
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < p.word_length; ++i) {
            auto r = synth::noise(rng, 3, p.normalise ? 1.0 : 4.0);
            std::sort(r.begin(), r.end());
            rows.push_back(r);
        }
        const BreakpointTable table{4, rows};
        std::vector<std::uint64_t> words;
        const auto w = static_cast<std::size_t>(p.window_length);
        for (std::size_t j = 0; j + w <= m; ++j) {
            const std::vector<double> win(x.begin() + static_cast<long>(j), x.begin() + static_cast<long>(j + w));
            std::uint64_t packed = 0;
            for (int letter : oracle::scan_letters(oracle::sfa_coefficients(win, p.word_length, p.normalise), rows)) {
                packed = (packed << 2) | static_cast<std::uint64_t>(letter);
            }
            words.push_back(packed);
        }
        for (bool bigrams : {false, true}) {
            CHECK(as_map(series_to_bag(x, p, table, bigrams)) == oracle::bag_from_word_list(words, w, bigrams));
        }
    }
}

TEST_CASE("numerosity reduction keeps only the first of a run") {
    const std::vector<WordAt> words{{0, 1}, {1, 1}, {2, 2}, {3, 1}, {4, 1}};
    const Bag reduced = bag_from_words(words, 3);
    CHECK(reduced.count({1, 0}) == 2);
    CHECK(reduced.count({2, 0}) == 1);
    const Bag full = bag_from_words(words, 3, {false, false});
    CHECK(full.count({1, 0}) == 4);
    const Bag bi = bag_from_words(words, 3, {true, true});
    CHECK(bi.count(SfaWord::bigram(1, 1)) == 2); // (0,3) and (1,4)
    CHECK(bi.total() == 3 + 2);
}

TEST_CASE("parameter validation") {
    auto code_of = [](const SfaParameters& p, std::size_t m) -> std::optional<ErrorCode> {
        try {
            p.validate(m);
        } catch (const Error& e) {
            return e.code();
        }
        return std::nullopt;
    };
    SfaParameters p;
    p.word_length = 16;
    p.window_length = 8;
    CHECK(code_of(p, 100) == ErrorCode::InsufficientWindow); // needs 9 with normalisation
    p.normalise = false;
    CHECK_NOTHROW(p.validate(100));
    p.word_length = 7;
    CHECK(code_of(p, 100) == ErrorCode::InvalidArgument);
    p.word_length = 8;
    p.window_length = 10;
    CHECK(code_of(p, 9) == ErrorCode::SeriesTooShort);
    CHECK_NOTHROW(p.validate(10));
}

TEST_CASE("SfaTransform fit and words are consistent") {
    const auto data = synth::shapes(10, 60, 4);
    for (Binning b : {Binning::MCB, Binning::IGB}) {
        SfaParameters p;
        p.window_length = 20;
        p.binning = b;
        std::vector<std::vector<WordAt>> train_words;
        const auto tr = SfaTransform::fit(data.series, data.labels, p, &train_words);
        REQUIRE(train_words.size() == data.size());
        for (std::size_t i = 0; i < data.size(); ++i) CHECK(train_words[i] == tr.words(data.series[i]));
        CHECK(tr.breakpoints().rows.size() == 8);
        if (b == Binning::MCB) {
            std::vector<std::vector<double>> coeffs;
            for (const auto& s : data.series) {
                for (auto& c : sliding_dft(s, 20, 8, true)) coeffs.push_back(c);
            }
            CHECK(tr.breakpoints() == mcb_fit(coeffs, 4));
        }
    }
}
