#include "doctest.h"
#include "synthetic.hpp"

#include "tde/ensemble.hpp"
#include "tde/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace tde;

namespace {

EnsembleConfig small(Variant v, std::size_t k = 20, std::size_t s = 5, std::uint64_t seed = 3) {
    EnsembleConfig c;
    c.variant = v;
    c.k = k;
    c.s = s;
    c.seed = seed;
    c.random_warmup = 5;
    return c;
}

/// Arrival indices of the s best logged candidates, earliest first among ties.
std::set<std::size_t> replay_top_s(const BuildLog& log, std::size_t s) {
    auto c = log.candidates;
    std::stable_sort(c.begin(), c.end(),
                     [](const CandidateRecord& a, const CandidateRecord& b) { return a.accuracy > b.accuracy; });
    std::set<std::size_t> out;
    for (std::size_t i = 0; i < std::min(s, c.size()); ++i) out.insert(c[i].arrival);
    return out;
}

} // namespace

TEST_CASE("variant names") {
    CHECK(parse_variant("tde") == Variant::TDE);
    CHECK(parse_variant("cS-BOSS") == Variant::cSBOSS);
    CHECK(parse_variant("s_boss") == Variant::SBOSS);
    CHECK(to_string(Variant::cBOSS) == "cBOSS");
    CHECK_THROWS_AS(parse_variant("rocket"), Error);
}

TEST_CASE("BOSS window grid") {
    const auto g = boss_window_grid(40);
    CHECK(g.size() == 10);
    CHECK(g.front() == 10);
    CHECK(g.back() == 40);
    CHECK(std::adjacent_find(g.begin(), g.end(), std::greater_equal<>()) == g.end());
    CHECK(boss_window_grid(8) == std::vector<int>{8});
    const auto g150 = boss_window_grid(150);
    CHECK(g150.size() == 37);
    CHECK(g150[1] == 14); // 10 + 140/36 = 13.89
}

TEST_CASE("BOSS ensemble evaluates the full grid and keeps members near the best") {
    const auto data = synth::shapes(6, 40, 2);
    const auto ens = build_boss_ensemble(data);
    CHECK(ens.log().candidates.size() == 100);
    double best = 0.0;
    for (const auto& c : ens.log().candidates) best = std::max(best, c.accuracy);
    std::size_t eligible = 0;
    for (const auto& c : ens.log().candidates) eligible += c.accuracy >= 0.92 * best ? 1 : 0;
    CHECK(ens.members().size() == eligible);
    for (std::size_t i = 0; i < ens.members().size(); ++i) {
        CHECK(ens.members()[i].train_accuracy() >= 0.92 * best);
        CHECK(ens.weights()[i] == 1.0);
        CHECK(ens.log().candidates[ens.arrivals()[i]].accuracy == ens.members()[i].train_accuracy());
        CHECK(ens.members()[i].distance() == DistanceKind::Boss);
    }
}

TEST_CASE("S-BOSS keeps one winner per word length") {
    const auto data = synth::shapes(5, 40, 5);
    EnsembleConfig c;
    c.variant = Variant::SBOSS;
    c.word_lengths = {8, 12};
    const auto ens = build_sboss(data, c);
    CHECK(ens.members().size() <= 2);
    CHECK(ens.log().candidates.size() == 2 * (20 + 2));
    for (const auto& m : ens.members()) CHECK(m.distance() == DistanceKind::HistogramIntersection);
}

TEST_CASE("parameter space enumeration") {
    EnsembleConfig c;
    c.variant = Variant::TDE;
    const auto r = parameter_space(c, 20);
    CHECK(r.size() == 5 * 11 * 2 * 3 * 2);
    CHECK(r.front().sfa.word_length == 16);
    CHECK(r.front().sfa.window_length == 10);
    CHECK(r.front().bigrams);
    CHECK(r[1].sfa.binning == Binning::IGB);
    c.variant = Variant::cBOSS;
    const auto rc = parameter_space(c, 20);
    CHECK(rc.size() == 5 * 11 * 2);
    for (const auto& p : rc) {
        CHECK(p.levels == 1);
        CHECK_FALSE(p.bigrams);
    }
    // l=16 with normalisation needs 9 coefficients: illegal for m = 8.
    CHECK(parameter_space(c, 8).size() == 5 * 1 * 2 - 1);
}

TEST_CASE("contracted ensembles keep the top s candidates with accuracy^4 weights") {
    const auto data = synth::shapes(10, 48, 7);
    for (Variant v : {Variant::cBOSS, Variant::cSBOSS, Variant::TDE}) {
        const auto ens = build_ensemble(data, small(v, 24, 6));
        CHECK(ens.log().candidates.size() == 24);
        CHECK(ens.members().size() == 6);
        const auto expected = replay_top_s(ens.log(), 6);
        CHECK(std::set<std::size_t>(ens.arrivals().begin(), ens.arrivals().end()) == expected);
        for (std::size_t i = 0; i < ens.members().size(); ++i) {
            const double acc = ens.members()[i].train_accuracy();
            CHECK(ens.log().candidates[ens.arrivals()[i]].accuracy == acc);
            CHECK(ens.weights()[i] == std::pow(acc, 4));
            CHECK(ens.members()[i].train_labels().size() == 14); // ceil(0.7 * 20)
        }
    }
}

TEST_CASE("builds are deterministic under a seed") {
    const auto data = synth::shapes(6, 40, 1);
    const auto a = build_tde(data, small(Variant::TDE, 12, 4, 42));
    const auto b = build_tde(data, small(Variant::TDE, 12, 4, 42));
    REQUIRE(a.log().candidates.size() == b.log().candidates.size());
    for (std::size_t i = 0; i < a.log().candidates.size(); ++i) {
        CHECK(a.log().candidates[i].params == b.log().candidates[i].params);
        CHECK(a.log().candidates[i].accuracy == b.log().candidates[i].accuracy);
    }
    CHECK(a.arrivals() == b.arrivals());
}

TEST_CASE("TDE reduces to cBOSS and cS-BOSS") {
    const auto train = synth::shapes(8, 40, 11);
    const auto test = synth::shapes(5, 40, 12);
    auto tde_cfg = small(Variant::TDE, 15, 5, 9);
    tde_cfg.use_gp = false;
    tde_cfg.bigrams = false;
    tde_cfg.binnings = {Binning::MCB};

    auto as_cboss = tde_cfg;
    as_cboss.max_levels = 1;
    as_cboss.distance = DistanceKind::Boss;
    auto cboss_cfg = small(Variant::cBOSS, 15, 5, 9);

    const auto t1 = build_tde(train, as_cboss);
    const auto c1 = build_cboss(train, cboss_cfg);
    const auto t2 = build_tde(train, tde_cfg);
    const auto c2 = build_csboss(train, small(Variant::cSBOSS, 15, 5, 9));
    for (const auto& s : test.series) {
        CHECK(t1.predict(s).distribution == c1.predict(s).distribution);
        CHECK(t2.predict(s).distribution == c2.predict(s).distribution);
    }
}

TEST_CASE("time contract stops the build") {
    const auto data = synth::shapes(10, 60, 3);
    auto c = small(Variant::cBOSS, 5, 3);
    c.time_contract = Seconds(0.0);
    CHECK(build_cboss(data, c).members().size() == 1);
    c.time_contract = Seconds(0.1);
    const auto ens = build_cboss(data, c);
    CHECK(ens.log().contract_reached);
    CHECK(ens.log().candidates.size() > 5); // k is ignored under a contract
    double longest = 0.0;
    for (const auto& cand : ens.log().candidates) longest = std::max(longest, cand.seconds);
    CHECK(ens.log().total_seconds <= 0.1 + longest + 0.05);
}

TEST_CASE("prediction distribution and vote fallback") {
    const auto data = synth::shapes(6, 40, 4);
    const auto ens = build_cboss(data, small(Variant::cBOSS, 8, 4));
    for (const auto& s : data.series) {
        const auto p = ens.predict(s);
        double sum = 0.0;
        for (double v : p.distribution) sum += v;
        CHECK(sum == doctest::Approx(1.0));
        CHECK(p.distribution[static_cast<std::size_t>(p.label)] ==
              *std::max_element(p.distribution.begin(), p.distribution.end()));
    }
    const Ensemble zero(ens.config(), ens.class_names(), 40, ens.members(),
                        std::vector<double>(ens.members().size(), 0.0));
    double sum = 0.0;
    for (double v : zero.predict(data.series[0]).distribution) sum += v;
    CHECK(sum == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)ens.predict(std::vector<double>(39, 0.0)), Error);
}

TEST_CASE("variant-specific builders reject other variants") {
    const auto data = synth::shapes(4, 30, 0);
    CHECK_THROWS_AS(build_tde(data, small(Variant::cBOSS)), Error);
    CHECK_THROWS_AS(build_cboss(data, small(Variant::TDE)), Error);
    auto bad = small(Variant::TDE);
    bad.s = 0;
    CHECK_THROWS_AS(build_tde(data, bad), Error);
}

TEST_CASE("model container round-trips") {
    const auto train = synth::shapes(6, 40, 8);
    const auto test = synth::shapes(4, 40, 9);
    const auto ens = build_tde(train, small(Variant::TDE, 10, 4));
    const auto bytes = serialize(ens);
    const auto back = deserialize(bytes);
    CHECK(back.class_names() == ens.class_names());
    CHECK(back.weights() == ens.weights());
    CHECK(back.arrivals() == ens.arrivals());
    REQUIRE(back.members().size() == ens.members().size());
    for (std::size_t i = 0; i < ens.members().size(); ++i) {
        CHECK(back.members()[i].params() == ens.members()[i].params());
        CHECK(back.members()[i].transform().breakpoints() == ens.members()[i].transform().breakpoints());
        CHECK(back.members()[i].train_bags() == ens.members()[i].train_bags());
    }
    for (const auto& s : test.series) CHECK(back.predict(s).distribution == ens.predict(s).distribution);
    CHECK(serialize(back) == bytes);

    std::vector<std::uint8_t> junk{1, 2, 3};
    CHECK_THROWS_AS(deserialize(junk), Error);
}
