#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "safpat/facts.hpp"
#include "safpat/recommender.hpp"
#include "subset_oracle.hpp"

using namespace safpat;
using safpat::testing::load_fixture;

namespace {

std::set<std::vector<Id>> anchors(const std::vector<Candidate>& cs) {
    std::set<std::vector<Id>> out;
    for (const auto& c : cs) out.insert(c.anchor);
    return out;
}

std::vector<std::vector<std::size_t>> selections(const std::vector<Scenario>& ss) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& s : ss) out.push_back(s.selected);
    return out;
}

std::vector<std::vector<std::size_t>> selections(const std::vector<safpat::testing::NaiveScenario>& ss) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& s : ss) out.push_back(s.selected);
    return out;
}

std::set<Id> controlled(const ControllabilityReport& r) {
    std::set<Id> out;
    for (const auto& [id, st] : r.hazards)
        if (st.status == Status::Controlled) out.insert(id);
    return out;
}

SystemModel random_explored(std::mt19937& rng) {
    safpat::testing::GenLimits lim;
    lim.max_patterns = 1;
    lim.max_budget = 2;
    for (;;) {
        auto m = safpat::testing::random_model(rng, lim);
        if (generate_candidates(m).size() <= 10) return m;
    }
}

}  // namespace

TEST(Generate, SafMonOnAcc) {
    const auto acc = load_fixture("acc.sp");
    EXPECT_EQ(anchors(gen_safmon_candidates(acc)), (std::set<std::vector<Id>>{{"accm"}, {"ds"}, {"vs"}}));

    auto covered = acc;
    covered.patterns.push_back(
        {SafetyMonitor{"nuX", "accm", FullCoverage{}, FullCoverage{}, "nuxs", FreshBundle{"nuxi"},
                       FreshBundle{"nuxo"}, "nuxm"},
         {}});
    EXPECT_EQ(anchors(gen_safmon_candidates(covered)), (std::set<std::vector<Id>>{{"ds"}, {"vs"}}));
}

TEST(Generate, TmrOnAcc) {
    const auto acc = load_fixture("acc.sp");
    const auto cs = gen_tmr_candidates(acc);
    EXPECT_EQ(anchors(cs), (std::set<std::vector<Id>>{{"ds", "dsaccm"}, {"vs", "vsaccm"}}));
    for (const auto& c : cs) EXPECT_EQ(c.kind, PatternKind::Tmr);
}

TEST(Generate, WatchdogOnAcc) {
    EXPECT_EQ(anchors(gen_watchdog_candidates(load_fixture("acc.sp"))), (std::set<std::vector<Id>>{{"acc"}}));
}

TEST(Generate, TwoProgSoftwareOnly) {
    auto acc = load_fixture("acc.sp");
    EXPECT_EQ(anchors(gen_twoprog_candidates(acc)), (std::set<std::vector<Id>>{{"accm"}}));
    for (auto& c : acc.components)
        if (c.id == "ds") c.impl = Impl::Software;
    EXPECT_EQ(anchors(gen_twoprog_candidates(acc)), (std::set<std::vector<Id>>{{"accm"}, {"ds"}}));
}

TEST(Generate, HdrOnBms) {
    const auto bms = load_fixture("bms.sp");
    const auto as = anchors(gen_hdr_candidates(bms));
    EXPECT_TRUE(as.count({"bms", "ci", "bat"}));
    EXPECT_TRUE(as.count({"bms", "fw", "ci"}));
    EXPECT_TRUE(gen_hdr_candidates(load_fixture("acc.sp")).empty());
}

TEST(Generate, HdrMatchesBruteForceBindings) {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto m = safpat::testing::random_model(rng);
        m.set_budget(PatternKind::Hdr, 1);
        std::set<std::tuple<std::string, std::string, std::string>> got;
        for (const auto& c : gen_hdr_candidates(m)) got.emplace(c.anchor[0], c.anchor[1], c.anchor[2]);
        EXPECT_EQ(got, safpat::testing::naive_hdr_anchors(m)) << serialize(m);
    }
}

TEST(Generate, FreshIdsNeverCollide) {
    std::mt19937 rng(6);
    for (int i = 0; i < 100; ++i) {
        const auto m = random_explored(rng);
        const auto cs = generate_candidates(m);
        const auto taken = all_identifiers(m);
        std::set<Id> minted;
        for (const auto& c : cs) {
            SystemModel one;
            one.patterns.push_back(c.instance);
            for (const auto& id : all_identifiers(one)) {
                if (id == c.instance.anchor() || m.find_component(id) || m.find_channel(id)) continue;
                EXPECT_FALSE(taken.count(id)) << id;
                EXPECT_TRUE(minted.insert(id).second) << id;
            }
        }
    }
}

TEST(Generate, AccNamesAndOrder) {
    const auto cs = generate_candidates(load_fixture("acc.sp"));
    ASSERT_EQ(cs.size(), 7u);
    std::vector<PatternKind> kinds;
    for (const auto& c : cs) kinds.push_back(c.kind);
    EXPECT_TRUE(std::is_sorted(kinds.begin(), kinds.end()));
    EXPECT_EQ(cs.front().instance.id(), "nuSafMon1");
    EXPECT_EQ(format_pattern(cs.front().instance),
              "safMon(nuSafMon1,accm,allInputs,allOutputs,nuSC1,numin1,numout1,numcp1)");
}

TEST(Enumerate, NoCandidatesGivesBaseScenario) {
    const auto bms = load_fixture("bms.sp");
    const auto ss = enumerate_scenarios(bms, {});
    ASSERT_EQ(ss.size(), 1u);
    EXPECT_TRUE(ss[0].selected.empty());
    EXPECT_EQ(ss[0].report, compute_controllability(merge_candidates(bms, {}, {})));
}

TEST(Enumerate, MatchesSubsetOracle) {
    std::mt19937 rng(7);
    for (int i = 0; i < 60; ++i) {
        const auto m = random_explored(rng);
        const auto cs = generate_candidates(m);
        const auto got = enumerate_scenarios(m, cs);
        const auto want = safpat::testing::naive_scenarios(m, cs);
        ASSERT_EQ(got.size(), want.size()) << serialize(m);
        for (std::size_t k = 0; k < got.size(); ++k) EXPECT_EQ(safpat::testing::to_naive(got[k]), want[k]);
    }
}

TEST(Enumerate, LexicographicOrder) {
    const auto acc = load_fixture("acc.sp");
    const auto ss = enumerate_scenarios(acc, generate_candidates(acc));
    EXPECT_EQ(ss.size(), 64u);
    const auto sel = selections(ss);
    EXPECT_TRUE(std::is_sorted(sel.begin(), sel.end()));
    EXPECT_TRUE(sel.front().empty());
}

TEST(Enumerate, ParallelEqualsSerial) {
    const auto acc = load_fixture("acc.sp");
    const auto cs = generate_candidates(acc);
    const auto serial = enumerate_scenarios(acc, cs, {24, 1});
    for (unsigned w : {2u, 3u, 8u}) {
        const auto par = enumerate_scenarios(acc, cs, {24, w});
        ASSERT_EQ(par.size(), serial.size());
        for (std::size_t k = 0; k < par.size(); ++k) {
            EXPECT_EQ(par[k].selected, serial[k].selected);
            EXPECT_EQ(par[k].report, serial[k].report);
        }
    }
}

TEST(Enumerate, HardCap) {
    const auto acc = load_fixture("acc.sp");
    const auto cs = generate_candidates(acc);
    EXPECT_THROW(enumerate_scenarios(acc, cs, {6, 1}), SearchCapExceeded);
    EXPECT_NO_THROW(enumerate_scenarios(acc, cs, {7, 1}));
    try {
        recommend(acc, {2, 1});
        FAIL();
    } catch (const SearchCapExceeded& e) {
        EXPECT_EQ(e.count, 7u);
        EXPECT_EQ(e.cap, 2u);
    }
}

TEST(Budgets, DistinctAnchorsPerKind) {
    const auto acc = load_fixture("acc.sp");
    const auto cs = generate_candidates(acc);
    std::vector<std::size_t> safmons, tmrs;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (cs[i].kind == PatternKind::SafMon) safmons.push_back(i);
        if (cs[i].kind == PatternKind::Tmr) tmrs.push_back(i);
    }
    EXPECT_TRUE(within_budgets(acc, cs, {safmons[0]}));
    EXPECT_FALSE(within_budgets(acc, cs, {safmons[0], safmons[1]}));
    EXPECT_TRUE(within_budgets(acc, cs, tmrs));
}

TEST(SelectBest, MatchesNaiveBest) {
    std::mt19937 rng(8);
    for (int i = 0; i < 60; ++i) {
        const auto m = random_explored(rng);
        const auto cs = generate_candidates(m);
        const auto best = select_best(enumerate_scenarios(m, cs));
        EXPECT_EQ(selections(best), selections(safpat::testing::naive_best(safpat::testing::naive_scenarios(m, cs))))
            << serialize(m);
    }
}

TEST(Recommend, AccFourCompleteArchitectures) {
    const auto acc = load_fixture("acc.sp");
    const auto r = recommend(acc);
    EXPECT_EQ(r.candidates.size(), 7u);
    EXPECT_EQ(r.total_scenarios, 64u);
    ASSERT_EQ(r.best.size(), 4u);
    EXPECT_EQ(r.complete.size(), 4u);
    for (const auto& s : r.best) {
        EXPECT_TRUE(s.complete());
        EXPECT_EQ(s.score.severity_weight, 20);
    }
    std::set<std::string> first;
    for (auto i : r.best[0].selected)
        first.insert(std::string(r.candidates[i].instance.id()));
    EXPECT_EQ(first, (std::set<std::string>{"nuSafMon1", "nuWD1", "nuTMR1", "nuTMR2"}));
}

TEST(Recommend, BmsWithAssumption) {
    const auto bms = assume_controlled(load_fixture("bms.sp"), "canerr");
    const auto r = recommend(bms);
    EXPECT_EQ(r.candidates.size(), 8u);
    EXPECT_EQ(r.total_scenarios, 16u);
    EXPECT_EQ(r.complete.size(), 5u);
    std::set<std::vector<Id>> hdrs;
    for (auto k : r.complete) {
        const auto& s = r.best[k];
        ASSERT_EQ(s.selected.size(), 2u);
        EXPECT_EQ(r.candidates[s.selected[0]].anchor, std::vector<Id>{"bms"});
        hdrs.insert(r.candidates[s.selected[1]].anchor);
    }
    EXPECT_EQ(hdrs, (std::set<std::vector<Id>>{{"bat", "fw", "ci"},
                                               {"bms", "fw", "ci"},
                                               {"bms", "fw", "bat"},
                                               {"bms", "ci", "bat"},
                                               {"can", "ci", "bat"}}));
}

TEST(Recommend, BmsWithoutAssumptionIsIncomplete) {
    const auto r = recommend(load_fixture("bms.sp"));
    EXPECT_TRUE(r.complete.empty());
    EXPECT_FALSE(r.best.empty());
}

TEST(Recommend, MergedModelReproducesReport) {
    const auto acc = load_fixture("acc.sp");
    const auto r = recommend(acc);
    for (const auto& s : r.best) {
        const auto merged = merge_candidates(acc, r.candidates, s.selected);
        EXPECT_TRUE(merged.exploration);
        EXPECT_TRUE(validate_model(merged).empty());
        EXPECT_EQ(compute_controllability(merged), s.report);
        const auto reparsed = parse_facts(serialize(merged));
        ASSERT_TRUE(reparsed.ok());
        EXPECT_EQ(controlled(compute_controllability(*reparsed.model)), controlled(s.report));
    }
}

TEST(Recommend, TightBudgetsLeaveAccIncomplete) {
    auto acc = load_fixture("acc.sp");
    acc.set_budget(PatternKind::Tmr, 0);
    acc.set_budget(PatternKind::SafMon, 0);
    acc.set_budget(PatternKind::TwoProg, 0);
    acc.set_budget(PatternKind::Watchdog, 1);
    const auto r = recommend(acc);
    EXPECT_TRUE(r.complete.empty());
    EXPECT_EQ(r.candidates.size(), 1u);
    EXPECT_EQ(r.best.at(0).score.controlled, 1u);
}

TEST(Recommend, BestScoreMonotoneInBudget) {
    std::mt19937 rng(9);
    for (int i = 0; i < 40; ++i) {
        auto m = random_explored(rng);
        if (m.explore.empty()) continue;
        const auto lo = recommend(m);
        auto more = m;
        const auto k = m.explore[0].kind;
        more.set_budget(k, *m.budget(k) + 1);
        if (generate_candidates(more).size() > 12) continue;
        const auto hi = recommend(more);
        ASSERT_FALSE(lo.best.empty());
        ASSERT_FALSE(hi.best.empty());
        EXPECT_LE(lo.best[0].score, hi.best[0].score) << serialize(m);
    }
}

TEST(Recommend, Deterministic) {
    const auto bms = assume_controlled(load_fixture("bms.sp"), "canerr");
    const auto a = recommend(bms, {24, 4});
    const auto b = recommend(bms, {24, 1});
    EXPECT_EQ(a.candidates, b.candidates);
    EXPECT_EQ(selections(a.best), selections(b.best));
    EXPECT_EQ(a.complete, b.complete);
}
