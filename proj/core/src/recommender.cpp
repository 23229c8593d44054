#include "safpat/recommender.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <thread>

namespace safpat {

SearchCapExceeded::SearchCapExceeded(std::size_t n, std::size_t c)
    : std::runtime_error(std::to_string(n) + " candidate placements exceed the search cap of " + std::to_string(c) +
                         "; lower the explore budgets or raise the cap"),
      count(n),
      cap(c) {}

bool needs_placement(const SystemModel& model, const ControllabilityReport& base, const Hazard& hazard) {
    return classify(model, hazard.id) == HazardClass::Basic && !base.is_controlled(hazard.id);
}

namespace {

bool explored(const SystemModel& m, PatternKind k) {
    const auto b = m.budget(k);
    return b && *b > 0;
}

std::string fresh(std::string_view base, std::size_t k) {
    std::string s(base);
    if (!s.empty() && std::isdigit(static_cast<unsigned char>(s.back()))) s += '_';
    return s + std::to_string(k);
}

/// Hands out per-kind counters, skipping numbers whose identifiers collide
/// with anything already in the model.
class FreshNames {
  public:
    explicit FreshNames(const SystemModel& m) : taken_(all_identifiers(m)) {}

    /// `bound` holds the model elements the instance refers to; every other
    /// identifier in it must be unused.
    template <typename Make>
    PatternInstance next(PatternKind kind, const std::set<Id>& bound, Make make) {
        auto& k = counters_[kind];
        for (;;) {
            ++k;
            PatternInstance p{make(k), {}};
            if (!collides(p, bound)) {
                for (const auto& id : all_identifiers(single(p))) taken_.insert(id);
                return p;
            }
        }
    }

  private:
    static SystemModel single(const PatternInstance& p) {
        SystemModel m;
        m.patterns.push_back(p);
        return m;
    }
    bool collides(const PatternInstance& p, const std::set<Id>& bound) const {
        for (const auto& id : all_identifiers(single(p)))
            if (!bound.count(id) && (taken_.count(id) || id == p.anchor())) return true;
        return false;
    }

    std::set<Id> taken_;
    std::map<PatternKind, std::size_t> counters_;
};

SafetyMonitor make_safmon(const Id& cp, std::size_t k) {
    return SafetyMonitor{fresh("nuSafMon", k), cp,           FullCoverage{},
                         FullCoverage{},       fresh("nuSC", k), FreshBundle{fresh("numin", k)},
                         FreshBundle{fresh("numout", k)}, fresh("numcp", k)};
}

Watchdog make_watchdog(const Id& cp, std::size_t k) {
    return Watchdog{fresh("nuWD", k), cp, fresh("nuscwd", k), fresh("nulvwd", k), fresh("nuwd", k)};
}

Hdr make_hdr(const Id& cp1, const Id& chout, const Id& cp2, const Id& cpo, std::size_t k) {
    return Hdr{fresh("nuHDR", k),    cp1, chout, cp2, fresh("nuhchm1", k), fresh("nuhchm2", k),
               fresh("nuhvtcp", k), fresh("nuhcho", k), cpo};
}

Tmr make_tmr(const Id& cp1, const Id& ch1, std::size_t k) {
    return Tmr{fresh("nuTMR", k),  cp1,
               ch1,                fresh("nucp2", k),
               fresh("nucp3", k),  fresh("nuchm1", k),
               fresh("nuchm2", k), fresh("nuchm3", k),
               fresh("nuvtcp", k), fresh("nucho", k),
               fresh("nucpo", k)};
}

TwoProg make_twoprog(const Id& cp, std::size_t k) {
    return TwoProg{fresh("nu2Prog", k),
                   cp,
                   FullCoverage{},
                   FullCoverage{},
                   fresh("nucpv", k),
                   FreshBundle{fresh("nuvtin1", k)},
                   FreshBundle{fresh("nuvtin2", k)},
                   FreshBundle{fresh("nuvts", k)},
                   FreshBundle{fresh("nuvtouts", k)},
                   FreshBundle{fresh("nuchos", k)}};
}

// Components carrying a hazard of `type` that still needs a pattern.
std::vector<Id> anchors_needing(const SystemModel& model, HazardType type, bool software_only) {
    const auto base = compute_controllability(model);
    std::vector<Id> out;
    for (const auto& c : model.components) {
        if (software_only && c.impl != Impl::Software) continue;
        const bool wanted = std::any_of(model.hazards.begin(), model.hazards.end(), [&](const Hazard& h) {
            return h.component == c.id && h.type == type && needs_placement(model, base, h);
        });
        if (wanted) out.push_back(c.id);
    }
    return out;
}

struct HdrBinding {
    Id cp1, chout, cp2, cpo;
};

// Literal body of the path-redundancy generation rule:
//   hz(ID,CP,omission,SV), cp(CP1), cp(CP2), CP1 != CP, CP1 != CP2, CP1 != CPO, CP2 != CPO,
//   ch(CHOUT,CP1,_), ch(CHIN,_,CP2), ch(CH,CP,_), ch(CH1,_,CPO), if(IF,PATH),
//   before(CHOUT,CHIN,IF), before(CHOUT,CH,IF), before(CHIN,CH1,IF).
// Bindings are deduplicated on (CP1, CP2, CPO); the first CHOUT found is kept.
std::vector<HdrBinding> hdr_bindings(const SystemModel& model) {
    std::vector<HdrBinding> out;
    std::set<std::tuple<Id, Id, Id>> seen;
    for (const auto& hz : model.hazards) {
        if (hz.type != HazardType::Omission || !model.find_component(hz.component)) continue;
        const Id& cp = hz.component;
        for (const auto& flow : model.flows) {
            std::vector<const Channel*> path;
            for (const auto& id : flow.path) path.push_back(model.find_channel(id));
            if (std::find(path.begin(), path.end(), nullptr) != path.end()) continue;
            const std::size_t n = path.size();
            for (std::size_t i = 0; i < n; ++i) {
                const Id& cp1 = path[i]->source;
                if (cp1 == cp || !model.find_component(cp1)) continue;
                bool ch_after = false;
                for (std::size_t k = i + 1; k < n; ++k) ch_after = ch_after || path[k]->source == cp;
                if (!ch_after) continue;
                for (std::size_t j = i + 1; j < n; ++j) {
                    const Id& cp2 = path[j]->target;
                    if (cp2 == cp1 || !model.find_component(cp2)) continue;
                    for (std::size_t l = j + 1; l < n; ++l) {
                        const Id& cpo = path[l]->target;
                        if (cpo == cp1 || cpo == cp2) continue;
                        if (seen.emplace(cp1, cp2, cpo).second) out.push_back({cp1, path[i]->id, cp2, cpo});
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<Candidate> gen_safmon_candidates(const SystemModel& model) {
    std::vector<Candidate> out;
    if (!explored(model, PatternKind::SafMon)) return out;
    FreshNames names(model);
    for (const auto& cp : anchors_needing(model, HazardType::Err, false))
        out.push_back({PatternKind::SafMon,
                       names.next(PatternKind::SafMon, {cp}, [&](std::size_t k) { return make_safmon(cp, k); }),
                       {cp}});
    return out;
}

std::vector<Candidate> gen_watchdog_candidates(const SystemModel& model) {
    std::vector<Candidate> out;
    if (!explored(model, PatternKind::Watchdog)) return out;
    FreshNames names(model);
    for (const auto& cp : anchors_needing(model, HazardType::Loss, false))
        out.push_back({PatternKind::Watchdog,
                       names.next(PatternKind::Watchdog, {cp}, [&](std::size_t k) { return make_watchdog(cp, k); }),
                       {cp}});
    return out;
}

std::vector<Candidate> gen_hdr_candidates(const SystemModel& model) {
    std::vector<Candidate> out;
    if (!explored(model, PatternKind::Hdr)) return out;
    FreshNames names(model);
    for (const auto& b : hdr_bindings(model))
        out.push_back({PatternKind::Hdr, names.next(PatternKind::Hdr, {b.cp1, b.chout, b.cp2, b.cpo}, [&](std::size_t k) {
                           return make_hdr(b.cp1, b.chout, b.cp2, b.cpo, k);
                       }),
                       {b.cp1, b.cp2, b.cpo}});
    return out;
}

std::vector<Candidate> gen_tmr_candidates(const SystemModel& model) {
    std::vector<Candidate> out;
    if (!explored(model, PatternKind::Tmr)) return out;
    FreshNames names(model);
    for (const auto& c : model.components) {
        if (c.impl == Impl::Software) continue;
        const bool err = std::any_of(model.hazards.begin(), model.hazards.end(), [&](const Hazard& h) {
            return h.component == c.id && h.type == HazardType::Err;
        });
        if (!err) continue;
        for (const auto& ch : model.channels) {
            if (ch.source != c.id) continue;
            out.push_back({PatternKind::Tmr,
                           names.next(PatternKind::Tmr, {c.id, ch.id}, [&](std::size_t k) { return make_tmr(c.id, ch.id, k); }),
                           {c.id, ch.id}});
        }
    }
    return out;
}

std::vector<Candidate> gen_twoprog_candidates(const SystemModel& model) {
    std::vector<Candidate> out;
    if (!explored(model, PatternKind::TwoProg)) return out;
    FreshNames names(model);
    for (const auto& cp : anchors_needing(model, HazardType::Err, true))
        out.push_back({PatternKind::TwoProg,
                       names.next(PatternKind::TwoProg, {cp}, [&](std::size_t k) { return make_twoprog(cp, k); }),
                       {cp}});
    return out;
}

std::vector<Candidate> generate_candidates(const SystemModel& model) {
    std::vector<Candidate> all;
    for (auto gen : {gen_safmon_candidates, gen_watchdog_candidates, gen_hdr_candidates, gen_tmr_candidates,
                     gen_twoprog_candidates}) {
        auto part = gen(model);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
}

SystemModel merge_candidates(const SystemModel& model, const std::vector<Candidate>& candidates,
                             const std::vector<std::size_t>& selected) {
    SystemModel merged = model;
    merged.exploration = true;
    for (auto i : selected) merged.patterns.push_back(candidates.at(i).instance);
    return merged;
}

Score score_report(const SystemModel& model, const ControllabilityReport& report) {
    return Score{report.controlled_count(), report.severity_weight(model)};
}

bool within_budgets(const SystemModel& model, const std::vector<Candidate>& candidates,
                    const std::vector<std::size_t>& selected) {
    std::map<PatternKind, std::set<std::vector<Id>>> anchors;
    for (auto i : selected) anchors[candidates.at(i).kind].insert(candidates.at(i).anchor);
    for (const auto& [kind, set] : anchors) {
        const auto budget = model.budget(kind).value_or(0);
        if (static_cast<long long>(set.size()) > budget) return false;
    }
    return true;
}

namespace {

// Depth-first over include/exclude decisions, which yields index sequences in
// lexicographic order: {}, {0}, {0,1}, {0,1,2}, ..., {0,2}, ..., {1}, ...
void collect_selections(const SystemModel& model, const std::vector<Candidate>& candidates,
                        std::vector<std::vector<std::size_t>>& out) {
    std::map<PatternKind, long long> remaining;
    for (const auto kind : kAllPatternKinds) remaining[kind] = model.budget(kind).value_or(0);
    std::vector<std::size_t> current;
    auto rec = [&](auto&& self, std::size_t from) -> void {
        out.push_back(current);
        for (std::size_t i = from; i < candidates.size(); ++i) {
            auto& left = remaining[candidates[i].kind];
            if (left <= 0) continue;
            --left;
            current.push_back(i);
            self(self, i + 1);
            current.pop_back();
            ++left;
        }
    };
    rec(rec, 0);
}

}  // namespace

void enumerate_scenarios(const SystemModel& model, const std::vector<Candidate>& candidates,
                         const std::function<void(Scenario&&)>& visit, const RecommendOptions& options) {
    if (candidates.size() > options.hard_cap) throw SearchCapExceeded(candidates.size(), options.hard_cap);

    std::vector<std::vector<std::size_t>> selections;
    collect_selections(model, candidates, selections);

    std::vector<Scenario> scenarios(selections.size());
    auto evaluate = [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            const auto merged = merge_candidates(model, candidates, selections[s]);
            auto report = compute_controllability(merged);
            const auto score = score_report(merged, report);
            scenarios[s] = Scenario{std::move(selections[s]), std::move(report), score};
        }
    };

    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, scenarios.size() / 64)));
    if (workers <= 1) {
        evaluate(0, scenarios.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (scenarios.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = std::min(scenarios.size(), w * chunk);
            const std::size_t e = std::min(scenarios.size(), b + chunk);
            pool.emplace_back(evaluate, b, e);
        }
    }
    for (auto& s : scenarios) visit(std::move(s));
}

std::vector<Scenario> enumerate_scenarios(const SystemModel& model, const std::vector<Candidate>& candidates,
                                          const RecommendOptions& options) {
    std::vector<Scenario> out;
    enumerate_scenarios(model, candidates, [&](Scenario&& s) { out.push_back(std::move(s)); }, options);
    return out;
}

std::vector<Scenario> select_best(std::vector<Scenario> scenarios) {
    if (scenarios.empty()) return scenarios;
    Score top;
    for (const auto& s : scenarios) top = std::max(top, s.score);
    std::vector<Scenario> tied;
    for (auto& s : scenarios)
        if (s.score == top) tied.push_back(std::move(s));

    auto strict_subset = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    std::vector<bool> padded(tied.size(), false);
    for (std::size_t i = 0; i < tied.size(); ++i)
        padded[i] = std::any_of(tied.begin(), tied.end(), [&](const Scenario& other) {
            return strict_subset(other.selected, tied[i].selected);
        });
    std::vector<Scenario> best;
    for (std::size_t i = 0; i < tied.size(); ++i)
        if (!padded[i]) best.push_back(std::move(tied[i]));
    std::stable_sort(best.begin(), best.end(), [](const Scenario& a, const Scenario& b) {
        if (a.selected.size() != b.selected.size()) return a.selected.size() < b.selected.size();
        return a.selected < b.selected;
    });
    return best;
}

RecommendationResult recommend(const SystemModel& model, const RecommendOptions& options) {
    RecommendationResult result;
    result.base_report = compute_controllability(model);
    result.candidates = generate_candidates(model);
    auto all = enumerate_scenarios(model, result.candidates, options);
    result.total_scenarios = all.size();
    result.best = select_best(std::move(all));
    for (std::size_t i = 0; i < result.best.size(); ++i)
        if (result.best[i].complete()) result.complete.push_back(i);
    return result;
}

}  // namespace safpat
