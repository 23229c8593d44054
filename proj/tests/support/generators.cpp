#include "generators.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace safpat::testing {

namespace {

std::size_t pick(std::mt19937& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }
std::size_t between(std::mt19937& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Id any_component(std::mt19937& rng, const SystemModel& m) { return m.components[pick(rng, m.components.size())].id; }

RefList channel_list(std::mt19937& rng, const SystemModel& m, bool allow_full) {
    if (allow_full && coin(rng, 0.3)) return FullCoverage{};
    std::vector<Id> ids;
    for (const auto& c : m.channels)
        if (coin(rng, 0.6)) ids.push_back(c.id);
    return ids;
}

HazardType random_type(std::mt19937& rng) {
    const auto r = pick(rng, 20);
    if (r < 8) return HazardType::Err;
    if (r < 12) return HazardType::Loss;
    if (r < 17) return HazardType::Omission;
    return r < 19 ? HazardType::Late : HazardType::Early;
}

}  // namespace

PatternInstance random_pattern(std::mt19937& rng, const SystemModel& m, std::size_t serial) {
    // Skip serials the model already uses so every minted id is fresh.
    const auto taken = all_identifiers(m);
    auto in_use = [&](const std::string& tag) {
        return std::any_of(taken.begin(), taken.end(), [&](const Id& id) {
            return id.size() >= tag.size() && id.compare(id.size() - tag.size(), tag.size(), tag) == 0;
        });
    };
    while (in_use("x" + std::to_string(serial))) ++serial;
    const std::string k = std::to_string(serial);
    auto fresh = [&](const char* base) { return std::string(base) + "x" + k; };
    // Component slots: mostly declared components, sometimes a fresh one.
    auto comp_or_fresh = [&](const char* base) { return coin(rng, 0.75) ? any_component(rng, m) : fresh(base); };
    // Channel slots: a declared channel when one exists, else fresh.
    auto chan_or_fresh = [&](const char* base) {
        return (!m.channels.empty() && coin(rng, 0.6)) ? m.channels[pick(rng, m.channels.size())].id : fresh(base);
    };

    switch (pick(rng, 5)) {
        case 0: {
            SafetyMonitor s{fresh("nuSM"),        any_component(rng, m), channel_list(rng, m, true),
                            channel_list(rng, m, true), fresh("nufs"),   FreshBundle{fresh("numin")},
                            FreshBundle{fresh("numout")}, fresh("numon")};
            return {s, {}};
        }
        case 1:
            return {Watchdog{fresh("nuWD"), any_component(rng, m), fresh("nuwfs"), fresh("nulv"), fresh("nudog")}, {}};
        case 2:
            return {Hdr{fresh("nuHDR"), any_component(rng, m), chan_or_fresh("nuhf"), comp_or_fresh("nurep"),
                        fresh("nuhi1"), fresh("nuhi2"), comp_or_fresh("nuhv"), fresh("nuho"), comp_or_fresh("nuhout")},
                    {}};
        case 3:
            return {Tmr{fresh("nuTMR"), any_component(rng, m), chan_or_fresh("nutf"), fresh("nur1"), fresh("nur2"),
                        fresh("nuti1"), fresh("nuti2"), fresh("nuti3"), comp_or_fresh("nutv"), fresh("nuto"),
                        comp_or_fresh("nutout")},
                    {}};
        default: {
            TwoProg t{fresh("nu2P"),
                      any_component(rng, m),
                      channel_list(rng, m, true),
                      channel_list(rng, m, true),
                      fresh("nuv2"),
                      FreshBundle{fresh("nuvi1")},
                      FreshBundle{fresh("nuvi2")},
                      FreshBundle{fresh("nuvs")},
                      FreshBundle{fresh("nuvt")},
                      FreshBundle{fresh("nuvo")}};
            return {t, {}};
        }
    }
}

SystemModel random_model(std::mt19937& rng, const GenLimits& lim) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        SystemModel m;
        const auto nc = between(rng, 1, lim.max_components);
        for (std::size_t i = 0; i < nc; ++i) {
            Component c{"c" + std::to_string(i), std::nullopt, Impl::Unspecified, {}};
            if (i > 0 && coin(rng, 0.25)) c.parent = "c" + std::to_string(pick(rng, i));
            const auto impl = pick(rng, 3);
            c.impl = impl == 0 ? Impl::Hardware : impl == 1 ? Impl::Software : Impl::Unspecified;
            m.components.push_back(c);
        }
        const auto nch = between(rng, 0, lim.max_channels);
        for (std::size_t i = 0; i < nch; ++i)
            m.channels.push_back({"ch" + std::to_string(i), any_component(rng, m), any_component(rng, m), {}});

        // Flows are random walks along channels without repeating one.
        const auto nf = m.channels.empty() ? 0 : between(rng, 0, lim.max_flows);
        for (std::size_t i = 0; i < nf; ++i) {
            InformationFlow f{"f" + std::to_string(i), {}, {}};
            const Channel* cur = &m.channels[pick(rng, m.channels.size())];
            f.path.push_back(cur->id);
            const auto len = between(rng, 1, 4);
            while (f.path.size() < len) {
                std::vector<const Channel*> next;
                for (const auto& c : m.channels)
                    if (c.source == cur->target && std::find(f.path.begin(), f.path.end(), c.id) == f.path.end())
                        next.push_back(&c);
                if (next.empty()) break;
                cur = next[pick(rng, next.size())];
                f.path.push_back(cur->id);
            }
            m.flows.push_back(std::move(f));
        }

        const auto nh = between(rng, 1, lim.max_hazards);
        for (std::size_t i = 0; i < nh; ++i)
            m.hazards.push_back({"hz" + std::to_string(i), any_component(rng, m), random_type(rng),
                                 static_cast<Severity>(pick(rng, 4)), {}});
        // Child index above parent index keeps subHz acyclic.
        for (std::size_t c = 1; c < nh; ++c)
            for (std::size_t p = 0; p < c; ++p)
                if (coin(rng, 0.3)) m.sub_hazards.push_back({"hz" + std::to_string(c), "hz" + std::to_string(p), {}});

        const auto np = between(rng, 0, lim.max_patterns);
        for (std::size_t i = 0; i < np; ++i) m.patterns.push_back(random_pattern(rng, m, i));

        // Sometimes materialize the channel from a redundancy primary to its voter.
        for (const auto& p : m.patterns) {
            if (!coin(rng, 0.5)) continue;
            std::optional<std::pair<Id, Id>> link;
            if (const auto* h = p.as<Hdr>()) link.emplace(h->primary, h->voter);
            if (const auto* t = p.as<Tmr>()) link.emplace(t->primary, t->voter);
            if (link) m.channels.push_back({"chv" + p.id(), link->first, link->second, {}});
        }

        m.exploration = coin(rng, 0.3);
        for (const auto& h : m.hazards)
            if (coin(rng, 0.1)) m.assumed_controlled.insert(h.id);
        if (lim.max_budget > 0)
            for (const auto kind : kAllPatternKinds)
                if (coin(rng, 0.7))
                    m.explore.push_back(
                        {kind, std::uniform_int_distribution<long long>(0, lim.max_budget)(rng), {}});

        if (!has_errors(validate_model(m))) return m;
    }
    throw std::logic_error("random_model could not produce a valid model");
}

}  // namespace safpat::testing
