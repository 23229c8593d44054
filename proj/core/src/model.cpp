#include "safpat/model.hpp"

#include <algorithm>
#include <cctype>
#include <type_traits>

namespace safpat {

std::string_view to_token(HazardType t) {
    switch (t) {
        case HazardType::Err: return "err";
        case HazardType::Loss: return "loss";
        case HazardType::Omission: return "omission";
        case HazardType::Late: return "late";
        case HazardType::Early: return "early";
    }
    return "err";
}

std::string_view to_token(Severity s) {
    switch (s) {
        case Severity::Minor: return "minor";
        case Severity::Major: return "major";
        case Severity::Fatal: return "fatal";
        case Severity::Catastrophic: return "cat";
    }
    return "cat";
}

std::string_view to_token(PatternKind k) {
    switch (k) {
        case PatternKind::SafMon: return "safMon";
        case PatternKind::Watchdog: return "wd";
        case PatternKind::Hdr: return "hdr";
        case PatternKind::Tmr: return "tmr";
        case PatternKind::TwoProg: return "2Prog";
    }
    return "safMon";
}

std::string_view predicate_name(PatternKind k) {
    return k == PatternKind::Watchdog ? "watchDog" : to_token(k);
}

std::optional<HazardType> parse_hazard_type(std::string_view tok) {
    if (tok == "err") return HazardType::Err;
    if (tok == "loss") return HazardType::Loss;
    if (tok == "omission") return HazardType::Omission;
    if (tok == "late") return HazardType::Late;
    if (tok == "early") return HazardType::Early;
    return std::nullopt;
}

std::optional<Severity> parse_severity(std::string_view tok) {
    if (tok == "minor") return Severity::Minor;
    if (tok == "major") return Severity::Major;
    if (tok == "fatal") return Severity::Fatal;
    if (tok == "cat") return Severity::Catastrophic;
    return std::nullopt;
}

std::optional<PatternKind> parse_pattern_kind(std::string_view tok) {
    if (tok == "safMon") return PatternKind::SafMon;
    if (tok == "wd" || tok == "watchDog") return PatternKind::Watchdog;
    if (tok == "hdr") return PatternKind::Hdr;
    if (tok == "tmr") return PatternKind::Tmr;
    if (tok == "2Prog" || tok == "twoProg") return PatternKind::TwoProg;
    return std::nullopt;
}

int severity_rank(Severity s) { return static_cast<int>(s) + 1; }

bool is_valid_identifier(std::string_view id) {
    if (id.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(id.front()))) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return u < 0x80 && (std::isalnum(u) || c == '_');
    });
}

bool is_fresh_identifier(std::string_view id) { return id.size() > 2 && id.substr(0, 2) == "nu"; }

bool is_full(const RefList& l) { return std::holds_alternative<FullCoverage>(l); }

const std::vector<Id>& explicit_members(const RefList& l) {
    static const std::vector<Id> empty;
    if (const auto* v = std::get_if<std::vector<Id>>(&l)) return *v;
    return empty;
}

bool contains(const RefList& l, std::string_view id) {
    const auto& m = explicit_members(l);
    return std::find(m.begin(), m.end(), id) != m.end();
}

const Id& PatternInstance::id() const {
    return std::visit([](const auto& p) -> const Id& { return p.id; }, body);
}

PatternKind PatternInstance::kind() const { return static_cast<PatternKind>(body.index()); }

const Id& PatternInstance::anchor() const {
    struct Anchor {
        const Id& operator()(const SafetyMonitor& p) const { return p.monitored; }
        const Id& operator()(const Watchdog& p) const { return p.monitored; }
        const Id& operator()(const Hdr& p) const { return p.primary; }
        const Id& operator()(const Tmr& p) const { return p.primary; }
        const Id& operator()(const TwoProg& p) const { return p.version1; }
    };
    return std::visit(Anchor{}, body);
}

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.id == id; });
    return it == items.end() ? nullptr : &*it;
}

}  // namespace

const Component* SystemModel::find_component(std::string_view id) const { return find_by_id(components, id); }
const Channel* SystemModel::find_channel(std::string_view id) const { return find_by_id(channels, id); }
const InformationFlow* SystemModel::find_flow(std::string_view id) const { return find_by_id(flows, id); }
const Hazard* SystemModel::find_hazard(std::string_view id) const { return find_by_id(hazards, id); }

const PatternInstance* SystemModel::find_pattern(std::string_view id) const {
    auto it = std::find_if(patterns.begin(), patterns.end(),
                           [&](const PatternInstance& p) { return p.id() == id; });
    return it == patterns.end() ? nullptr : &*it;
}

const Component& SystemModel::component(std::string_view id) const {
    if (const auto* c = find_component(id)) return *c;
    throw LookupError("unknown component '" + std::string(id) + "'");
}

const InformationFlow& SystemModel::flow(std::string_view id) const {
    if (const auto* f = find_flow(id)) return *f;
    throw LookupError("unknown information flow '" + std::string(id) + "'");
}

const Hazard& SystemModel::hazard(std::string_view id) const {
    if (const auto* h = find_hazard(id)) return *h;
    throw LookupError("unknown hazard '" + std::string(id) + "'");
}

std::optional<long long> SystemModel::budget(PatternKind k) const {
    for (const auto& d : explore)
        if (d.kind == k) return d.budget;
    return std::nullopt;
}

void SystemModel::set_budget(PatternKind k, long long n) {
    for (auto& d : explore) {
        if (d.kind == k) {
            d.budget = n;
            return;
        }
    }
    explore.push_back(ExploreDirective{k, n, {}});
}

bool SystemModel::is_software(std::string_view cp) const {
    const auto* c = find_component(cp);
    return c && c->impl == Impl::Software;
}

std::set<Id> channels_into(const SystemModel& model, std::string_view cp) {
    model.component(cp);
    std::set<Id> out;
    for (const auto& ch : model.channels)
        if (ch.target == cp) out.insert(ch.id);
    return out;
}

std::set<Id> channels_out_of(const SystemModel& model, std::string_view cp) {
    model.component(cp);
    std::set<Id> out;
    for (const auto& ch : model.channels)
        if (ch.source == cp) out.insert(ch.id);
    return out;
}

bool before(const SystemModel& model, std::string_view ch1, std::string_view ch2, std::string_view flow) {
    const auto& path = model.flow(flow).path;
    auto a = std::find(path.begin(), path.end(), ch1);
    auto b = std::find(path.begin(), path.end(), ch2);
    return a != path.end() && b != path.end() && a < b;
}

std::vector<Id> flow_components(const SystemModel& model, std::string_view flow) {
    const auto& path = model.flow(flow).path;
    std::vector<Id> seq;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto* ch = model.find_channel(path[i]);
        if (!ch) continue;
        if (i == 0) seq.push_back(ch->source);
        seq.push_back(ch->target);
    }
    return seq;
}

std::optional<std::size_t> component_position(const SystemModel& model, std::string_view cp,
                                              std::string_view flow) {
    const auto seq = flow_components(model, flow);
    auto it = std::find(seq.begin(), seq.end(), cp);
    if (it == seq.end()) return std::nullopt;
    return static_cast<std::size_t>(it - seq.begin());
}

std::set<Id> hazard_children(const SystemModel& model, std::string_view hazard) {
    model.hazard(hazard);
    std::set<Id> out;
    for (const auto& e : model.sub_hazards)
        if (e.parent == hazard) out.insert(e.child);
    return out;
}

namespace {

void add_list(std::set<Id>& out, const RefList& l) {
    if (const auto* f = std::get_if<FreshBundle>(&l)) out.insert(f->name);
    for (const auto& m : explicit_members(l)) out.insert(m);
}

}  // namespace

std::set<Id> auxiliary_components(const SystemModel& model) {
    std::set<Id> slots;
    for (const auto& p : model.patterns) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, SafetyMonitor>) {
                    slots.insert(x.monitor);
                } else if constexpr (std::is_same_v<T, Watchdog>) {
                    slots.insert(x.dog);
                } else if constexpr (std::is_same_v<T, Hdr>) {
                    slots.insert({x.replica, x.voter, x.out});
                } else if constexpr (std::is_same_v<T, Tmr>) {
                    slots.insert({x.replica1, x.replica2, x.voter, x.out});
                } else {
                    slots.insert(x.version2);
                    add_list(slots, x.voters);
                    add_list(slots, x.voter_targets);
                }
            },
            p.body);
    }
    std::set<Id> out;
    for (const auto& s : slots)
        if (!model.find_component(s)) out.insert(s);
    return out;
}

std::set<Id> all_identifiers(const SystemModel& model) {
    std::set<Id> ids;
    for (const auto& c : model.components) ids.insert(c.id);
    for (const auto& c : model.channels) ids.insert(c.id);
    for (const auto& f : model.flows) ids.insert(f.id);
    for (const auto& h : model.hazards) ids.insert(h.id);
    for (const auto& p : model.patterns) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                ids.insert(x.id);
                if constexpr (std::is_same_v<T, SafetyMonitor>) {
                    ids.insert({x.fail_safe, x.monitor});
                    add_list(ids, x.monitor_inputs);
                    add_list(ids, x.monitor_outputs);
                } else if constexpr (std::is_same_v<T, Watchdog>) {
                    ids.insert({x.fail_safe, x.liveness, x.dog});
                } else if constexpr (std::is_same_v<T, Hdr>) {
                    ids.insert({x.replica, x.voter_in1, x.voter_in2, x.voter, x.voter_out, x.out});
                } else if constexpr (std::is_same_v<T, Tmr>) {
                    ids.insert({x.replica1, x.replica2, x.voter_in1, x.voter_in2, x.voter_in3, x.voter,
                                x.voter_out, x.out});
                } else {
                    ids.insert(x.version2);
                    for (const RefList* l : {&x.inputs, &x.outputs, &x.voters_in1, &x.voters_in2, &x.voters,
                                             &x.voter_targets, &x.voter_outputs})
                        add_list(ids, *l);
                }
            },
            p.body);
    }
    return ids;
}

}  // namespace safpat
