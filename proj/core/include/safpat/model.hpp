#pragma once

// In-memory representation of a SafPat architecture: functions, channels,
// information flows, hazards, deployed safety patterns and explore budgets.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "safpat/diagnostic.hpp"

namespace safpat {

using Id = std::string;

enum class Impl { Unspecified, Hardware, Software };
enum class HazardType { Err, Loss, Omission, Late, Early };
enum class Severity { Minor, Major, Fatal, Catastrophic };
enum class PatternKind { SafMon, Watchdog, Hdr, Tmr, TwoProg };

inline constexpr PatternKind kAllPatternKinds[] = {
    PatternKind::SafMon, PatternKind::Watchdog, PatternKind::Hdr, PatternKind::Tmr,
    PatternKind::TwoProg};

std::string_view to_token(HazardType t);
std::string_view to_token(Severity s);
/// Kind token as used in `explore(N, kind)`: safMon, wd, hdr, tmr, 2Prog.
std::string_view to_token(PatternKind k);
/// Predicate name of the pattern fact: safMon, watchDog, hdr, tmr, 2Prog.
std::string_view predicate_name(PatternKind k);

std::optional<HazardType> parse_hazard_type(std::string_view tok);
std::optional<Severity> parse_severity(std::string_view tok);
/// Accepts the explore tokens plus the aliases watchDog and twoProg.
std::optional<PatternKind> parse_pattern_kind(std::string_view tok);

/// 1 for minor up to 4 for catastrophic.
int severity_rank(Severity s);

/// Letters, digits and underscore, not starting with a digit.
bool is_valid_identifier(std::string_view id);
/// Constants starting with `nu` denote fresh elements introduced by patterns.
bool is_fresh_identifier(std::string_view id);

struct Component {
    Id id;
    std::optional<Id> parent;
    Impl impl = Impl::Unspecified;
    Origin origin;

    bool operator==(const Component&) const = default;
};

/// Unidirectional logical channel from an output of `source` to an input of `target`.
struct Channel {
    Id id;
    Id source;
    Id target;
    Origin origin;

    bool operator==(const Channel&) const = default;
};

struct InformationFlow {
    Id id;
    std::vector<Id> path;
    Origin origin;

    bool operator==(const InformationFlow&) const = default;
};

struct Hazard {
    Id id;
    Id component;
    HazardType type = HazardType::Err;
    Severity severity = Severity::Catastrophic;
    Origin origin;

    bool operator==(const Hazard&) const = default;
};

struct SubHazardEdge {
    Id child;
    Id parent;
    Origin origin;

    bool operator==(const SubHazardEdge&) const = default;
};

/// Stands for every input (or output) channel of the associated function.
struct FullCoverage {
    bool operator==(const FullCoverage&) const = default;
};

/// A single fresh atom in a list position, e.g. `numin`.
struct FreshBundle {
    Id name;
    bool operator==(const FreshBundle&) const = default;
};

using RefList = std::variant<FullCoverage, FreshBundle, std::vector<Id>>;

bool is_full(const RefList& l);
/// Members of an explicit list; empty for the sentinel forms.
const std::vector<Id>& explicit_members(const RefList& l);
bool contains(const RefList& l, std::string_view id);

struct SafetyMonitor {
    Id id;
    Id monitored;
    RefList inputs;
    RefList outputs;
    Id fail_safe;
    RefList monitor_inputs;
    RefList monitor_outputs;
    Id monitor;

    bool operator==(const SafetyMonitor&) const = default;
};

struct Watchdog {
    Id id;
    Id monitored;
    Id fail_safe;
    Id liveness;
    Id dog;

    bool operator==(const Watchdog&) const = default;
};

struct Hdr {
    Id id;
    Id primary;
    Id fault_channel;
    Id replica;
    Id voter_in1;
    Id voter_in2;
    Id voter;
    Id voter_out;
    Id out;

    bool operator==(const Hdr&) const = default;
};

struct Tmr {
    Id id;
    Id primary;
    Id fault_channel;
    Id replica1;
    Id replica2;
    Id voter_in1;
    Id voter_in2;
    Id voter_in3;
    Id voter;
    Id voter_out;
    Id out;

    bool operator==(const Tmr&) const = default;
};

struct TwoProg {
    Id id;
    Id version1;
    RefList inputs;
    RefList outputs;
    Id version2;
    RefList voters_in1;
    RefList voters_in2;
    RefList voters;
    RefList voter_targets;
    RefList voter_outputs;

    bool operator==(const TwoProg&) const = default;
};

using PatternBody = std::variant<SafetyMonitor, Watchdog, Hdr, Tmr, TwoProg>;

struct PatternInstance {
    PatternBody body;
    Origin origin;

    const Id& id() const;
    PatternKind kind() const;
    /// The function the pattern is associated with.
    const Id& anchor() const;

    template <typename T>
    const T* as() const { return std::get_if<T>(&body); }

    bool operator==(const PatternInstance&) const = default;
};

struct ExploreDirective {
    PatternKind kind = PatternKind::SafMon;
    long long budget = 0;
    Origin origin;

    bool operator==(const ExploreDirective&) const = default;
};

/// Raised by topology queries on undeclared components, flows or hazards.
class LookupError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// The fact base. Collections keep declaration order; ids are unique per
/// namespace once the model passes validate_model.
struct SystemModel {
    std::vector<Component> components;
    std::vector<Channel> channels;
    std::vector<InformationFlow> flows;
    std::vector<Hazard> hazards;
    std::vector<SubHazardEdge> sub_hazards;
    std::vector<PatternInstance> patterns;
    std::vector<ExploreDirective> explore;
    bool exploration = false;
    /// Hazards treated as controlled by assumption; never serialized.
    std::set<Id> assumed_controlled;

    bool operator==(const SystemModel&) const = default;

    const Component* find_component(std::string_view id) const;
    const Channel* find_channel(std::string_view id) const;
    const InformationFlow* find_flow(std::string_view id) const;
    const Hazard* find_hazard(std::string_view id) const;
    const PatternInstance* find_pattern(std::string_view id) const;

    const Component& component(std::string_view id) const;
    const InformationFlow& flow(std::string_view id) const;
    const Hazard& hazard(std::string_view id) const;

    std::optional<long long> budget(PatternKind k) const;
    /// Inserts or overrides the directive for `k`.
    void set_budget(PatternKind k, long long n);

    bool is_software(std::string_view cp) const;
};

/// Every violated well-formedness rule as an Error, plus Warnings. Sorted.
std::vector<Diagnostic> validate_model(const SystemModel& model);

std::set<Id> channels_into(const SystemModel& model, std::string_view cp);
std::set<Id> channels_out_of(const SystemModel& model, std::string_view cp);

/// True iff both channels lie on the flow's path and ch1 strictly precedes ch2.
bool before(const SystemModel& model, std::string_view ch1, std::string_view ch2,
            std::string_view flow);

/// Component sequence src(c1), dst(c1), dst(c2), ... of a flow's path.
std::vector<Id> flow_components(const SystemModel& model, std::string_view flow);

/// 0-based position of the first occurrence of `cp` in flow_components.
std::optional<std::size_t> component_position(const SystemModel& model, std::string_view cp,
                                              std::string_view flow);

std::set<Id> hazard_children(const SystemModel& model, std::string_view hazard);

/// Ids appearing in component slots of patterns that are not declared components
/// (monitors, voters, replicas, dogs). Channels may attach to them.
std::set<Id> auxiliary_components(const SystemModel& model);

/// Every identifier in every namespace and every pattern slot.
std::set<Id> all_identifiers(const SystemModel& model);

}  // namespace safpat
