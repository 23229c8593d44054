#include "safpat/controllability.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace safpat {

std::string_view to_token(UncontrolledReason r) {
    switch (r) {
        case UncontrolledReason::NoRuleFired: return "no_rule_fired";
        case UncontrolledReason::ChildUncontrolled: return "child_uncontrolled";
        case UncontrolledReason::UnsupportedHazardType: return "unsupported_hazard_type";
    }
    return "no_rule_fired";
}

std::size_t ControllabilityReport::controlled_count() const {
    return static_cast<std::size_t>(std::count_if(hazards.begin(), hazards.end(), [](const auto& kv) {
        return kv.second.status == Status::Controlled;
    }));
}

bool ControllabilityReport::all_controlled() const { return controlled_count() == hazards.size(); }

bool ControllabilityReport::is_controlled(const Id& hazard) const {
    auto it = hazards.find(hazard);
    return it != hazards.end() && it->second.status == Status::Controlled;
}

int ControllabilityReport::severity_weight(const SystemModel& model) const {
    int w = 0;
    for (const auto& [id, st] : hazards)
        if (st.status == Status::Controlled)
            if (const auto* h = model.find_hazard(id)) w += severity_rank(h->severity);
    return w;
}

HazardClass classify(const SystemModel& model, std::string_view hazard) {
    return hazard_children(model, hazard).empty() ? HazardClass::Basic : HazardClass::Derived;
}

namespace {

std::optional<Id> smallest(std::set<Id> ids) {
    if (ids.empty()) return std::nullopt;
    return *ids.begin();
}

// ICHs/OCHs coverage from the safety monitor and 2-version programming rules:
// every channel into (out of) the function must be listed.
bool inputs_covered(const SystemModel& m, const Id& cp, const RefList& inputs, const Id* exempt) {
    if (m.exploration || is_full(inputs)) return true;
    for (const auto& ch : m.channels) {
        if (ch.target != cp) continue;
        if (exempt && ch.id == *exempt) continue;
        if (!contains(inputs, ch.id)) return false;
    }
    return true;
}

bool outputs_covered(const SystemModel& m, const Id& cp, const RefList& outputs) {
    if (m.exploration || is_full(outputs)) return true;
    for (const auto& ch : m.channels)
        if (ch.source == cp && !contains(outputs, ch.id)) return false;
    return true;
}

bool feeds(const SystemModel& m, const Id& from, const Id& to) {
    return std::any_of(m.channels.begin(), m.channels.end(),
                       [&](const Channel& ch) { return ch.source == from && ch.target == to; });
}

}  // namespace

std::optional<Id> watchdog_controls(const SystemModel& model, const Hazard& hazard) {
    if (hazard.type != HazardType::Loss) return std::nullopt;
    std::set<Id> ids;
    for (const auto& p : model.patterns)
        if (const auto* wd = p.as<Watchdog>(); wd && wd->monitored == hazard.component) ids.insert(wd->id);
    return smallest(std::move(ids));
}

std::optional<Id> safmon_controls(const SystemModel& model, const Hazard& hazard) {
    if (hazard.type != HazardType::Err) return std::nullopt;
    std::set<Id> ids;
    for (const auto& p : model.patterns) {
        const auto* sm = p.as<SafetyMonitor>();
        if (!sm || sm->monitored != hazard.component) continue;
        // The output check has no fail-safe exemption; it mirrors outNotCovSF
        // with its MIN/MOUT exclusion lists taken as empty.
        if (inputs_covered(model, sm->monitored, sm->inputs, &sm->fail_safe) &&
            outputs_covered(model, sm->monitored, sm->outputs))
            ids.insert(sm->id);
    }
    return smallest(std::move(ids));
}

std::optional<Id> twoprog_controls(const SystemModel& model, const Hazard& hazard) {
    if (hazard.type != HazardType::Err || !model.is_software(hazard.component)) return std::nullopt;
    std::set<Id> ids;
    for (const auto& p : model.patterns) {
        const auto* tp = p.as<TwoProg>();
        if (tp && tp->version1 == hazard.component &&
            inputs_covered(model, tp->version1, tp->inputs, nullptr))
            ids.insert(tp->id);
    }
    return smallest(std::move(ids));
}

std::optional<Id> redundancy_controls_err(const SystemModel& model, const Hazard& hazard) {
    if (hazard.type != HazardType::Err) return std::nullopt;
    std::set<Id> ids;
    for (const auto& p : model.patterns) {
        if (const auto* h = p.as<Hdr>()) {
            if (feeds(model, hazard.component, h->voter)) ids.insert(h->id);
        } else if (const auto* t = p.as<Tmr>()) {
            // Recommended voters have no materialized channels, so during
            // exploration a TMR counts for its primary function directly.
            if (feeds(model, hazard.component, t->voter) ||
                (model.exploration && t->primary == hazard.component))
                ids.insert(t->id);
        }
    }
    return smallest(std::move(ids));
}

// Path redundancy. The printed rule
//   ctl(ID,CP,omission,SV) :- ..., ch(CHOUT,CP1,_), ch(CHIN,_,CP2), ch(CH,CP,_),
//       if(IF,PATH), before(CH,CHIN,IF), before(CHOUT,CH,IF), hdr(IDPAT,CP1,_,CP2,...).
// cannot fire when the replica is CP itself, so the check follows the stated
// intent instead: CP1 strictly before CP on some flow, and CP2 equal to CP or
// strictly after it on that same flow.
std::optional<Id> redundancy_controls_omission(const SystemModel& model, const Hazard& hazard) {
    if (hazard.type != HazardType::Omission) return std::nullopt;
    std::set<Id> ids;
    for (const auto& p : model.patterns) {
        const auto* h = p.as<Hdr>();
        if (!h) continue;
        for (const auto& flow : model.flows) {
            const auto at = component_position(model, hazard.component, flow.id);
            const auto first = component_position(model, h->primary, flow.id);
            if (!at || !first || !(*first < *at)) continue;
            const auto second = component_position(model, h->replica, flow.id);
            if (h->replica == hazard.component || (second && *at < *second)) {
                ids.insert(h->id);
                break;
            }
        }
    }
    return smallest(std::move(ids));
}

std::optional<ByPattern> direct_control(const SystemModel& model, const Hazard& hazard) {
    if (model.assumed_controlled.count(hazard.id)) return ByPattern{assumption_id(hazard.id), rules::kAssumed};
    std::optional<ByPattern> best;
    auto consider = [&](std::optional<Id> id, const char* rule) {
        if (id && (!best || *id < best->pattern)) best = ByPattern{*id, rule};
    };
    consider(watchdog_controls(model, hazard), rules::kWatchdogLoss);
    consider(safmon_controls(model, hazard), rules::kSafMonErr);
    consider(twoprog_controls(model, hazard), rules::kTwoProgErr);
    consider(redundancy_controls_err(model, hazard), rules::kRedundancyErr);
    consider(redundancy_controls_omission(model, hazard), rules::kHdrOmission);
    return best;
}

ControllabilityReport compute_controllability(const SystemModel& model) {
    std::map<Id, std::vector<Id>> children;
    for (const auto& e : model.sub_hazards) children[e.parent].push_back(e.child);
    for (auto& [parent, kids] : children) {
        std::sort(kids.begin(), kids.end());
        kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    }

    ControllabilityReport report;
    std::set<Id> in_progress;

    std::function<const HazardStatus&(const Hazard&)> eval = [&](const Hazard& h) -> const HazardStatus& {
        if (auto it = report.hazards.find(h.id); it != report.hazards.end()) return it->second;
        if (!in_progress.insert(h.id).second) throw AnalysisError("sub-hazard relation is cyclic at '" + h.id + "'");

        HazardStatus st;
        const auto kids_it = children.find(h.id);
        const bool derived = kids_it != children.end() && !kids_it->second.empty();
        st.hazard_class = derived ? HazardClass::Derived : HazardClass::Basic;

        std::optional<Id> uncontrolled_child;
        if (derived) {
            for (const auto& kid : kids_it->second) {
                const auto& child = model.hazard(kid);
                if (eval(child).status != Status::Controlled && !uncontrolled_child) uncontrolled_child = kid;
            }
        }

        if (auto direct = direct_control(model, h)) {
            st.status = Status::Controlled;
            st.justification = std::move(*direct);
        } else if (derived && !uncontrolled_child) {
            st.status = Status::Controlled;
            st.justification = ByAllChildren{kids_it->second};
        } else if (derived) {
            st.justification = Uncontrolled{UncontrolledReason::ChildUncontrolled, uncontrolled_child};
        } else if (h.type == HazardType::Late || h.type == HazardType::Early) {
            st.justification = Uncontrolled{UncontrolledReason::UnsupportedHazardType, std::nullopt};
        } else {
            st.justification = Uncontrolled{UncontrolledReason::NoRuleFired, std::nullopt};
        }
        in_progress.erase(h.id);
        return report.hazards.emplace(h.id, std::move(st)).first->second;
    };

    for (const auto& h : model.hazards) eval(h);
    return report;
}

SystemModel assume_controlled(SystemModel model, std::string_view hazard) {
    model.hazard(hazard);
    model.assumed_controlled.insert(std::string(hazard));
    return model;
}

}  // namespace safpat
