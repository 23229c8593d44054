#include <json.hpp>
#include "safpat/export.hpp"
#include "safpat/facts.hpp"

namespace safpat {

namespace {

using nlohmann::json;

std::string_view status_token(Status s) { return s == Status::Controlled ? "controlled" : "uncontrolled"; }
std::string_view class_token(HazardClass c) { return c == HazardClass::Basic ? "basic" : "derived"; }

json justification(const ControllabilityReport& report, const HazardStatus& st);

json hazard_node(const ControllabilityReport& report, const Id& id) {
    json node = json::object();
    node["hazard"] = id;
    auto it = report.hazards.find(id);
    if (it == report.hazards.end()) return node;
    node["status"] = status_token(it->second.status);
    node["justification"] = justification(report, it->second);
    return node;
}

json justification(const ControllabilityReport& report, const HazardStatus& st) {
    return std::visit(
        [&](const auto& j) -> json {
            using T = std::decay_t<decltype(j)>;
            json out = json::object();
            if constexpr (std::is_same_v<T, ByPattern>) {
                out["kind"] = "pattern";
                out["pattern"] = j.pattern;
                out["rule"] = j.rule;
            } else if constexpr (std::is_same_v<T, ByAllChildren>) {
                out["kind"] = "children";
                out["children"] = json::array();
                for (const auto& kid : j.children) out["children"].push_back(hazard_node(report, kid));
            } else {
                out["kind"] = "uncontrolled";
                out["reason"] = to_token(j.reason);
                if (j.child) out["child"] = hazard_node(report, *j.child);
            }
            return out;
        },
        st.justification);
}

json report_json(const SystemModel& model, const ControllabilityReport& report, const RenderOptions& opt) {
    json hazards = json::object();
    for (const auto& [id, st] : report.hazards) {
        json h = json::object();
        h["status"] = status_token(st.status);
        h["class"] = class_token(st.hazard_class);
        if (const auto* hz = model.find_hazard(id)) {
            h["component"] = hz->component;
            h["type"] = to_token(hz->type);
            h["severity"] = to_token(hz->severity);
        }
        if (opt.include_justifications) h["justification"] = justification(report, st);
        hazards[id] = std::move(h);
    }
    json out = json::object();
    out["hazards"] = std::move(hazards);
    out["controlled"] = report.controlled_count();
    out["total"] = report.hazards.size();
    out["all_controlled"] = report.all_controlled();
    return out;
}

json score_json(const Score& s) { return json{{"controlled", s.controlled}, {"severity_weight", s.severity_weight}}; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string render_json(const SystemModel& model, const ControllabilityReport& report, const RenderOptions& options) {
    return dump(report_json(model, report, options));
}

std::string render_json(const SystemModel& model, const RecommendationResult& result, const RenderOptions& options) {
    json budgets = json::object();
    for (const auto& d : model.explore) budgets[std::string(to_token(d.kind))] = d.budget;

    json candidates = json::array();
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
        const auto& c = result.candidates[i];
        candidates.push_back({{"index", i},
                              {"kind", to_token(c.kind)},
                              {"anchor", c.anchor},
                              {"fact", format_pattern(c.instance)}});
    }

    json scenarios = json::array();
    for (std::size_t b = 0; b < result.best.size(); ++b) {
        const auto& s = result.best[b];
        json patterns = json::array();
        for (auto i : s.selected) patterns.push_back(format_pattern(result.candidates.at(i).instance));
        SystemModel merged = merge_candidates(model, result.candidates, s.selected);
        scenarios.push_back({{"index", b},
                             {"best", true},
                             {"complete", s.complete()},
                             {"selected", s.selected},
                             {"patterns", std::move(patterns)},
                             {"score", score_json(s.score)},
                             {"report", report_json(merged, s.report, options)}});
    }

    json out = json::object();
    out["budgets"] = std::move(budgets);
    out["candidates"] = std::move(candidates);
    out["base"] = report_json(model, result.base_report, options);
    out["total_scenarios"] = result.total_scenarios;
    out["scenarios"] = std::move(scenarios);
    out["complete"] = result.complete;
    out["complete_count"] = result.complete.size();
    out["best_score"] = result.best.empty() ? json(nullptr) : score_json(result.best.front().score);
    return dump(out);
}

}  // namespace safpat
