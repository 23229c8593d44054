#pragma once

#include <string>

#include "safpat/controllability.hpp"
#include "safpat/model.hpp"
#include "safpat/recommender.hpp"

namespace safpat {

struct RenderOptions {
    /// Dark fill for recommended pattern nodes, dashed edges for their channels.
    bool highlight_recommended = true;
    bool include_justifications = true;
};

/// Graphviz digraph of the architecture. Sub-functions are clustered inside
/// their parent. When `scenario` is given its selected candidates are drawn on
/// top of the base model.
std::string render_dot(const SystemModel& model, const RenderOptions& options = {});
std::string render_dot(const SystemModel& model, const RecommendationResult& result, const Scenario& scenario,
                       const RenderOptions& options = {});

std::string render_json(const SystemModel& model, const ControllabilityReport& report,
                        const RenderOptions& options = {});
std::string render_json(const SystemModel& model, const RecommendationResult& result,
                        const RenderOptions& options = {});

}  // namespace safpat
