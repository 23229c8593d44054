#pragma once

// Budgeted pattern recommendation. Candidate placements are generated from
// the explore directives, every budget-respecting subset is evaluated in
// exploration mode, and the architectures controlling the most hazards are
// returned.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "safpat/controllability.hpp"
#include "safpat/model.hpp"

namespace safpat {

struct Candidate {
    PatternKind kind = PatternKind::SafMon;
    PatternInstance instance;
    /// Bindings of the generation rule: (CP) for safMon/wd/2Prog, (CP1, CH1)
    /// for tmr, (CP1, CP2, CPO) for hdr.
    std::vector<Id> anchor;

    bool operator==(const Candidate&) const = default;
};

struct Score {
    std::size_t controlled = 0;
    int severity_weight = 0;

    auto operator<=>(const Score&) const = default;
};

struct Scenario {
    /// Indices into the candidate list, ascending.
    std::vector<std::size_t> selected;
    ControllabilityReport report;
    Score score;

    bool complete() const { return report.all_controlled(); }
};

struct RecommendationResult {
    std::vector<Candidate> candidates;
    /// Maximal score, subset-minimal, fewest patterns first.
    std::vector<Scenario> best;
    /// Positions in `best` whose report controls every hazard.
    std::vector<std::size_t> complete;
    std::size_t total_scenarios = 0;
    ControllabilityReport base_report;
};

struct RecommendOptions {
    std::size_t hard_cap = 24;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 1;
};

class SearchCapExceeded : public std::runtime_error {
  public:
    SearchCapExceeded(std::size_t count, std::size_t cap);
    std::size_t count;
    std::size_t cap;
};

/// `basicOrNCTL`: the hazard is basic and not controlled in `base`.
bool needs_placement(const SystemModel& model, const ControllabilityReport& base, const Hazard& hazard);

std::vector<Candidate> gen_safmon_candidates(const SystemModel& model);
std::vector<Candidate> gen_watchdog_candidates(const SystemModel& model);
std::vector<Candidate> gen_hdr_candidates(const SystemModel& model);
std::vector<Candidate> gen_tmr_candidates(const SystemModel& model);
std::vector<Candidate> gen_twoprog_candidates(const SystemModel& model);

/// All kinds with a positive budget, in the order safMon, wd, hdr, tmr, 2Prog,
/// with fresh identifiers that collide with nothing in `model`.
std::vector<Candidate> generate_candidates(const SystemModel& model);

/// Base model plus the selected candidates, exploration mode on.
SystemModel merge_candidates(const SystemModel& model, const std::vector<Candidate>& candidates,
                             const std::vector<std::size_t>& selected);

Score score_report(const SystemModel& model, const ControllabilityReport& report);

/// Budget check on a selection (distinct anchors per kind).
bool within_budgets(const SystemModel& model, const std::vector<Candidate>& candidates,
                    const std::vector<std::size_t>& selected);

/// Visits every budget-respecting subset in lexicographic order of index
/// sequences. Throws SearchCapExceeded when there are more than `hard_cap`
/// candidates.
void enumerate_scenarios(const SystemModel& model, const std::vector<Candidate>& candidates,
                         const std::function<void(Scenario&&)>& visit, const RecommendOptions& options = {});

std::vector<Scenario> enumerate_scenarios(const SystemModel& model, const std::vector<Candidate>& candidates,
                                          const RecommendOptions& options = {});

/// Reduces a scenario list to the best architectures.
std::vector<Scenario> select_best(std::vector<Scenario> scenarios);

RecommendationResult recommend(const SystemModel& model, const RecommendOptions& options = {});

}  // namespace safpat
