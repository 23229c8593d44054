#pragma once

// Closed-world controllability: a hazard is controlled only when a pattern
// rule fires for it, it is assumed controlled, or all of its sub-hazards are
// controlled. Everything else is uncontrolled.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "safpat/model.hpp"

namespace safpat {

enum class HazardClass { Basic, Derived };
enum class Status { Controlled, Uncontrolled };

/// Rule names used in ByPattern justifications.
namespace rules {
inline constexpr const char* kWatchdogLoss = "watchdog-loss";
inline constexpr const char* kSafMonErr = "safmon-err";
inline constexpr const char* kTwoProgErr = "2prog-err";
inline constexpr const char* kRedundancyErr = "redundancy-err";
inline constexpr const char* kHdrOmission = "hdr-omission";
inline constexpr const char* kAssumed = "assumed";
}  // namespace rules

struct ByPattern {
    Id pattern;
    std::string rule;
    bool operator==(const ByPattern&) const = default;
};

struct ByAllChildren {
    std::vector<Id> children;
    bool operator==(const ByAllChildren&) const = default;
};

enum class UncontrolledReason { NoRuleFired, ChildUncontrolled, UnsupportedHazardType };

struct Uncontrolled {
    UncontrolledReason reason = UncontrolledReason::NoRuleFired;
    /// Set for ChildUncontrolled.
    std::optional<Id> child;
    bool operator==(const Uncontrolled&) const = default;
};

using Justification = std::variant<ByPattern, ByAllChildren, Uncontrolled>;

struct HazardStatus {
    Status status = Status::Uncontrolled;
    HazardClass hazard_class = HazardClass::Basic;
    Justification justification;
    bool operator==(const HazardStatus&) const = default;
};

struct ControllabilityReport {
    std::map<Id, HazardStatus> hazards;

    std::size_t controlled_count() const;
    bool all_controlled() const;
    bool is_controlled(const Id& hazard) const;
    /// Sum of severity ranks of controlled hazards.
    int severity_weight(const SystemModel& model) const;

    bool operator==(const ControllabilityReport&) const = default;
};

class AnalysisError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string_view to_token(UncontrolledReason r);

HazardClass classify(const SystemModel& model, std::string_view hazard);

// Individual rules. Each returns the smallest firing pattern id.
std::optional<Id> watchdog_controls(const SystemModel& model, const Hazard& hazard);
std::optional<Id> safmon_controls(const SystemModel& model, const Hazard& hazard);
std::optional<Id> twoprog_controls(const SystemModel& model, const Hazard& hazard);
std::optional<Id> redundancy_controls_err(const SystemModel& model, const Hazard& hazard);
std::optional<Id> redundancy_controls_omission(const SystemModel& model, const Hazard& hazard);

/// Smallest (pattern id, rule) among all rules firing directly for `hazard`.
std::optional<ByPattern> direct_control(const SystemModel& model, const Hazard& hazard);

ControllabilityReport compute_controllability(const SystemModel& model);

/// Copy of `model` in which `hazard` counts as controlled.
SystemModel assume_controlled(SystemModel model, std::string_view hazard);

inline std::string assumption_id(std::string_view hazard) { return "assumption:" + std::string(hazard); }

}  // namespace safpat
