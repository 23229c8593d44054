#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <type_traits>

#include "safpat/model.hpp"

namespace safpat {
namespace {

class Validator {
  public:
    explicit Validator(const SystemModel& m) : m_(m), aux_(auxiliary_components(m)) {}

    std::vector<Diagnostic> run() {
        check_identifiers();
        check_duplicates();
        check_components();
        check_channels();
        check_flows();
        check_hazards();
        check_patterns();
        check_explore();
        sort_diagnostics(diags_);
        return std::move(diags_);
    }

  private:
    void error(std::string code, std::string msg, const Origin& at) {
        diags_.push_back({DiagSeverity::Error, std::move(code), std::move(msg), at.span});
    }
    void warning(std::string code, std::string msg, const Origin& at) {
        diags_.push_back({DiagSeverity::Warning, std::move(code), std::move(msg), at.span});
    }

    void ident(const Id& id, const Origin& at) {
        if (!is_valid_identifier(id)) error("invalid-identifier", "invalid identifier '" + id + "'", at);
    }

    void check_identifiers() {
        for (const auto& c : m_.components) ident(c.id, c.origin);
        for (const auto& c : m_.channels) ident(c.id, c.origin);
        for (const auto& f : m_.flows) ident(f.id, f.origin);
        for (const auto& h : m_.hazards) ident(h.id, h.origin);
        for (const auto& p : m_.patterns) ident(p.id(), p.origin);
    }

    template <typename T, typename IdOf>
    void unique(const std::vector<T>& items, IdOf id_of, const char* what) {
        std::set<Id> seen;
        for (const auto& x : items)
            if (!seen.insert(id_of(x)).second)
                error(std::string("duplicate-") + what, std::string("duplicate ") + what + " id '" + id_of(x) + "'",
                      x.origin);
    }

    void check_duplicates() {
        auto by_id = [](const auto& x) -> const Id& { return x.id; };
        unique(m_.components, by_id, "component");
        unique(m_.channels, by_id, "channel");
        unique(m_.flows, by_id, "flow");
        unique(m_.hazards, by_id, "hazard");
        unique(m_.patterns, [](const PatternInstance& p) -> const Id& { return p.id(); }, "pattern");
    }

    bool endpoint_ok(const Id& cp) const { return m_.find_component(cp) || aux_.count(cp); }

    void check_components() {
        for (const auto& c : m_.components) {
            if (c.parent && !m_.find_component(*c.parent))
                error("undeclared-component",
                      "subcp(" + c.id + "," + *c.parent + "): undeclared component '" + *c.parent + "'", c.origin);
        }
        // Parent chains must terminate.
        for (const auto& c : m_.components) {
            std::set<Id> seen{c.id};
            const Component* cur = &c;
            while (cur->parent) {
                const auto* next = m_.find_component(*cur->parent);
                if (!next) break;
                if (!seen.insert(next->id).second) {
                    // Report each cycle once, at its smallest member.
                    if (next->id == c.id && c.id == *seen.begin())
                        error("cyclic-subcp", "sub-function chain through '" + c.id + "' is cyclic", c.origin);
                    break;
                }
                cur = next;
            }
        }
    }

    void check_channels() {
        for (const auto& ch : m_.channels) {
            for (const Id* end : {&ch.source, &ch.target}) {
                if (!endpoint_ok(*end))
                    error("undeclared-component", "ch(" + ch.id + "," + ch.source + "," + ch.target +
                                                      "): undeclared component '" + *end + "'",
                          ch.origin);
            }
        }
    }

    void check_flows() {
        for (const auto& f : m_.flows) {
            if (f.path.empty()) {
                error("empty-flow", "information flow '" + f.id + "' has an empty path", f.origin);
                continue;
            }
            std::set<Id> seen;
            const Channel* prev = nullptr;
            for (const auto& chid : f.path) {
                if (!seen.insert(chid).second)
                    error("repeated-channel", "information flow '" + f.id + "' lists channel '" + chid + "' twice",
                          f.origin);
                const auto* ch = m_.find_channel(chid);
                if (!ch) {
                    error("undeclared-channel", "information flow '" + f.id + "': undeclared channel '" + chid + "'",
                          f.origin);
                    prev = nullptr;
                    continue;
                }
                if (prev && prev->target != ch->source)
                    error("noncontiguous-flow",
                          "information flow '" + f.id + "': channel '" + prev->id + "' ends at '" + prev->target +
                              "' but '" + ch->id + "' starts at '" + ch->source + "'",
                          f.origin);
                prev = ch;
            }
        }
    }

    void check_hazards() {
        for (const auto& h : m_.hazards)
            if (!m_.find_component(h.component))
                error("undeclared-component", "hazard '" + h.id + "': undeclared component '" + h.component + "'",
                      h.origin);

        std::map<Id, std::vector<Id>> children;
        for (const auto& e : m_.sub_hazards) {
            bool ok = true;
            for (const Id* hid : {&e.child, &e.parent}) {
                if (!m_.find_hazard(*hid)) {
                    error("undeclared-hazard",
                          "subHz(" + e.child + "," + e.parent + "): undeclared hazard '" + *hid + "'", e.origin);
                    ok = false;
                }
            }
            if (ok) children[e.parent].push_back(e.child);
        }

        // Three-colour DFS; one diagnostic per hazard that closes a cycle.
        std::map<Id, int> colour;
        std::function<bool(const Id&)> visit = [&](const Id& h) {
            colour[h] = 1;
            for (const auto& c : children[h]) {
                if (colour[c] == 1) return true;
                if (colour[c] == 0 && visit(c)) return true;
            }
            colour[h] = 2;
            return false;
        };
        for (const auto& h : m_.hazards) {
            if (colour[h.id] != 0) continue;
            if (visit(h.id)) {
                error("cyclic-subhz", "sub-hazard relation is cyclic through '" + h.id + "'", h.origin);
                for (auto& [k, v] : colour)
                    if (v == 1) v = 2;
            }
        }

        for (const auto& a : m_.assumed_controlled)
            if (!m_.find_hazard(a)) error("undeclared-hazard", "assumption on undeclared hazard '" + a + "'", {});
    }

    void anchor(const PatternInstance& p, const Id& cp) {
        if (!m_.find_component(cp))
            error("undeclared-component", "pattern '" + p.id() + "': undeclared component '" + cp + "'", p.origin);
    }
    void comp_slot(const PatternInstance& p, const Id& cp) {
        ident(cp, p.origin);
        if (!m_.find_component(cp) && !is_fresh_identifier(cp))
            error("undeclared-component",
                  "pattern '" + p.id() + "': component '" + cp + "' is neither declared nor fresh", p.origin);
    }
    void chan_slot(const PatternInstance& p, const Id& ch) {
        ident(ch, p.origin);
        if (!m_.find_channel(ch) && !is_fresh_identifier(ch))
            error("undeclared-channel", "pattern '" + p.id() + "': channel '" + ch + "' is neither declared nor fresh",
                  p.origin);
    }
    void chan_list(const PatternInstance& p, const RefList& l) {
        if (const auto* f = std::get_if<FreshBundle>(&l)) {
            if (!is_fresh_identifier(f->name))
                error("invalid-list", "pattern '" + p.id() + "': bare atom '" + f->name + "' in a list position",
                      p.origin);
        }
        for (const auto& ch : explicit_members(l)) chan_slot(p, ch);
    }
    void comp_list(const PatternInstance& p, const RefList& l) {
        if (is_full(l))
            error("invalid-list", "pattern '" + p.id() + "': coverage sentinel in a component list", p.origin);
        if (const auto* f = std::get_if<FreshBundle>(&l)) {
            if (!is_fresh_identifier(f->name))
                error("invalid-list", "pattern '" + p.id() + "': bare atom '" + f->name + "' in a list position",
                      p.origin);
        }
        for (const auto& cp : explicit_members(l)) comp_slot(p, cp);
    }

    void check_patterns() {
        for (const auto& p : m_.patterns) {
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, SafetyMonitor>) {
                        anchor(p, x.monitored);
                        chan_list(p, x.inputs);
                        chan_list(p, x.outputs);
                        chan_slot(p, x.fail_safe);
                        chan_list(p, x.monitor_inputs);
                        chan_list(p, x.monitor_outputs);
                        comp_slot(p, x.monitor);
                        if (contains(x.inputs, x.fail_safe))
                            error("failsafe-in-inputs",
                                  "safety monitor '" + x.id + "': fail-safe channel '" + x.fail_safe +
                                      "' is also listed as an input",
                                  p.origin);
                    } else if constexpr (std::is_same_v<T, Watchdog>) {
                        anchor(p, x.monitored);
                        chan_slot(p, x.fail_safe);
                        chan_slot(p, x.liveness);
                        comp_slot(p, x.dog);
                    } else if constexpr (std::is_same_v<T, Hdr>) {
                        anchor(p, x.primary);
                        chan_slot(p, x.fault_channel);
                        comp_slot(p, x.replica);
                        chan_slot(p, x.voter_in1);
                        chan_slot(p, x.voter_in2);
                        comp_slot(p, x.voter);
                        chan_slot(p, x.voter_out);
                        comp_slot(p, x.out);
                    } else if constexpr (std::is_same_v<T, Tmr>) {
                        anchor(p, x.primary);
                        chan_slot(p, x.fault_channel);
                        comp_slot(p, x.replica1);
                        comp_slot(p, x.replica2);
                        chan_slot(p, x.voter_in1);
                        chan_slot(p, x.voter_in2);
                        chan_slot(p, x.voter_in3);
                        comp_slot(p, x.voter);
                        chan_slot(p, x.voter_out);
                        comp_slot(p, x.out);
                    } else {
                        anchor(p, x.version1);
                        chan_list(p, x.inputs);
                        chan_list(p, x.outputs);
                        comp_slot(p, x.version2);
                        chan_list(p, x.voters_in1);
                        chan_list(p, x.voters_in2);
                        comp_list(p, x.voters);
                        comp_list(p, x.voter_targets);
                        chan_list(p, x.voter_outputs);
                    }
                },
                p.body);
        }
    }

    void check_explore() {
        std::set<PatternKind> seen;
        for (const auto& d : m_.explore) {
            if (d.budget < 0)
                error("invalid-budget", "explore budget for '" + std::string(to_token(d.kind)) + "' is negative",
                      d.origin);
            if (!seen.insert(d.kind).second)
                warning("duplicate-explore",
                        "more than one explore directive for '" + std::string(to_token(d.kind)) + "'", d.origin);
        }
    }

    const SystemModel& m_;
    std::set<Id> aux_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate_model(const SystemModel& model) { return Validator(model).run(); }

}  // namespace safpat
