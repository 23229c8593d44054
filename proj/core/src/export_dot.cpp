#include <map>
#include <set>
#include <sstream>

#include "safpat/export.hpp"

namespace safpat {

namespace {

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string quote(std::string_view s) { return '"' + escape(s) + '"'; }

std::string ref_label(const RefList& r) {
    if (is_full(r)) return "all";
    if (const auto* b = std::get_if<FreshBundle>(&r)) return b->name;
    std::string s;
    for (const auto& id : explicit_members(r)) s += (s.empty() ? "" : ",") + id;
    return s;
}

struct AuxNode {
    Id id;
    std::string pattern;
};

struct AuxEdge {
    Id from, to;
    std::string label;
    Id owner;
};

class DotWriter {
  public:
    DotWriter(const SystemModel& m, const std::set<Id>& recommended, const RenderOptions& o)
        : m_(m), recommended_(recommended), opt_(o) {
        for (const auto& c : m_.components) {
            declared_.insert(c.id);
            if (c.parent) children_[*c.parent].push_back(c.id);
        }
        for (const auto& ch : m_.channels) channel_ids_.insert(ch.id);
    }

    std::string render() {
        if (m_.components.empty() && m_.channels.empty() && m_.patterns.empty())
            return "// safpat architecture\ndigraph safpat {}\n";
        out_ << "// safpat architecture\ndigraph safpat {\n";
        out_ << "  rankdir=LR;\n  node [shape=box];\n";
        for (const auto& c : m_.components)
            if (!c.parent) component(c.id, 1);
        for (const auto& p : m_.patterns) pattern(p);
        emit_aux_nodes();
        for (const auto& ch : m_.channels) {
            out_ << "  " << quote(ch.source) << " -> " << quote(ch.target) << " [label=" << quote(ch.id);
            if (dashed(ch.source) || dashed(ch.target)) out_ << ", style=dashed";
            out_ << "];\n";
        }
        for (const auto& e : edges_) {
            out_ << "  " << quote(e.from) << " -> " << quote(e.to) << " [label=" << quote(e.label);
            if (opt_.highlight_recommended && recommended_.count(e.owner)) out_ << ", style=dashed";
            out_ << "];\n";
        }
        out_ << "}\n";
        return out_.str();
    }

  private:
    void component(const Id& id, int depth) {
        const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
        out_ << pad << quote(id) << ";\n";
        auto it = children_.find(id);
        if (it == children_.end()) return;
        out_ << pad << "subgraph " << quote("cluster_" + id) << " {\n";
        out_ << pad << "  label=" << quote(id) << ";\n";
        for (const auto& kid : it->second) component(kid, depth + 1);
        out_ << pad << "}\n";
    }

    void node(const Id& id, const std::string& pattern) {
        if (declared_.count(id) || !aux_seen_.insert(id).second) return;
        aux_.push_back({id, pattern});
    }

    void edge(const Id& from, const Id& to, const std::string& label) {
        if (channel_ids_.count(label)) return;
        edges_.push_back({from, to, label, current_});
    }

    void pattern(const PatternInstance& p) {
        const Id pid = p.id();
        current_ = pid;
        std::visit(
            [&](const auto& b) {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, SafetyMonitor>) {
                    node(b.monitor, pid);
                    edge(b.monitored, b.monitor, ref_label(b.monitor_outputs));
                    edge(b.monitor, b.monitored, b.fail_safe);
                } else if constexpr (std::is_same_v<T, Watchdog>) {
                    node(b.dog, pid);
                    edge(b.monitored, b.dog, b.liveness);
                    edge(b.dog, b.monitored, b.fail_safe);
                } else if constexpr (std::is_same_v<T, Hdr>) {
                    node(b.voter, pid);
                    node(b.out, pid);
                    edge(b.primary, b.voter, b.voter_in1);
                    edge(b.replica, b.voter, b.voter_in2);
                    edge(b.voter, b.out, b.voter_out);
                } else if constexpr (std::is_same_v<T, Tmr>) {
                    node(b.replica1, pid);
                    node(b.replica2, pid);
                    node(b.voter, pid);
                    node(b.out, pid);
                    edge(b.primary, b.voter, b.voter_in1);
                    edge(b.replica1, b.voter, b.voter_in2);
                    edge(b.replica2, b.voter, b.voter_in3);
                    edge(b.voter, b.out, b.voter_out);
                } else {
                    const Id voters = ref_label(b.voters);
                    const Id targets = ref_label(b.voter_targets);
                    node(b.version2, pid);
                    node(voters, pid);
                    node(targets, pid);
                    edge(b.version1, voters, ref_label(b.voters_in1));
                    edge(b.version2, voters, ref_label(b.voters_in2));
                    edge(voters, targets, ref_label(b.voter_outputs));
                }
            },
            p.body);
    }

    void emit_aux_nodes() {
        for (const auto& n : aux_) {
            out_ << "  " << quote(n.id) << " [label=\"" << escape(n.id) << "\\n" << escape(n.pattern) << '"';
            if (opt_.highlight_recommended && recommended_.count(n.pattern))
                out_ << ", style=filled, fillcolor=gray30, fontcolor=white";
            else
                out_ << ", style=rounded";
            out_ << "];\n";
            aux_owner_[n.id] = n.pattern;
        }
    }

    bool dashed(const Id& endpoint) const {
        auto it = aux_owner_.find(endpoint);
        return opt_.highlight_recommended && it != aux_owner_.end() && recommended_.count(it->second);
    }

    const SystemModel& m_;
    const std::set<Id>& recommended_;
    const RenderOptions& opt_;
    std::ostringstream out_;
    std::set<Id> declared_, channel_ids_, aux_seen_;
    std::map<Id, std::vector<Id>> children_;
    std::vector<AuxNode> aux_;
    std::map<Id, std::string> aux_owner_;
    std::vector<AuxEdge> edges_;
    Id current_;
};

}  // namespace

std::string render_dot(const SystemModel& model, const RenderOptions& options) {
    const std::set<Id> none;
    return DotWriter(model, none, options).render();
}

std::string render_dot(const SystemModel& model, const RecommendationResult& result, const Scenario& scenario,
                       const RenderOptions& options) {
    SystemModel merged = model;
    std::set<Id> recommended;
    for (auto i : scenario.selected) {
        const auto& c = result.candidates.at(i);
        merged.patterns.push_back(c.instance);
        recommended.insert(c.instance.id());
    }
    return DotWriter(merged, recommended, options).render();
}

}  // namespace safpat
