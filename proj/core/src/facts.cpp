#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "safpat/facts.hpp"

namespace safpat {
namespace {

const std::map<std::string, std::size_t, std::less<>>& arities() {
    static const std::map<std::string, std::size_t, std::less<>> table{
        {"cp", 1},     {"subcp", 2},   {"ch", 3},  {"if", 2},  {"hw", 1},     {"sw", 1},
        {"hz", 4},     {"subHz", 2},   {"safMon", 8}, {"watchDog", 5}, {"hdr", 9}, {"tmr", 11},
        {"2Prog", 10}, {"twoProg", 10}, {"explore", 2}, {"isexploration", 0}};
    return table;
}

bool is_output_only(std::string_view pred) {
    static const std::set<std::string, std::less<>> names{"ctl",  "nctl", "nsafMon", "nwatchDog",
                                                          "nhdr", "ntmr", "n2Prog",  "ntwoProg"};
    return names.count(pred) > 0;
}

struct BadArg {};

class ModelBuilder {
  public:
    explicit ModelBuilder(std::vector<Diagnostic>& diags) : diags_(diags) {}

    SystemModel build(const std::vector<Fact>& facts) {
        // Declarations first so that references may appear in any order.
        for (const auto& f : facts)
            if (f.predicate == "cp" && check_arity(f)) guarded([&] { add_cp(f); });
        for (const auto& f : facts) {
            if (f.predicate == "cp") continue;
            if (is_output_only(f.predicate)) {
                error("output-only-fact", "'" + f.predicate + "' facts are analysis results and cannot be input",
                      f.span);
                continue;
            }
            if (!arities().count(f.predicate)) {
                diags_.push_back({DiagSeverity::Warning, "unknown-predicate",
                                  "unknown predicate '" + f.predicate + "/" + std::to_string(f.args.size()) +
                                      "' ignored",
                                  f.span});
                continue;
            }
            if (!check_arity(f)) continue;
            guarded([&] { dispatch(f); });
        }
        return std::move(m_);
    }

  private:
    template <typename F>
    void guarded(F&& fn) {
        try {
            fn();
        } catch (const BadArg&) {
        }
    }

    void error(std::string code, std::string msg, const SourceSpan& at) {
        diags_.push_back({DiagSeverity::Error, std::move(code), std::move(msg), at});
    }
    void warning(std::string code, std::string msg, const SourceSpan& at) {
        diags_.push_back({DiagSeverity::Warning, std::move(code), std::move(msg), at});
    }

    bool check_arity(const Fact& f) {
        const auto want = arities().find(f.predicate)->second;
        if (f.args.size() == want) return true;
        error("arity", "'" + f.predicate + "' expects " + std::to_string(want) + " argument(s), got " +
                           std::to_string(f.args.size()),
              f.span);
        return false;
    }

    [[noreturn]] void bad(const FactTerm& t, std::string code, std::string msg) {
        error(std::move(code), std::move(msg), t.span);
        throw BadArg{};
    }

    const std::string& atom(const FactTerm& t, const char* what) {
        const auto* a = std::get_if<FactTerm::Atom>(&t.value);
        if (!a) bad(t, "type-mismatch", std::string("expected ") + what + " identifier");
        return a->name;
    }

    Id ident(const FactTerm& t, const char* what) {
        const auto& name = atom(t, what);
        if (!is_valid_identifier(name)) bad(t, "invalid-identifier", "invalid identifier '" + name + "'");
        return name;
    }

    std::vector<Id> ident_list(const FactTerm& t, const char* what) {
        const auto* l = std::get_if<FactTerm::List>(&t.value);
        if (!l) bad(t, "type-mismatch", std::string("expected a list of ") + what + " identifiers");
        std::vector<Id> out;
        for (const auto& item : l->items) out.push_back(ident(item, what));
        return out;
    }

    RefList ref_list(const FactTerm& t, const char* what) {
        if (const auto* a = std::get_if<FactTerm::Atom>(&t.value)) {
            if (a->name == "allInputs" || a->name == "allOutputs") return FullCoverage{};
            if (is_fresh_identifier(a->name) && is_valid_identifier(a->name)) return FreshBundle{a->name};
            bad(t, "invalid-list", "bare atom '" + a->name + "' where a list of " + what +
                                       " identifiers, allInputs/allOutputs, or a fresh atom is expected");
        }
        return ident_list(t, what);
    }

    Origin at(const Fact& f) const { return Origin{f.span}; }

    Component* component_at(const FactTerm& t) {
        const auto name = ident(t, "component");
        auto it = std::find_if(m_.components.begin(), m_.components.end(),
                               [&](const Component& c) { return c.id == name; });
        if (it == m_.components.end())
            bad(t, "undeclared-component", "undeclared component '" + name + "'");
        return &*it;
    }

    void add_cp(const Fact& f) {
        const auto id = ident(f.args[0], "component");
        if (m_.find_component(id)) {
            warning("duplicate-fact", "cp(" + id + ") declared more than once", f.span);
            return;
        }
        m_.components.push_back(Component{id, std::nullopt, Impl::Unspecified, at(f)});
    }

    template <typename T>
    void push_unique(std::vector<T>& items, T value, const Fact& f) {
        if (std::find(items.begin(), items.end(), value) != items.end()) {
            warning("duplicate-fact", "fact '" + f.predicate + "' repeated", f.span);
            return;
        }
        items.push_back(std::move(value));
    }

    void dispatch(const Fact& f) {
        const auto& p = f.predicate;
        const auto& a = f.args;
        if (p == "subcp") {
            auto* child = component_at(a[0]);
            const auto parent = ident(a[1], "component");
            if (child->parent && *child->parent != parent)
                bad(a[1], "conflicting-subcp", "'" + child->id + "' already has parent '" + *child->parent + "'");
            if (child->parent) {
                warning("duplicate-fact", "fact 'subcp' repeated", f.span);
                return;
            }
            child->parent = parent;
        } else if (p == "ch") {
            push_unique(m_.channels,
                        Channel{ident(a[0], "channel"), ident(a[1], "component"), ident(a[2], "component"), at(f)},
                        f);
        } else if (p == "if") {
            push_unique(m_.flows, InformationFlow{ident(a[0], "flow"), ident_list(a[1], "channel"), at(f)}, f);
        } else if (p == "hw" || p == "sw") {
            auto* c = component_at(a[0]);
            const Impl want = p == "hw" ? Impl::Hardware : Impl::Software;
            if (c->impl == want) {
                warning("duplicate-fact", "fact '" + p + "' repeated", f.span);
            } else if (c->impl != Impl::Unspecified) {
                bad(a[0], "conflicting-impl", "'" + c->id + "' is declared both hw and sw");
            } else {
                c->impl = want;
            }
        } else if (p == "hz") {
            const auto id = ident(a[0], "hazard");
            const auto cp = ident(a[1], "component");
            const auto& tt = atom(a[2], "hazard type");
            const auto type = parse_hazard_type(tt);
            if (!type) bad(a[2], "invalid-hazard-type", "invalid hazard type token '" + tt + "'");
            const auto& st = atom(a[3], "severity");
            const auto sev = parse_severity(st);
            if (!sev) bad(a[3], "invalid-severity", "invalid severity token '" + st + "'");
            push_unique(m_.hazards, Hazard{id, cp, *type, *sev, at(f)}, f);
        } else if (p == "subHz") {
            push_unique(m_.sub_hazards, SubHazardEdge{ident(a[0], "hazard"), ident(a[1], "hazard"), at(f)}, f);
        } else if (p == "safMon") {
            add_pattern(f, SafetyMonitor{ident(a[0], "pattern"), ident(a[1], "component"),
                                         ref_list(a[2], "channel"), ref_list(a[3], "channel"),
                                         ident(a[4], "channel"), ref_list(a[5], "channel"),
                                         ref_list(a[6], "channel"), ident(a[7], "component")});
        } else if (p == "watchDog") {
            add_pattern(f, Watchdog{ident(a[0], "pattern"), ident(a[1], "component"), ident(a[2], "channel"),
                                    ident(a[3], "channel"), ident(a[4], "component")});
        } else if (p == "hdr") {
            add_pattern(f, Hdr{ident(a[0], "pattern"), ident(a[1], "component"), ident(a[2], "channel"),
                               ident(a[3], "component"), ident(a[4], "channel"), ident(a[5], "channel"),
                               ident(a[6], "component"), ident(a[7], "channel"), ident(a[8], "component")});
        } else if (p == "tmr") {
            add_pattern(f, Tmr{ident(a[0], "pattern"), ident(a[1], "component"), ident(a[2], "channel"),
                               ident(a[3], "component"), ident(a[4], "component"), ident(a[5], "channel"),
                               ident(a[6], "channel"), ident(a[7], "channel"), ident(a[8], "component"),
                               ident(a[9], "channel"), ident(a[10], "component")});
        } else if (p == "2Prog" || p == "twoProg") {
            add_pattern(f, TwoProg{ident(a[0], "pattern"), ident(a[1], "component"), ref_list(a[2], "channel"),
                                   ref_list(a[3], "channel"), ident(a[4], "component"), ref_list(a[5], "channel"),
                                   ref_list(a[6], "channel"), ref_list(a[7], "component"),
                                   ref_list(a[8], "component"), ref_list(a[9], "channel")});
        } else if (p == "explore") {
            const auto* n = std::get_if<FactTerm::Integer>(&a[0].value);
            if (!n) bad(a[0], "type-mismatch", "explore budget must be a non-negative integer");
            const auto& kt = atom(a[1], "pattern kind");
            const auto kind = parse_pattern_kind(kt);
            if (!kind) bad(a[1], "invalid-pattern-kind", "unknown pattern kind '" + kt + "' in explore");
            if (m_.budget(*kind))
                warning("duplicate-explore",
                        "explore directive for '" + std::string(to_token(*kind)) + "' overrides an earlier one",
                        f.span);
            set_budget(*kind, n->value, at(f));
        } else if (p == "isexploration") {
            m_.exploration = true;
        }
    }

    void set_budget(PatternKind k, long long n, Origin origin) {
        for (auto& d : m_.explore) {
            if (d.kind == k) {
                d.budget = n;
                d.origin = origin;
                return;
            }
        }
        m_.explore.push_back(ExploreDirective{k, n, origin});
    }

    void add_pattern(const Fact& f, PatternBody body) {
        push_unique(m_.patterns, PatternInstance{std::move(body), at(f)}, f);
    }

    std::vector<Diagnostic>& diags_;
    SystemModel m_;
};

// Output helpers ------------------------------------------------------------

void put_list(std::ostream& os, const RefList& l, bool input_side) {
    if (is_full(l)) {
        os << (input_side ? "allInputs" : "allOutputs");
    } else if (const auto* f = std::get_if<FreshBundle>(&l)) {
        os << f->name;
    } else {
        os << '[';
        const auto& items = explicit_members(l);
        for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << items[i];
        os << ']';
    }
}

template <typename... Ids>
void put_ids(std::ostream& os, const Ids&... ids) {
    bool first = true;
    ((os << (first ? "" : ",") << ids, first = false), ...);
}

}  // namespace

ParseResult parse_facts(std::string_view text) {
    ParseResult result;
    auto facts = read_facts(text, result.diagnostics);
    ModelBuilder builder(result.diagnostics);
    SystemModel model = builder.build(facts);
    if (!has_errors(result.diagnostics)) {
        auto v = validate_model(model);
        result.diagnostics.insert(result.diagnostics.end(), v.begin(), v.end());
    }
    sort_diagnostics(result.diagnostics);
    if (!has_errors(result.diagnostics)) result.model = std::move(model);
    return result;
}

std::string format_pattern(const PatternInstance& p) {
    std::ostringstream os;
    os << predicate_name(p.kind()) << '(';
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SafetyMonitor>) {
                put_ids(os, x.id, x.monitored);
                os << ',';
                put_list(os, x.inputs, true);
                os << ',';
                put_list(os, x.outputs, false);
                os << ',' << x.fail_safe << ',';
                put_list(os, x.monitor_inputs, true);
                os << ',';
                put_list(os, x.monitor_outputs, false);
                os << ',' << x.monitor;
            } else if constexpr (std::is_same_v<T, Watchdog>) {
                put_ids(os, x.id, x.monitored, x.fail_safe, x.liveness, x.dog);
            } else if constexpr (std::is_same_v<T, Hdr>) {
                put_ids(os, x.id, x.primary, x.fault_channel, x.replica, x.voter_in1, x.voter_in2, x.voter,
                        x.voter_out, x.out);
            } else if constexpr (std::is_same_v<T, Tmr>) {
                put_ids(os, x.id, x.primary, x.fault_channel, x.replica1, x.replica2, x.voter_in1, x.voter_in2,
                        x.voter_in3, x.voter, x.voter_out, x.out);
            } else {
                put_ids(os, x.id, x.version1);
                os << ',';
                put_list(os, x.inputs, true);
                os << ',';
                put_list(os, x.outputs, false);
                os << ',' << x.version2 << ',';
                put_list(os, x.voters_in1, true);
                os << ',';
                put_list(os, x.voters_in2, true);
                os << ',';
                put_list(os, x.voters, false);
                os << ',';
                put_list(os, x.voter_targets, false);
                os << ',';
                put_list(os, x.voter_outputs, false);
            }
        },
        p.body);
    os << ')';
    return os.str();
}

std::string serialize(const SystemModel& m) {
    std::ostringstream os;
    for (const auto& c : m.components) os << "cp(" << c.id << ").\n";
    for (const auto& c : m.components)
        if (c.parent) os << "subcp(" << c.id << ',' << *c.parent << ").\n";
    for (const auto& c : m.channels) os << "ch(" << c.id << ',' << c.source << ',' << c.target << ").\n";
    for (const auto& f : m.flows) {
        os << "if(" << f.id << ",";
        put_list(os, f.path, true);
        os << ").\n";
    }
    for (const auto& c : m.components)
        if (c.impl == Impl::Hardware) os << "hw(" << c.id << ").\n";
    for (const auto& c : m.components)
        if (c.impl == Impl::Software) os << "sw(" << c.id << ").\n";
    for (const auto& h : m.hazards)
        os << "hz(" << h.id << ',' << h.component << ',' << to_token(h.type) << ',' << to_token(h.severity)
           << ").\n";
    for (const auto& e : m.sub_hazards) os << "subHz(" << e.child << ',' << e.parent << ").\n";
    for (const auto kind : kAllPatternKinds)
        for (const auto& p : m.patterns)
            if (p.kind() == kind) os << format_pattern(p) << ".\n";
    for (const auto& d : m.explore) os << "explore(" << d.budget << ',' << to_token(d.kind) << ").\n";
    if (m.exploration) os << "isexploration.\n";
    return os.str();
}

}  // namespace safpat
