#include "rule_oracle.hpp"

#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace safpat::testing {

namespace {

using Atom = std::string;

// A list argument: either the allInputs/allOutputs constant or explicit members.
struct ListArg {
    bool all = false;
    std::set<Atom> items;
};

ListArg list_arg(const RefList& r) {
    ListArg out;
    if (std::holds_alternative<FullCoverage>(r)) out.all = true;
    if (const auto* v = std::get_if<std::vector<Id>>(&r)) out.items.insert(v->begin(), v->end());
    return out;
}

bool member(const Atom& x, const ListArg& l) { return l.all || l.items.count(x) > 0; }

struct Facts {
    std::set<Atom> cp, sw;
    std::vector<std::tuple<Atom, Atom, Atom>> ch;                   // ch(CH,FROM,TO)
    std::vector<std::tuple<Atom, std::string, std::string>> hz;     // hz(ID,CP,TP) (SV unused)
    std::vector<std::pair<Atom, Atom>> sub;                         // subHz(SH,H)
    std::map<Atom, std::vector<Atom>> path;                         // if(IF,PATH)
    std::vector<std::tuple<Atom, Atom, ListArg, ListArg, Atom>> safmon;  // ID2,CP,ICHs,OCHs,FS
    std::vector<std::tuple<Atom, Atom, ListArg>> twoprog;           // ID2,CP,ICHs
    std::vector<Atom> wd_cp;                                        // watchDog(_,CP,...)
    std::vector<std::tuple<Atom, Atom, Atom>> hdr;                  // CP1,CP2,VOTER
    std::vector<std::tuple<Atom, Atom>> tmr;                        // CP1,VOTER
    std::set<Atom> assumed;
    bool isexploration = false;
};

std::string type_atom(HazardType t) {
    switch (t) {
        case HazardType::Err: return "err";
        case HazardType::Loss: return "loss";
        case HazardType::Omission: return "omission";
        case HazardType::Late: return "late";
        case HazardType::Early: return "early";
    }
    return "";
}

Facts extract(const SystemModel& m) {
    Facts f;
    for (const auto& c : m.components) {
        f.cp.insert(c.id);
        if (c.impl == Impl::Software) f.sw.insert(c.id);
    }
    for (const auto& c : m.channels) f.ch.emplace_back(c.id, c.source, c.target);
    for (const auto& h : m.hazards) f.hz.emplace_back(h.id, h.component, type_atom(h.type));
    for (const auto& e : m.sub_hazards) f.sub.emplace_back(e.child, e.parent);
    for (const auto& fl : m.flows) f.path[fl.id] = fl.path;
    for (const auto& p : m.patterns) {
        if (const auto* s = std::get_if<SafetyMonitor>(&p.body))
            f.safmon.emplace_back(s->id, s->monitored, list_arg(s->inputs), list_arg(s->outputs), s->fail_safe);
        else if (const auto* t = std::get_if<TwoProg>(&p.body))
            f.twoprog.emplace_back(t->id, t->version1, list_arg(t->inputs));
        else if (const auto* w = std::get_if<Watchdog>(&p.body))
            f.wd_cp.push_back(w->monitored);
        else if (const auto* h = std::get_if<Hdr>(&p.body))
            f.hdr.emplace_back(h->primary, h->replica, h->voter);
        else if (const auto* r = std::get_if<Tmr>(&p.body))
            f.tmr.emplace_back(r->primary, r->voter);
    }
    f.assumed = m.assumed_controlled;
    f.isexploration = m.exploration;
    return f;
}

// Position of CP on IF: first index in src(c1), dst(c1), dst(c2), ...
std::optional<std::size_t> pos(const Facts& f, const Atom& cp, const Atom& flow) {
    const auto& p = f.path.at(flow);
    std::vector<Atom> seq;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (const auto& [ch, from, to] : f.ch)
            if (ch == p[i]) {
                if (i == 0) seq.push_back(from);
                seq.push_back(to);
            }
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (seq[i] == cp) return i;
    return std::nullopt;
}

// inpNotCovSF(ID2) :- safMon(ID2,CP,ICHs,_,FS,_,_,_), ch(CH,_,CP), CH != FS,
//                     not #member(CH,ICHs), not isexploration.
bool inp_not_cov_sf(const Facts& f, const Atom& cp, const ListArg& ichs, const Atom& fs) {
    if (f.isexploration) return false;
    for (const auto& [ch, from, to] : f.ch)
        if (to == cp && ch != fs && !member(ch, ichs)) return true;
    return false;
}

// outNotCovSF(ID2) :- safMon(ID2,CP,_,OCHs,...), ch(CH,CP,_), not #member(CH,OCHs),
//                     not #member(CH,MIN), not #member(CH,MOUT), not isexploration.
// MIN and MOUT are empty.
bool out_not_cov_sf(const Facts& f, const Atom& cp, const ListArg& ochs) {
    if (f.isexploration) return false;
    for (const auto& [ch, from, to] : f.ch)
        if (from == cp && !member(ch, ochs)) return true;
    return false;
}

bool inp_not_cov_np(const Facts& f, const Atom& cp, const ListArg& ichs) {
    if (f.isexploration) return false;
    for (const auto& [ch, from, to] : f.ch)
        if (to == cp && !member(ch, ichs)) return true;
    return false;
}

bool has_ch(const Facts& f, const Atom& from, const Atom& to) {
    for (const auto& [ch, a, b] : f.ch)
        if (a == from && b == to) return true;
    return false;
}

// Pattern rules only; they do not depend on ctl/nctl.
bool pattern_ctl(const Facts& f, const Atom& id, const Atom& cp, const std::string& tp) {
    if (f.assumed.count(id)) return true;
    if (tp == "loss")
        for (const auto& w : f.wd_cp)
            if (w == cp) return true;
    if (tp == "err") {
        for (const auto& [id2, c, ichs, ochs, fs] : f.safmon)
            if (c == cp && !inp_not_cov_sf(f, c, ichs, fs) && !out_not_cov_sf(f, c, ochs)) return true;
        for (const auto& [id2, c, ichs] : f.twoprog)
            if (c == cp && f.sw.count(cp) && !inp_not_cov_np(f, c, ichs)) return true;
        for (const auto& [cp1, cp2, voter] : f.hdr)
            if (has_ch(f, cp, voter)) return true;
        for (const auto& [cp1, voter] : f.tmr)
            if (has_ch(f, cp, voter) || (f.isexploration && cp1 == cp)) return true;
    }
    if (tp == "omission" && f.cp.count(cp)) {
        for (const auto& [cp1, cp2, voter] : f.hdr) {
            if (!f.cp.count(cp1) || !f.cp.count(cp2)) continue;
            for (const auto& [flow, p] : f.path) {
                const auto a = pos(f, cp1, flow), b = pos(f, cp, flow), c = pos(f, cp2, flow);
                if (a && b && *a < *b && (cp2 == cp || (c && *b < *c))) return true;
            }
        }
    }
    return false;
}

}  // namespace

std::set<std::string> oracle_controlled(const SystemModel& model) {
    const Facts f = extract(model);

    // Strata: a hazard's stratum is one more than its deepest sub-hazard.
    std::map<Atom, std::size_t> stratum;
    for (const auto& [id, cp, tp] : f.hz) stratum[id] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [sh, h] : f.sub)
            if (stratum[h] < stratum[sh] + 1) {
                stratum[h] = stratum[sh] + 1;
                changed = true;
            }
    }
    std::size_t top = 0;
    for (const auto& [id, s] : stratum) top = std::max(top, s);

    std::set<Atom> ctl, nctl;
    for (std::size_t s = 0; s <= top; ++s) {
        for (const auto& [id, cp, tp] : f.hz) {
            if (stratum[id] != s) continue;
            bool has_sub = false, has_nctl_sub = false;
            for (const auto& [sh, h] : f.sub)
                if (h == id) {
                    has_sub = true;
                    if (nctl.count(sh)) has_nctl_sub = true;
                }
            // ctl from the pattern rules, or for a derived hazard
            // ctl(H) :- derived(H), not hasNCTLSubHz(H).
            if (pattern_ctl(f, id, cp, tp) || (has_sub && !has_nctl_sub))
                ctl.insert(id);
            // nctl, projected so that no hazard carries both atoms.
            else
                nctl.insert(id);
        }
    }
    return ctl;
}

}  // namespace safpat::testing
