#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "safpat/controllability.hpp"
#include "safpat/export.hpp"
#include "safpat/facts.hpp"
#include "safpat/recommender.hpp"

namespace safpat::cli {

namespace {

enum class Format { Text, Json, Dot };

struct Config {
    std::string command;
    std::string input;
    std::string output;
    std::optional<Format> format;
    std::vector<std::string> assume;
    std::vector<std::string> budgets;
    std::size_t hard_cap = 24;
    std::optional<std::size_t> scenario;
};

struct Failure {
    int code;
    std::string message;
};

std::string read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kIoError, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Failure{kIoError, "cannot read '" + path + "'"};
    return ss.str();
}

SystemModel load(const Config& cfg, std::ostream& err) {
    const auto text = read_input(cfg.input);
    auto parsed = parse_facts(text);
    for (const auto& d : parsed.diagnostics) err << format_diagnostic(d, cfg.input) << '\n';
    if (!parsed.ok()) throw Failure{kModelError, ""};
    auto model = std::move(*parsed.model);
    for (const auto& hz : cfg.assume) {
        if (!model.find_hazard(hz)) throw Failure{kModelError, "unknown hazard '" + hz + "' in --assume-controlled"};
        model = assume_controlled(std::move(model), hz);
    }
    for (const auto& arg : cfg.budgets) {
        const auto eq = arg.find('=');
        const auto kind = eq == std::string::npos ? std::nullopt : parse_pattern_kind(arg.substr(0, eq));
        const auto digits = eq == std::string::npos ? std::string() : arg.substr(eq + 1);
        const bool numeric = !digits.empty() && digits.size() <= 9 &&
                             digits.find_first_not_of("0123456789") == std::string::npos;
        if (!kind || !numeric) throw Failure{kModelError, "invalid --budget '" + arg + "', expected kind=N"};
        model.set_budget(*kind, std::stoll(digits));
    }
    return model;
}

std::string reason_text(const HazardStatus& st) {
    return std::visit(
        [&](const auto& j) -> std::string {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, ByPattern>) {
                return "by " + j.pattern + " (" + j.rule + ")";
            } else if constexpr (std::is_same_v<T, ByAllChildren>) {
                std::string s = "all sub-hazards controlled:";
                for (const auto& c : j.children) s += " " + c;
                return s;
            } else {
                std::string s(to_token(j.reason));
                if (j.child) s += " " + *j.child;
                return s;
            }
        },
        st.justification);
}

std::string report_text(const ControllabilityReport& report) {
    std::ostringstream os;
    std::size_t width = 6;
    for (const auto& [id, st] : report.hazards) width = std::max(width, id.size());
    for (const auto& [id, st] : report.hazards) {
        os << std::left << std::setw(static_cast<int>(width) + 2) << id << std::setw(14)
           << (st.status == Status::Controlled ? "controlled" : "uncontrolled") << std::setw(9)
           << (st.hazard_class == HazardClass::Basic ? "basic" : "derived") << reason_text(st) << '\n';
    }
    os << report.controlled_count() << " of " << report.hazards.size() << " hazards controlled\n";
    return os.str();
}

std::string budgets_text(const SystemModel& model) {
    std::string s = "budgets:";
    if (model.explore.empty()) s += " none";
    for (const auto& d : model.explore) s += " " + std::string(to_token(d.kind)) + "=" + std::to_string(d.budget);
    return s + '\n';
}

std::string recommendation_text(const SystemModel& model, const RecommendationResult& r) {
    std::ostringstream os;
    os << budgets_text(model);
    os << "candidates: " << r.candidates.size() << '\n';
    for (std::size_t i = 0; i < r.candidates.size(); ++i)
        os << "  [" << i << "] " << format_pattern(r.candidates[i].instance) << '\n';
    os << "scenarios evaluated: " << r.total_scenarios << '\n';
    os << "best architectures: " << r.best.size() << ", complete: " << r.complete.size() << '\n';
    for (std::size_t b = 0; b < r.best.size(); ++b) {
        const auto& s = r.best[b];
        os << "scenario " << b << (s.complete() ? " (complete)" : "") << ": " << s.score.controlled << " of "
           << s.report.hazards.size() << " hazards, weight " << s.score.severity_weight << '\n';
        if (s.selected.empty()) os << "  (no patterns)\n";
        for (auto i : s.selected) os << "  " << format_pattern(r.candidates[i].instance) << '\n';
    }
    return os.str();
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) throw Failure{kIoError, "cannot write '" + cfg.output + "'"};
}

RecommendationResult run_recommend(const SystemModel& model, const Config& cfg) {
    RecommendOptions opts;
    opts.hard_cap = cfg.hard_cap;
    opts.workers = 0;
    try {
        return recommend(model, opts);
    } catch (const SearchCapExceeded& e) {
        throw Failure{kSearchCap, e.what()};
    }
}

int cmd_check(const Config& cfg, std::ostream& out, std::ostream& err) {
    const auto model = load(cfg, err);
    std::ostringstream os;
    os << cfg.input << ": ok, " << model.components.size() << " components, " << model.channels.size()
       << " channels, " << model.hazards.size() << " hazards, " << model.patterns.size() << " patterns\n";
    emit(cfg, os.str(), out);
    return kOk;
}

int cmd_analyze(const Config& cfg, std::ostream& out, std::ostream& err) {
    const auto model = load(cfg, err);
    const auto report = compute_controllability(model);
    const auto fmt = cfg.format.value_or(Format::Text);
    if (fmt == Format::Json)
        emit(cfg, render_json(model, report), out);
    else if (fmt == Format::Dot)
        emit(cfg, render_dot(model), out);
    else
        emit(cfg, report_text(report), out);
    return report.all_controlled() ? kOk : kIncomplete;
}

int cmd_recommend(const Config& cfg, std::ostream& out, std::ostream& err) {
    const auto model = load(cfg, err);
    const auto result = run_recommend(model, cfg);
    const auto fmt = cfg.format.value_or(Format::Text);
    if (fmt == Format::Json) {
        emit(cfg, render_json(model, result), out);
    } else if (fmt == Format::Dot) {
        if (result.best.empty()) throw Failure{kModelError, "no scenario to draw"};
        emit(cfg, render_dot(model, result, result.best.front()), out);
    } else {
        emit(cfg, recommendation_text(model, result), out);
    }
    return result.complete.empty() ? kIncomplete : kOk;
}

int cmd_export(const Config& cfg, std::ostream& out, std::ostream& err) {
    const auto model = load(cfg, err);
    const auto fmt = cfg.format.value_or(Format::Dot);
    if (!cfg.scenario) {
        if (fmt == Format::Json)
            emit(cfg, render_json(model, compute_controllability(model)), out);
        else if (fmt == Format::Dot)
            emit(cfg, render_dot(model), out);
        else
            emit(cfg, serialize(model), out);
        return kOk;
    }
    const auto result = run_recommend(model, cfg);
    const auto k = *cfg.scenario;
    if (k >= result.best.size())
        throw Failure{kModelError, "scenario " + std::to_string(k) + " out of range, " +
                                       std::to_string(result.best.size()) + " available"};
    const auto& s = result.best[k];
    if (fmt == Format::Json) {
        emit(cfg, render_json(merge_candidates(model, result.candidates, s.selected), s.report), out);
    } else if (fmt == Format::Dot) {
        emit(cfg, render_dot(model, result, s), out);
    } else {
        auto merged = merge_candidates(model, result.candidates, s.selected);
        merged.explore.clear();
        emit(cfg, serialize(merged), out);
    }
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"SafPat safety-pattern reasoning engine", "safpat"};
    app.require_subcommand(1);
    Config cfg;

    const std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}, {"dot", Format::Dot}};
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", cfg.input, "Model file (.sp)")->required();
        sub->add_option("-o,--output", cfg.output, "Write to file instead of standard output");
        sub->add_option("--format", cfg.format, "Output format")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
        sub->add_option("--assume-controlled", cfg.assume, "Treat a hazard as controlled (repeatable)")
            ->allow_extra_args(false);
        sub->add_option("--budget", cfg.budgets, "Override an explore budget, kind=N (repeatable)")
            ->allow_extra_args(false);
        sub->add_option("--hard-cap", cfg.hard_cap, "Maximum number of candidate placements");
    };

    auto* check = app.add_subcommand("check", "Parse and validate a model");
    auto* analyze = app.add_subcommand("analyze", "Report hazard controllability");
    auto* rec = app.add_subcommand("recommend", "Recommend pattern placements under the explore budgets");
    auto* exp = app.add_subcommand("export", "Write the model or a recommended scenario as DOT or JSON");
    for (auto* sub : {check, analyze, rec, exp}) add_common(sub);
    exp->add_option("--scenario", cfg.scenario, "Index of a best architecture from recommend");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kModelError;
    }

    try {
        if (check->parsed()) return cmd_check(cfg, out, err);
        if (analyze->parsed()) return cmd_analyze(cfg, out, err);
        if (rec->parsed()) return cmd_recommend(cfg, out, err);
        return cmd_export(cfg, out, err);
    } catch (const Failure& f) {
        if (!f.message.empty()) err << "safpat: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        err << "safpat: " << e.what() << '\n';
        return kModelError;
    }
}

}  // namespace safpat::cli
