#pragma once

// Reader and writer for the SafPat fact notation: `pred(arg, ..., arg).` with
// `%` line comments. This is the `.sp` file format.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "safpat/diagnostic.hpp"
#include "safpat/model.hpp"

namespace safpat {

/// Generic term of a ground fact.
struct FactTerm {
    struct Atom { std::string name; bool operator==(const Atom&) const = default; };
    struct Integer { long long value; bool operator==(const Integer&) const = default; };
    struct Quoted { std::string text; bool operator==(const Quoted&) const = default; };
    struct List { std::vector<FactTerm> items; bool operator==(const List&) const = default; };

    std::variant<Atom, Integer, Quoted, List> value;
    SourceSpan span;

    bool operator==(const FactTerm& o) const { return value == o.value; }
};

struct Fact {
    std::string predicate;
    std::vector<FactTerm> args;
    SourceSpan span;
};

/// Syntax only: splits text into facts. Never throws.
std::vector<Fact> read_facts(std::string_view text, std::vector<Diagnostic>& diags);

struct ParseResult {
    std::optional<SystemModel> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Parses and validates. `model` is set iff there are no Error diagnostics.
ParseResult parse_facts(std::string_view text);

/// Canonical text, one fact per line, grouped by predicate.
std::string serialize(const SystemModel& model);

/// A single pattern as a ground fact without the trailing period,
/// e.g. `watchDog(nuWD1,acc,nuscwd1,nulvwd1,nuwd1)`.
std::string format_pattern(const PatternInstance& p);

}  // namespace safpat
