#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace safpat {

/// Byte range inside a source text. Lines and columns are 1-based.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    int line = 1;
    int column = 1;

    bool operator==(const SourceSpan&) const = default;
};

/// Where a model element was declared. Compares equal to every other Origin so
/// that structural equality of model elements ignores provenance.
struct Origin {
    std::optional<SourceSpan> span;

    friend bool operator==(const Origin&, const Origin&) { return true; }
};

enum class DiagSeverity { Error, Warning };

struct Diagnostic {
    DiagSeverity severity = DiagSeverity::Error;
    std::string code;
    std::string message;
    std::optional<SourceSpan> location;

    bool is_error() const { return severity == DiagSeverity::Error; }
    bool operator==(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diags);

/// Stable order: code, then location (unlocated last), then message.
void sort_diagnostics(std::vector<Diagnostic>& diags);

/// `file:line:col: error[code]: message`
std::string format_diagnostic(const Diagnostic& d, const std::string& file = {});

std::ostream& operator<<(std::ostream& os, const Diagnostic& d);

}  // namespace safpat
