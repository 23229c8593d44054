#include "safpat/diagnostic.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace safpat {

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
    auto key = [](const Diagnostic& d) {
        const bool unlocated = !d.location.has_value();
        const std::size_t begin = d.location ? d.location->begin : 0;
        return std::make_tuple(d.code, unlocated, begin, d.message);
    };
    std::stable_sort(diags.begin(), diags.end(),
                     [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
    std::ostringstream os;
    if (!file.empty()) os << file << ':';
    if (d.location) os << d.location->line << ':' << d.location->column << ':';
    if (!file.empty() || d.location) os << ' ';
    os << (d.is_error() ? "error" : "warning") << '[' << d.code << "]: " << d.message;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) { return os << format_diagnostic(d); }

}  // namespace safpat
