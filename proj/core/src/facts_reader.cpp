// Tokenizer and fact-level parser. Recovers at the next period after an error
// so that one malformed fact does not hide problems further down the file.

#include <cctype>
#include <limits>

#include "safpat/facts.hpp"

namespace safpat {
namespace {

constexpr int kMaxListDepth = 32;

enum class Tok { Atom, Integer, Quoted, LParen, RParen, LBracket, RBracket, Comma, Period, End, Bad };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
};

class Lexer {
  public:
    Lexer(std::string_view text, std::vector<Diagnostic>& diags) : text_(text), diags_(diags) {}

    Token next() {
        skip_blank();
        Token t;
        t.span = here();
        if (pos_ >= text_.size()) {
            t.kind = Tok::End;
            return t;
        }
        const char c = text_[pos_];
        const auto u = static_cast<unsigned char>(c);
        switch (c) {
            case '(': return punct(t, Tok::LParen);
            case ')': return punct(t, Tok::RParen);
            case '[': return punct(t, Tok::LBracket);
            case ']': return punct(t, Tok::RBracket);
            case ',': return punct(t, Tok::Comma);
            case '.': return punct(t, Tok::Period);
            case '"': return quoted(t);
            default: break;
        }
        if (u < 0x80 && (std::isalnum(u) || c == '_')) {
            const std::size_t start = pos_;
            while (pos_ < text_.size()) {
                const auto v = static_cast<unsigned char>(text_[pos_]);
                if (v >= 0x80 || !(std::isalnum(v) || text_[pos_] == '_')) break;
                advance();
            }
            t.text = std::string(text_.substr(start, pos_ - start));
            finish(t);
            if (std::isupper(u) || c == '_') {
                report(t.span, "variable-in-fact", "'" + t.text + "' looks like a variable; facts must be ground");
                t.kind = Tok::Bad;
                return t;
            }
            bool digits = true;
            for (char d : t.text) digits = digits && std::isdigit(static_cast<unsigned char>(d));
            t.kind = digits ? Tok::Integer : Tok::Atom;
            return t;
        }
        advance();
        finish(t);
        if (u >= 0x80)
            report(t.span, "invalid-character", "non-ASCII byte in input");
        else
            report(t.span, "invalid-character", std::string("unexpected character '") + c + "'");
        t.kind = Tok::Bad;
        return t;
    }

  private:
    SourceSpan here() const { return SourceSpan{pos_, pos_, line_, col_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void finish(Token& t) const { t.span.end = pos_; }

    Token& punct(Token& t, Tok k) {
        t.kind = k;
        t.text = std::string(1, text_[pos_]);
        advance();
        finish(t);
        return t;
    }

    Token& quoted(Token& t) {
        advance();
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] != '\n') advance();
            out.push_back(text_[pos_]);
            advance();
        }
        if (pos_ >= text_.size() || text_[pos_] != '"') {
            finish(t);
            report(t.span, "unterminated-string", "string literal is not closed on this line");
            t.kind = Tok::Bad;
            return t;
        }
        advance();
        finish(t);
        t.kind = Tok::Quoted;
        t.text = std::move(out);
        return t;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    void report(const SourceSpan& at, std::string code, std::string msg) {
        diags_.push_back({DiagSeverity::Error, std::move(code), std::move(msg), at});
    }

    std::string_view text_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class FactParser {
  public:
    FactParser(std::string_view text, std::vector<Diagnostic>& diags) : lex_(text, diags), diags_(diags) {
        shift();
    }

    std::vector<Fact> run() {
        std::vector<Fact> facts;
        while (cur_.kind != Tok::End) {
            Fact f;
            if (parse_fact(f)) {
                facts.push_back(std::move(f));
            } else {
                recover();
            }
        }
        return facts;
    }

  private:
    struct SyntaxError {};

    void shift() { cur_ = lex_.next(); }

    [[noreturn]] void fail(const std::string& msg) {
        if (cur_.kind != Tok::Bad) diags_.push_back({DiagSeverity::Error, "syntax", msg, cur_.span});
        throw SyntaxError{};
    }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) fail(std::string("expected ") + what + describe_current());
        shift();
    }

    std::string describe_current() const {
        switch (cur_.kind) {
            case Tok::End: return " but reached end of input";
            case Tok::Bad: return "";
            default: return " but found '" + cur_.text + "'";
        }
    }

    bool parse_fact(Fact& f) {
        try {
            f.span = cur_.span;
            if (cur_.kind != Tok::Atom) fail("expected a predicate name" + describe_current());
            f.predicate = cur_.text;
            shift();
            if (cur_.kind == Tok::LParen) {
                shift();
                f.args.push_back(parse_term(0));
                while (cur_.kind == Tok::Comma) {
                    shift();
                    f.args.push_back(parse_term(0));
                }
                expect(Tok::RParen, "',' or ')'");
            }
            if (cur_.kind != Tok::Period) fail("expected '.' after fact" + describe_current());
            f.span.end = cur_.span.end;
            shift();
            return true;
        } catch (const SyntaxError&) {
            return false;
        }
    }

    FactTerm parse_term(int depth) {
        FactTerm t;
        t.span = cur_.span;
        switch (cur_.kind) {
            case Tok::Atom:
                t.value = FactTerm::Atom{cur_.text};
                shift();
                return t;
            case Tok::Integer: {
                long long v = 0;
                for (char d : cur_.text) {
                    const int digit = d - '0';
                    if (v > (std::numeric_limits<long long>::max() - digit) / 10) fail("integer out of range");
                    v = v * 10 + digit;
                }
                t.value = FactTerm::Integer{v};
                shift();
                return t;
            }
            case Tok::Quoted:
                t.value = FactTerm::Quoted{cur_.text};
                shift();
                return t;
            case Tok::LBracket: {
                if (depth >= kMaxListDepth) fail("lists nested too deeply");
                shift();
                FactTerm::List list;
                if (cur_.kind != Tok::RBracket) {
                    list.items.push_back(parse_term(depth + 1));
                    while (cur_.kind == Tok::Comma) {
                        shift();
                        list.items.push_back(parse_term(depth + 1));
                    }
                }
                t.span.end = cur_.span.end;
                expect(Tok::RBracket, "',' or ']'");
                t.value = std::move(list);
                return t;
            }
            default:
                fail("expected a term" + describe_current());
        }
    }

    // Skip past the next period (or to end of input).
    void recover() {
        while (cur_.kind != Tok::End && cur_.kind != Tok::Period) shift();
        if (cur_.kind == Tok::Period) shift();
    }

    Lexer lex_;
    std::vector<Diagnostic>& diags_;
    Token cur_;
};

}  // namespace

std::vector<Fact> read_facts(std::string_view text, std::vector<Diagnostic>& diags) {
    return FactParser(text, diags).run();
}

}  // namespace safpat
