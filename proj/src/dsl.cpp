#include "iai/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

namespace iai::dsl {

bool ParseResult::has_errors() const {
    return std::ranges::any_of(diagnostics, [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

enum class Tok { Ident, String, Int, LBrace, RBrace, Colon, Arrow, Equals, Invalid, End };

struct Token {
    Tok kind;
    std::string text;  // identifier/int text, or the unescaped string value
    SourceSpan span;
    // Lexical error, reported only if the parser actually stops at this token.
    std::optional<Diagnostic> problem = std::nullopt;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", here(0)});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    SourceSpan here(std::size_t length) const { return {line_, col_, length}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    Token next() {
        const SourceSpan start = here(1);
        const char c = src_[pos_];
        auto single = [&](Tok kind) {
            advance();
            return Token{kind, std::string(1, c), start};
        };
        switch (c) {
            case '{': return single(Tok::LBrace);
            case '}': return single(Tok::RBrace);
            case ':': return single(Tok::Colon);
            case '=': return single(Tok::Equals);
            case '"': return string_literal();
            default: break;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            advance();
            advance();
            return {Tok::Arrow, "->", {start.line, start.column, 2}};
        }
        const std::size_t begin = pos_;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            advance();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
            return {Tok::Int, std::string(src_.substr(begin, pos_ - begin)), {start.line, start.column, pos_ - begin}};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                advance();
            }
            return {Tok::Ident, std::string(src_.substr(begin, pos_ - begin)),
                    {start.line, start.column, pos_ - begin}};
        }
        // Swallow one UTF-8 sequence so the column stays on a character boundary.
        advance();
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
        std::string bad(src_.substr(begin, pos_ - begin));
        return {Tok::Invalid, bad, start, Diagnostic{Severity::Error, "unexpected character '" + bad + "'", start}};
    }

    Token string_literal() {
        const SourceSpan start = here(1);
        const std::size_t begin = pos_;
        advance();  // opening quote
        std::string value;
        std::optional<Diagnostic> bad_escape;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '"') {
                advance();
                return {bad_escape ? Tok::Invalid : Tok::String, value, {start.line, start.column, pos_ - begin},
                        bad_escape};
            }
            if (c == '\n') break;
            if (c == '\\' && pos_ + 1 < src_.size()) {
                advance();
                const char esc = src_[pos_];
                switch (esc) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    default:
                        if (!bad_escape) {
                            bad_escape = Diagnostic{Severity::Error, std::string("unknown escape '\\") + esc + "'", here(1)};
                        }
                        value += esc;
                }
                advance();
                continue;
            }
            value += c;
            advance();
        }
        return {Tok::Invalid, value, start,
                Diagnostic{Severity::Error, "unterminated string", {start.line, start.column, pos_ - begin}}};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

struct BlockError {};

class Parser {
public:
    Parser(std::vector<Token> tokens, ParseResult& result) : toks_(std::move(tokens)), result_(result) {}

    void run() {
        while (peek().kind != Tok::End) {
            if (peek().kind == Tok::Ident && peek().text == "workflow") {
                block();
            } else {
                const Token& t = take();
                error_at(t, "expected 'workflow', found '" + t.text + "'");
                while (peek().kind != Tok::End && !(peek().kind == Tok::Ident && peek().text == "workflow")) take();
            }
        }
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::End) ++pos_;
        return t;
    }

    void error(std::string msg, SourceSpan span) { result_.diagnostics.push_back({Severity::Error, std::move(msg), span}); }

    [[noreturn]] void fail(std::string msg, SourceSpan span) {
        error(std::move(msg), span);
        throw BlockError{};
    }

    // A token the lexer already rejected is reported with the lexer's message.
    void error_at(const Token& t, std::string msg) {
        if (t.problem) {
            result_.diagnostics.push_back(*t.problem);
        } else {
            error(std::move(msg), t.span);
        }
    }

    [[noreturn]] void fail_at(const Token& t, std::string msg) {
        error_at(t, std::move(msg));
        throw BlockError{};
    }

    const Token& expect(Tok kind, std::string_view what) {
        if (peek().kind != kind) {
            const Token& t = peek();
            fail_at(t, "expected " + std::string(what) + ", found " + describe(t));
        }
        return take();
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return "end of input";
        if (t.kind == Tok::String) return "string";
        return "'" + t.text + "'";
    }

    /// Skips to the token after the `}` closing the current block.
    void recover(int depth) {
        while (peek().kind != Tok::End) {
            const Token& t = take();
            if (t.kind == Tok::LBrace) ++depth;
            if (t.kind == Tok::RBrace && --depth <= 0) return;
            if (depth <= 0 && peek().kind == Tok::Ident && peek().text == "workflow") return;
        }
    }

    void block() {
        const std::size_t errors_before = result_.diagnostics.size();
        const Token& kw = take();
        int depth = 0;
        try {
            const Token& name = expect(Tok::String, "workflow name string");
            if (name.text.empty()) fail("workflow name must be non-empty", name.span);
            expect(Tok::LBrace, "'{'");
            depth = 1;

            std::map<std::string, std::string> meta;
            std::vector<EdgeSpec> steps;
            std::optional<SourceSpan> first_step;
            bool declared_artifact = false;

            while (peek().kind != Tok::RBrace) {
                const Token& t = peek();
                if (t.kind == Tok::End) fail("unterminated workflow block", kw.span);
                if (t.kind == Tok::Ident && t.text == "meta") {
                    take();
                    const Token& key = expect(Tok::Ident, "meta key");
                    expect(Tok::Equals, "'='");
                    const Token& value = expect(Tok::String, "meta value string");
                    if (!meta.emplace(key.text, value.text).second) {
                        error("duplicate meta key '" + key.text + "'", key.span);
                    }
                } else if (t.kind == Tok::Ident && t.text == "resources") {
                    take();
                    const Token& what = expect(Tok::Ident, "'artifact'");
                    if (what.text != "artifact") fail("expected 'artifact', found '" + what.text + "'", what.span);
                    declared_artifact = true;
                } else if (t.kind == Tok::Int) {
                    if (!first_step) first_step = t.span;
                    steps.push_back(step());
                } else {
                    fail_at(t, "expected 'meta', 'resources' or a step, found " + describe(t));
                }
            }
            take();  // '}'
            depth = 0;

            if (steps.empty()) fail("workflow '" + name.text + "' has no steps", name.span);
            if (result_.diagnostics.size() > errors_before) return;

            bool exo = declared_artifact;
            if (!declared_artifact) {
                auto first_a = std::ranges::find_if(
                    steps, [](const EdgeSpec& s) { return s.source == Entity::A || s.target == Entity::A; });
                if (first_a != steps.end()) {
                    // Steps are inferred in seq order, like the graph will be.
                    std::vector<EdgeSpec> sorted = steps;
                    std::ranges::stable_sort(sorted, {}, &EdgeSpec::seq);
                    auto a = std::ranges::find_if(
                        sorted, [](const EdgeSpec& s) { return s.source == Entity::A || s.target == Entity::A; });
                    exo = !(a->source == Entity::G && a->target == Entity::A);
                    result_.diagnostics.push_back({Severity::Info,
                                                   "workflow '" + name.text + "': exogenous artifact inferred as " +
                                                       (exo ? "true" : "false"),
                                                   *first_step});
                }
            }
            result_.records.emplace_back(name.text, build_graph(steps, exo), std::move(meta));
        } catch (const BlockError&) {
            recover(depth);
        }
    }

    EdgeSpec step() {
        const Token& num = take();
        int seq = 0;
        const auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), seq);
        if (ec != std::errc{} || ptr != num.text.data() + num.text.size()) {
            fail("invalid step index '" + num.text + "'", num.span);
        }
        if (seq < 1) fail("step index must be >= 1, found " + num.text, num.span);
        expect(Tok::Colon, "':'");
        const Entity src = entity();
        expect(Tok::Arrow, "'->'");
        const Entity dst = entity();
        std::string note;
        if (peek().kind == Tok::String) note = take().text;
        return {src, dst, seq, std::move(note)};
    }

    Entity entity() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail_at(t, "expected entity, found " + describe(t));
        take();
        if (auto e = parse_entity(t.text)) return *e;
        fail("unknown entity '" + t.text + "'", t.span);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    ParseResult& result_;
};

}  // namespace

ParseResult parse_workflow(std::string_view text) {
    ParseResult result;
    Parser(Lexer(text).run(), result).run();
    std::ranges::stable_sort(result.diagnostics, [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.span.line, a.span.column) < std::tie(b.span.line, b.span.column);
    });
    return result;
}

std::string quote(std::string_view raw) {
    std::string out = "\"";
    for (char c : raw) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string serialize_workflow(const std::vector<WorkflowRecord>& records) {
    std::string out;
    for (const WorkflowRecord& r : records) {
        if (!out.empty()) out += '\n';
        out += "workflow " + quote(r.name) + " {\n";
        for (const auto& [key, value] : r.metadata) out += "  meta " + key + " = " + quote(value) + "\n";
        if (r.graph.exogenous_artifact()) out += "  resources artifact\n";
        const ParadigmGraph g = normalize_sequences(r.graph);
        for (const Edge& e : g.edges()) {
            out += "  " + std::to_string(e.seq) + ": " + std::string(to_string(e.source())) + " -> " +
                   std::string(to_string(e.target()));
            if (!e.note.empty()) out += " " + quote(e.note);
            out += '\n';
        }
        out += "}\n";
    }
    return out;
}

std::string format_diagnostic(std::string_view file, const Diagnostic& d) {
    return std::string(file) + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " +
           std::string(to_string(d.severity)) + ": " + d.message;
}

}  // namespace iai::dsl
