#include "entrex/rdf/ntriples.hpp"

#include <cctype>

#include "entrex/core/text.hpp"

namespace entrex::rdf {

namespace {

struct Cursor {
    std::string_view s;
    size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
};

struct Term {
    enum class Kind { Iri, Blank, Literal } kind = Kind::Iri;
    std::string value;  // IRI (bare) or blank node label (with _:)
    Literal literal;
};

struct Fail {
    ParseError err;
};

using TermResult = std::pair<std::optional<Term>, ParseError>;

bool parse_hex_escape(Cursor& c, size_t digits, uint32_t& cp) {
    cp = 0;
    for (size_t i = 0; i < digits; ++i) {
        if (c.done() || !std::isxdigit(static_cast<unsigned char>(c.peek()))) return false;
        const char h = c.peek();
        cp = cp * 16 + static_cast<uint32_t>(h <= '9' ? h - '0' : (h | 0x20) - 'a' + 10);
        ++c.pos;
    }
    return true;
}

// IRIREF: <...>. Rejects whitespace and control characters inside; decodes
// \uXXXX / \UXXXXXXXX escapes.
TermResult parse_iri(Cursor& c) {
    const size_t start = c.pos;
    ++c.pos;  // consume '<'
    std::string out;
    while (true) {
        if (c.done()) return {std::nullopt, {ParseErrorKind::MalformedIri, start}};
        const char ch = c.peek();
        if (ch == '>') {
            ++c.pos;
            if (out.empty()) return {std::nullopt, {ParseErrorKind::MalformedIri, start}};
            Term t;
            t.kind = Term::Kind::Iri;
            t.value = std::move(out);
            return {t, {}};
        }
        if (ch == '\\') {
            const size_t esc_start = c.pos;
            ++c.pos;
            if (c.done()) return {std::nullopt, {ParseErrorKind::BadEscape, esc_start}};
            const char e = c.peek();
            ++c.pos;
            uint32_t cp = 0;
            if (e == 'u' && parse_hex_escape(c, 4, cp)) {
                utf8_append(out, cp);
            } else if (e == 'U' && parse_hex_escape(c, 8, cp)) {
                utf8_append(out, cp);
            } else {
                return {std::nullopt, {ParseErrorKind::BadEscape, esc_start}};
            }
            continue;
        }
        if (static_cast<unsigned char>(ch) <= 0x20 || ch == '<' || ch == '"')
            return {std::nullopt, {ParseErrorKind::MalformedIri, c.pos}};
        out.push_back(ch);
        ++c.pos;
    }
}

TermResult parse_blank(Cursor& c) {
    const size_t start = c.pos;
    c.pos += 2;  // consume "_:"
    std::string label = "_:";
    while (!c.done()) {
        const char ch = c.peek();
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.') {
            label.push_back(ch);
            ++c.pos;
        } else {
            break;
        }
    }
    if (label.size() == 2) return {std::nullopt, {ParseErrorKind::MalformedIri, start}};
    // A trailing '.' belongs to the statement terminator, not the label.
    while (label.size() > 2 && label.back() == '.') {
        label.pop_back();
        --c.pos;
    }
    Term t;
    t.kind = Term::Kind::Blank;
    t.value = std::move(label);
    return {t, {}};
}

TermResult parse_literal(Cursor& c) {
    const size_t start = c.pos;
    ++c.pos;  // consume '"'
    std::string out;
    while (true) {
        if (c.done()) return {std::nullopt, {ParseErrorKind::UnterminatedLiteral, start}};
        const char ch = c.peek();
        if (ch == '"') {
            ++c.pos;
            break;
        }
        if (ch == '\\') {
            const size_t esc_start = c.pos;
            ++c.pos;
            if (c.done()) return {std::nullopt, {ParseErrorKind::BadEscape, esc_start}};
            const char e = c.peek();
            ++c.pos;
            switch (e) {
                case 't': out.push_back('\t'); break;
                case 'b': out.push_back('\b'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 'f': out.push_back('\f'); break;
                case '"': out.push_back('"'); break;
                case '\'': out.push_back('\''); break;
                case '\\': out.push_back('\\'); break;
                case 'u': {
                    uint32_t cp = 0;
                    if (!parse_hex_escape(c, 4, cp))
                        return {std::nullopt, {ParseErrorKind::BadEscape, esc_start}};
                    utf8_append(out, cp);
                    break;
                }
                case 'U': {
                    uint32_t cp = 0;
                    if (!parse_hex_escape(c, 8, cp))
                        return {std::nullopt, {ParseErrorKind::BadEscape, esc_start}};
                    utf8_append(out, cp);
                    break;
                }
                default: return {std::nullopt, {ParseErrorKind::BadEscape, esc_start}};
            }
            continue;
        }
        out.push_back(ch);
        ++c.pos;
    }
    Term t;
    t.kind = Term::Kind::Literal;
    t.literal.lexical = std::move(out);
    if (!c.done() && c.peek() == '@') {
        ++c.pos;
        std::string tag;
        while (!c.done()) {
            const char ch = c.peek();
            if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-') {
                tag.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
                ++c.pos;
            } else {
                break;
            }
        }
        if (tag.empty()) return {std::nullopt, {ParseErrorKind::BadEscape, c.pos}};
        t.literal.lang = std::move(tag);
    } else if (c.pos + 1 < c.s.size() && c.peek() == '^' && c.s[c.pos + 1] == '^') {
        c.pos += 2;
        if (c.done() || c.peek() != '<')
            return {std::nullopt, {ParseErrorKind::MalformedIri, c.pos}};
        auto [dt, err] = parse_iri(c);
        if (!dt) return {std::nullopt, err};
        t.literal.datatype = std::move(dt->value);
    }
    return {t, {}};
}

TermResult parse_term(Cursor& c, bool literal_ok) {
    if (c.done()) return {std::nullopt, {ParseErrorKind::MissingTerminator, c.pos}};
    const char ch = c.peek();
    if (ch == '<') return parse_iri(c);
    if (ch == '_' && c.pos + 1 < c.s.size() && c.s[c.pos + 1] == ':') return parse_blank(c);
    if (ch == '"' && literal_ok) return parse_literal(c);
    return {std::nullopt, {ParseErrorKind::MalformedIri, c.pos}};
}

void escape_literal(const std::string& in, std::string& out) {
    for (const unsigned char ch : in) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (ch < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04X", ch);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(ch));
                }
        }
    }
}

void append_node(const std::string& node, std::string& out) {
    if (node.rfind("_:", 0) == 0) {
        out += node;
    } else {
        out.push_back('<');
        out += node;
        out.push_back('>');
    }
}

}  // namespace

ParseOutcome parse_line(std::string_view line) {
    ParseOutcome outcome;
    Cursor c{line, 0};
    c.skip_ws();
    if (c.done() || c.peek() == '#') {
        outcome.kind = ParseOutcome::Kind::BlankLine;
        return outcome;
    }

    auto fail = [&](ParseError e) {
        outcome.kind = ParseOutcome::Kind::ErrorLine;
        outcome.error = e;
        return outcome;
    };

    auto [subj, e1] = parse_term(c, /*literal_ok=*/false);
    if (!subj) return fail(e1);
    c.skip_ws();

    if (c.done() || c.peek() != '<') return fail({ParseErrorKind::MalformedIri, c.pos});
    auto [pred, e2] = parse_iri(c);
    if (!pred) return fail(e2);
    c.skip_ws();

    auto [obj, e3] = parse_term(c, /*literal_ok=*/true);
    if (!obj) return fail(e3);
    c.skip_ws();

    std::optional<Term> graph;
    if (!c.done() && c.peek() != '.') {
        auto [g, e4] = parse_term(c, /*literal_ok=*/false);
        if (!g) return fail(e4);
        graph = std::move(g);
        c.skip_ws();
    }

    if (c.done() || c.peek() != '.') return fail({ParseErrorKind::MissingTerminator, c.pos});
    ++c.pos;
    c.skip_ws();
    if (!c.done() && c.peek() != '#') return fail({ParseErrorKind::MissingTerminator, c.pos});

    outcome.kind = ParseOutcome::Kind::QuadLine;
    Quad& q = outcome.quad;
    q.subject = std::move(subj->value);
    q.predicate = std::move(pred->value);
    if (obj->kind == Term::Kind::Literal) {
        q.object_is_iri = false;
        q.object_literal = std::move(obj->literal);
    } else {
        q.object_is_iri = true;
        q.object_iri = std::move(obj->value);
    }
    if (graph) q.graph = std::move(graph->value);
    return outcome;
}

std::string to_nquads(const Quad& q) {
    std::string out;
    append_node(q.subject, out);
    out.push_back(' ');
    out.push_back('<');
    out += q.predicate;
    out.push_back('>');
    out.push_back(' ');
    if (q.object_is_iri) {
        append_node(q.object_iri, out);
    } else {
        out.push_back('"');
        escape_literal(q.object_literal.lexical, out);
        out.push_back('"');
        if (!q.object_literal.lang.empty()) {
            out.push_back('@');
            out += q.object_literal.lang;
        } else if (!q.object_literal.datatype.empty()) {
            out += "^^<";
            out += q.object_literal.datatype;
            out.push_back('>');
        }
    }
    if (!q.graph.empty()) {
        out.push_back(' ');
        append_node(q.graph, out);
    }
    out += " .";
    return out;
}

QuadStream::QuadStream(const std::filesystem::path& path, bool strict)
    : reader_(path), strict_(strict), path_(path.string()) {}

std::optional<Quad> QuadStream::next() {
    std::string line;
    while (reader_.next(line)) {
        ++line_no_;
        ++report_.lines_total;
        ParseOutcome out = parse_line(line);
        switch (out.kind) {
            case ParseOutcome::Kind::QuadLine:
                ++report_.quads_ok;
                return std::move(out.quad);
            case ParseOutcome::Kind::BlankLine: break;
            case ParseOutcome::Kind::ErrorLine:
                if (strict_)
                    throw InputParseError(
                        path_ + ":" + std::to_string(line_no_) + ":" +
                        std::to_string(out.error.offset) + ": " +
                        kParseErrorNames[static_cast<size_t>(out.error.kind)]);
                ++report_.skipped_by_kind[static_cast<size_t>(out.error.kind)];
                break;
        }
    }
    return std::nullopt;
}

}  // namespace entrex::rdf
