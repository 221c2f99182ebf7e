#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "entrex/core/io.hpp"

namespace entrex::rdf {

struct Literal {
    std::string lexical;   // escape sequences resolved
    std::string lang;      // lowercase tag, empty when absent
    std::string datatype;  // IRI, empty when absent; never set together with lang

    bool operator==(const Literal&) const = default;
};

// One parsed statement. IRIs are stored without angle brackets; blank nodes
// keep their `_:` prefix and occupy the same slots as IRIs.
struct Quad {
    std::string subject;
    std::string predicate;
    bool object_is_iri = true;
    std::string object_iri;
    Literal object_literal;
    std::string graph;  // empty = default graph

    bool operator==(const Quad&) const = default;
};

enum class ParseErrorKind { MalformedIri, UnterminatedLiteral, MissingTerminator, BadEscape };

constexpr std::array<const char*, 4> kParseErrorNames = {"MalformedIri", "UnterminatedLiteral",
                                                         "MissingTerminator", "BadEscape"};

struct ParseError {
    ParseErrorKind kind = ParseErrorKind::MalformedIri;
    size_t offset = 0;  // byte offset of the fault within the line
};

struct ParseOutcome {
    enum class Kind { QuadLine, BlankLine, ErrorLine } kind = Kind::BlankLine;
    Quad quad;
    ParseError error;
};

// Parses one physical N-Triples / N-Quads line. Never throws.
ParseOutcome parse_line(std::string_view line);

// Canonical N-Quads serialization (no trailing newline).
std::string to_nquads(const Quad& q);

struct IngestReport {
    uint64_t lines_total = 0;
    uint64_t quads_ok = 0;
    std::array<uint64_t, 4> skipped_by_kind = {0, 0, 0, 0};

    uint64_t lines_skipped() const {
        uint64_t s = 0;
        for (auto v : skipped_by_kind) s += v;
        return s;
    }
};

// Lazy quad stream over a (possibly gzipped) file. In tolerant mode
// malformed lines are counted and skipped; in strict mode the first error
// throws InputParseError.
class QuadStream {
public:
    QuadStream(const std::filesystem::path& path, bool strict = false);

    std::optional<Quad> next();
    const IngestReport& report() const { return report_; }

private:
    LineReader reader_;
    bool strict_;
    uint64_t line_no_ = 0;
    IngestReport report_;
    std::string path_;
};

}  // namespace entrex::rdf
