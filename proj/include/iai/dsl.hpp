#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iai/core.hpp"
#include "iai/validate.hpp"

namespace iai::dsl {

/// Position of a token in the source text. Line and column are 1-based.
struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    SourceSpan span;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseResult {
    std::vector<WorkflowRecord> records;
    std::vector<Diagnostic> diagnostics;

    bool has_errors() const;
};

/// Parses `.iai` text. Never throws on malformed input: every problem is a
/// diagnostic, and an error inside a `workflow` block drops only that block.
///
///     workflow "DirectGPT edit" {
///       meta tool = "DirectGPT"
///       resources artifact
///       1: H -> T "types edit request"
///       2: H -> I
///     }
///
/// Without `resources artifact` the exogenous flag is inferred: true iff the
/// first A-incident edge is something other than G->A.
ParseResult parse_workflow(std::string_view text);

/// Canonical rendering: metadata sorted by key, seqs normalized, one step
/// per line, LF line endings.
std::string serialize_workflow(const std::vector<WorkflowRecord>& records);

/// Escapes `"`, `\` and newlines for a double-quoted string.
std::string quote(std::string_view raw);

std::string format_diagnostic(std::string_view file, const Diagnostic& d);

}  // namespace iai::dsl
