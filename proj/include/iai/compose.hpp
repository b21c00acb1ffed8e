#pragma once

#include <span>
#include <string>
#include <variant>

#include "iai/core.hpp"
#include "iai/validate.hpp"

namespace iai {

class ComposeError : public Error {
public:
    using Error::Error;
};

/// Sequential composition of `a` then `b`.
///
/// `a` must pass workflow validation and `b` atomic validation. A prompt left
/// pending at the end of `a` (activated after its last use) is handed over,
/// so b's opening H->T is dropped. If b works on an existing artifact, `a`
/// must have produced one by its end; b then inherits it instead of
/// declaring it exogenous. The result keeps a's flag and records the
/// handed-over entities under the "handoff" metadata key.
WorkflowRecord chain(const ParadigmGraph& a, const ParadigmGraph& b, std::string name = "chain");

/// Entities chain(a, b) would hand over. Throws like chain.
EntitySet handoff(const ParadigmGraph& a, const ParadigmGraph& b);

struct AddEdge {
    EntityPair relation;
    /// Joins this seq group, after the edges already in it.
    int seq = 1;
};

struct RemoveEdge {
    EntityPair relation;
};

struct SetExogenous {
    bool value = false;
};

using EditOp = std::variant<AddEdge, RemoveEdge, SetExogenous>;

std::string to_string(const EditOp& op);

struct EditResult {
    ParadigmGraph graph;
    /// Fresh atomic report on the edited graph, plus E1 warnings for no-op removals.
    ValidationReport report;
};

/// Applies the ops in order. Seqs are not normalized. Removing an absent
/// relation is a no-op with a warning; removing the last edge throws.
EditResult apply_edit(const ParadigmGraph& g, const EditOp& op);
EditResult apply_edits(const ParadigmGraph& g, std::span<const EditOp> ops);

}  // namespace iai
