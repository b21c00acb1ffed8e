#pragma once

#include <string>
#include <vector>

#include "iai/catalog.hpp"
#include "iai/match.hpp"

namespace iai {

struct EnumerationBounds {
    int max_edges = 8;
    bool include_prompt_only = true;      // exogenous_artifact = false
    bool include_artifact_grounded = true;  // exogenous_artifact = true
};

/// Throws Error when max_edges < 2 or no exogenous option is selected.
void check_bounds(const EnumerationBounds& bounds);

/// Every canonical form reachable by a graph that uses each whitelisted
/// relation at most once, has at most max_edges edges and passes atomic
/// validation under some listing order. Sorted by CanonicalForm order.
///
/// Depth-first over listing orders with activation pruning, memoised on
/// (relations used, aftermath relations, invocation-group state, flag).
std::vector<CanonicalForm> enumerate_atomic(const EnumerationBounds& bounds = {});

/// Largest max_edges the brute-force oracle accepts.
inline constexpr int kOracleCeiling = 8;

/// Brute force: every relation subset, every listing order, every sequence
/// assignment that can change the outcome, run through validate() and
/// canonical_form(). Throws Error above kOracleCeiling.
///
/// Only the extent of the invocation group matters to validity and phases
/// (the validator reads listing order and invocation seqs, phases read
/// position relative to the group), so each order is tried with the group
/// ending at every position from its last G-bound edge to the end, and all
/// other steps kept singletons.
std::vector<CanonicalForm> oracle_enumerate(const EnumerationBounds& bounds);

struct KnownForm {
    CanonicalForm form;
    std::string paradigm;
};

struct NovelForm {
    CanonicalForm form;
    std::string nearest;
    std::size_t distance = 0;
};

struct NoveltyReport {
    std::vector<KnownForm> known;  // catalog order
    std::vector<NovelForm> novel;  // CanonicalForm order
};

NoveltyReport novelty_report(const std::vector<CanonicalForm>& space, const Catalog& catalog);

}  // namespace iai
