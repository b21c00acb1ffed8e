#pragma once

#include <compare>
#include <string>
#include <vector>

#include "iai/catalog.hpp"
#include "iai/core.hpp"

namespace iai {

class MatchError : public Error {
public:
    using Error::Error;
};

class DecomposeError : public Error {
public:
    DecomposeError(const std::string& what, std::optional<std::size_t> edge = std::nullopt)
        : Error(what), edge_(edge) {}
    /// Offending edge position, when there is one.
    std::optional<std::size_t> edge() const { return edge_; }

private:
    std::optional<std::size_t> edge_;
};

/// Where an edge sits relative to the single invocation.
enum class Phase { Pre, Invoke, Aftermath };

std::string_view to_string(Phase p);

struct PhasedRelation {
    Phase phase;
    EntityPair relation;

    friend auto operator<=>(const PhasedRelation&, const PhasedRelation&) = default;
};

/// Order-independent identity of a single-invocation graph: the set of
/// (phase, relation) entries plus the exogenous flag. Sequence detail below
/// the phase split is deliberately forgotten.
struct CanonicalForm {
    bool exogenous_artifact = false;
    std::vector<PhasedRelation> entries;  // sorted, unique

    std::size_t edge_count() const { return entries.size(); }

    friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
    /// Orders by edge count, then entries, then the flag.
    friend std::strong_ordering operator<=>(const CanonicalForm& a, const CanonicalForm& b);
};

/// `exo pre{H->T} invoke{T->G} after{G->A}`
std::string to_string(const CanonicalForm& f);

/// Throws MatchError("decompose first") unless g has exactly one invocation.
CanonicalForm canonical_form(const ParadigmGraph& g);

bool graphs_equal(const ParadigmGraph& a, const ParadigmGraph& b);

/// Size of the symmetric difference of entries, plus one if the flags differ.
std::size_t edit_distance(const CanonicalForm& a, const CanonicalForm& b);
std::size_t edit_distance(const ParadigmGraph& a, const ParadigmGraph& b);

struct Segment {
    ParadigmGraph graph;
    /// Entities handed over from earlier segments and used without being introduced.
    EntitySet carried;
};

/// Splits a workflow into one single-invocation segment per invocation.
///
/// Edges before the first invocation belong to it. After invocation i, the
/// aftermath closure is grown from G's outputs: an edge joins while its source
/// is G or a fresh closure entity, or it feeds a fresh closure entity as H->x
/// or x->Aug. Concurrent edges are resolved together. The first step that does
/// not connect ends the closure, and the rest of the gap becomes the pre-phase
/// of invocation i+1. Everything after the last invocation belongs to it.
/// Throws DecomposeError when w has no invocation.
std::vector<Segment> decompose(const WorkflowRecord& w);

struct Classification {
    /// Matched paradigm id when distance == 0, otherwise the nearest entry.
    std::string paradigm;
    std::size_t distance = 0;
    std::size_t segment_index = 0;

    bool matched() const { return distance == 0; }
    friend bool operator==(const Classification&, const Classification&) = default;
};

std::string to_string(const Classification& c);

/// Form of a catalog entry as seen by a segment that carries `carried`: the
/// H->T introduction is dropped when T is carried, and a carried artifact
/// counts as exogenous.
CanonicalForm handoff_form(const CatalogEntry& entry, EntitySet carried);

/// Nearest catalog entry by edit_distance; ties go to the lowest id.
Classification classify_against_catalog(const ParadigmGraph& g, EntitySet carried, const Catalog& catalog);
Classification classify_against_catalog(const CanonicalForm& form, EntitySet carried, const Catalog& catalog);

}  // namespace iai
