#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iai {

/// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GraphError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

/// The six node kinds of the model. Each kind is a singleton within a graph.
enum class Entity : std::uint8_t { H, T, I, Aug, A, G };

inline constexpr std::size_t kEntityCount = 6;
inline constexpr std::array<Entity, kEntityCount> kAllEntities = {
    Entity::H, Entity::T, Entity::I, Entity::Aug, Entity::A, Entity::G};

std::string_view to_string(Entity e);
std::string_view long_name(Entity e);
std::optional<Entity> parse_entity(std::string_view token);

constexpr std::size_t index_of(Entity e) { return static_cast<std::size_t>(e); }

/// Small value set over the six entity kinds.
class EntitySet {
public:
    constexpr EntitySet() = default;
    constexpr EntitySet(std::initializer_list<Entity> entities) {
        for (Entity e : entities) insert(e);
    }

    constexpr bool contains(Entity e) const { return (bits_ >> index_of(e)) & 1U; }
    constexpr void insert(Entity e) { bits_ |= static_cast<std::uint8_t>(1U << index_of(e)); }
    constexpr void erase(Entity e) { bits_ &= static_cast<std::uint8_t>(~(1U << index_of(e))); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint8_t bits() const { return bits_; }
    std::size_t size() const;
    std::vector<Entity> members() const;

    friend constexpr bool operator==(EntitySet, EntitySet) = default;

private:
    std::uint8_t bits_ = 0;
};

/// Renders as `{T,A}` in entity order.
std::string to_string(EntitySet s);

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

/// Any ordered pair of entities. Edges carry one of these so that illegal
/// relations remain representable until the validator reports them.
struct EntityPair {
    Entity source = Entity::H;
    Entity target = Entity::T;

    friend constexpr auto operator<=>(const EntityPair&, const EntityPair&) = default;
};

std::string to_string(EntityPair p);

/// A member of the 12-relation whitelist. Only constructible through make().
class RelationKind {
public:
    static std::optional<RelationKind> make(Entity source, Entity target);
    static std::optional<RelationKind> make(EntityPair pair) { return make(pair.source, pair.target); }

    /// Position in kWhitelist (0..11).
    std::size_t index() const { return index_; }
    EntityPair pair() const;
    Entity source() const { return pair().source; }
    Entity target() const { return pair().target; }

    friend auto operator<=>(const RelationKind&, const RelationKind&) = default;

private:
    explicit RelationKind(std::size_t index) : index_(index) {}
    std::size_t index_;
};

inline constexpr std::size_t kRelationCount = 12;

/// Whitelist in a fixed order (the order used everywhere a relation index is needed).
inline constexpr std::array<EntityPair, kRelationCount> kWhitelist = {{
    {Entity::H, Entity::T},   {Entity::H, Entity::I},  {Entity::T, Entity::Aug},
    {Entity::T, Entity::G},   {Entity::I, Entity::Aug}, {Entity::I, Entity::T},
    {Entity::I, Entity::A},   {Entity::Aug, Entity::G}, {Entity::A, Entity::Aug},
    {Entity::A, Entity::G},   {Entity::G, Entity::A},  {Entity::G, Entity::I},
}};

std::optional<std::size_t> whitelist_index(EntityPair pair);
bool is_whitelisted(EntityPair pair);

/// Why a non-whitelisted pair is excluded. The nine pairs the model argues
/// against carry their own rationale; everything else gets a generic one.
std::string_view exclusion_rationale(EntityPair pair);
bool has_explicit_rationale(EntityPair pair);

/// True for the whitelisted relations that hand input to G.
bool is_invocation(EntityPair pair);

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

struct Edge {
    EntityPair relation;
    int seq = 1;
    std::string note;

    Entity source() const { return relation.source; }
    Entity target() const { return relation.target; }
    bool touches(Entity e) const { return relation.source == e || relation.target == e; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Input row for build_graph.
struct EdgeSpec {
    Entity source;
    Entity target;
    int seq;
    std::string note = {};
};

/// Sequence-ordered edge list plus the exogenous-artifact flag.
///
/// Edges are kept sorted by (seq, listing order). Within one seq the listing
/// order is the causal order of the concurrent relations.
class ParadigmGraph {
public:
    /// Stable-sorts by seq. Throws GraphError on an empty list or seq < 1.
    ParadigmGraph(std::vector<Edge> edges, bool exogenous_artifact);

    std::span<const Edge> edges() const { return edges_; }
    std::size_t size() const { return edges_.size(); }
    const Edge& operator[](std::size_t i) const { return edges_[i]; }
    bool exogenous_artifact() const { return exogenous_; }

    /// Entities that appear on at least one edge.
    EntitySet entities() const;
    bool contains(EntityPair relation) const;
    int max_seq() const { return edges_.back().seq; }

    friend bool operator==(const ParadigmGraph&, const ParadigmGraph&) = default;

private:
    std::vector<Edge> edges_;
    bool exogenous_;
};

ParadigmGraph build_graph(std::span<const EdgeSpec> edges, bool exogenous_artifact);
ParadigmGraph build_graph(std::initializer_list<EdgeSpec> edges, bool exogenous_artifact);

/// Compresses seqs to 1..k, keeping order and concurrency groups.
ParadigmGraph normalize_sequences(const ParadigmGraph& g);

/// Collapses back-to-back repeats of identical step blocks to one block.
ParadigmGraph elide_iterations(const ParadigmGraph& g);

/// Named graph with free-form metadata (tool, source, expected, ...).
struct WorkflowRecord {
    std::string name;
    ParadigmGraph graph;
    std::map<std::string, std::string> metadata;

    WorkflowRecord(std::string name, ParadigmGraph graph, std::map<std::string, std::string> metadata = {});

    friend bool operator==(const WorkflowRecord&, const WorkflowRecord&) = default;
};

/// Compact one-line rendering, `H->T@1; H->I@2; ...`.
std::string to_string(const ParadigmGraph& g);

}  // namespace iai
