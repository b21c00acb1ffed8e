#include "iai/core.hpp"

#include <algorithm>
#include <bit>

namespace iai {

std::string_view to_string(Entity e) {
    switch (e) {
        case Entity::H: return "H";
        case Entity::T: return "T";
        case Entity::I: return "I";
        case Entity::Aug: return "Aug";
        case Entity::A: return "A";
        case Entity::G: return "G";
    }
    return "?";
}

std::string_view long_name(Entity e) {
    switch (e) {
        case Entity::H: return "Human";
        case Entity::T: return "Text Prompt";
        case Entity::I: return "Interaction";
        case Entity::Aug: return "Augmented Instruction";
        case Entity::A: return "Artifact";
        case Entity::G: return "Generative AI";
    }
    return "?";
}

std::optional<Entity> parse_entity(std::string_view token) {
    for (Entity e : kAllEntities) {
        if (to_string(e) == token) return e;
    }
    return std::nullopt;
}

std::size_t EntitySet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Entity> EntitySet::members() const {
    std::vector<Entity> out;
    for (Entity e : kAllEntities) {
        if (contains(e)) out.push_back(e);
    }
    return out;
}

std::string to_string(EntitySet s) {
    std::string out = "{";
    bool first = true;
    for (Entity e : s.members()) {
        if (!first) out += ',';
        out += to_string(e);
        first = false;
    }
    out += '}';
    return out;
}

std::string to_string(EntityPair p) {
    std::string out(to_string(p.source));
    out += "->";
    out += to_string(p.target);
    return out;
}

std::optional<std::size_t> whitelist_index(EntityPair pair) {
    for (std::size_t i = 0; i < kWhitelist.size(); ++i) {
        if (kWhitelist[i] == pair) return i;
    }
    return std::nullopt;
}

bool is_whitelisted(EntityPair pair) { return whitelist_index(pair).has_value(); }

std::optional<RelationKind> RelationKind::make(Entity source, Entity target) {
    if (auto idx = whitelist_index({source, target})) return RelationKind(*idx);
    return std::nullopt;
}

EntityPair RelationKind::pair() const { return kWhitelist[index_]; }

namespace {

struct Exclusion {
    EntityPair pair;
    std::string_view rationale;
};

// The nine exclusions the model argues for explicitly.
constexpr std::array<Exclusion, 9> kExplicitExclusions = {{
    {{Entity::H, Entity::A},
     "upload or inspection is background behavior rather than a central comparative relation"},
    {{Entity::H, Entity::G}, "humans do not directly perform generation without going through instructions"},
    {{Entity::T, Entity::A}, "a text prompt does not act on artifacts directly; route it through G"},
    {{Entity::I, Entity::G},
     "interactions cannot evoke GenAI to generate by themselves: they are not generators but mediators of "
     "specificity"},
    {{Entity::Aug, Entity::A}, "Aug does not itself perform artifact edits; its only execution path is Aug->G"},
    {{Entity::A, Entity::T}, "artifacts are passive and do not autonomously produce text prompts"},
    {{Entity::A, Entity::I}, "artifacts are passive and do not initiate interactions"},
    {{Entity::G, Entity::Aug},
     "GenAI cannot directly produce Aug, which must embed user interaction-derived information"},
    {{Entity::G, Entity::T},
     "GenAI prompt suggestions become T only through explicit user interaction (G->I->T)"},
}};

}  // namespace

bool has_explicit_rationale(EntityPair pair) {
    return std::ranges::any_of(kExplicitExclusions, [&](const Exclusion& x) { return x.pair == pair; });
}

std::string_view exclusion_rationale(EntityPair pair) {
    if (pair.source == pair.target) return "self-relations are not defined by the model";
    for (const auto& x : kExplicitExclusions) {
        if (x.pair == pair) return x.rationale;
    }
    if (is_whitelisted(pair)) return "";
    return "relation not defined by the model";
}

bool is_invocation(EntityPair pair) {
    return pair.target == Entity::G &&
           (pair.source == Entity::T || pair.source == Entity::Aug || pair.source == Entity::A);
}

ParadigmGraph::ParadigmGraph(std::vector<Edge> edges, bool exogenous_artifact)
    : edges_(std::move(edges)), exogenous_(exogenous_artifact) {
    if (edges_.empty()) throw GraphError("graph must contain at least one edge");
    for (const Edge& e : edges_) {
        if (e.seq < 1) {
            throw GraphError("edge " + to_string(e.relation) + " has seq " + std::to_string(e.seq) +
                             "; seq must be >= 1");
        }
    }
    if (!std::ranges::is_sorted(edges_, {}, &Edge::seq)) std::ranges::stable_sort(edges_, {}, &Edge::seq);
}

EntitySet ParadigmGraph::entities() const {
    EntitySet s;
    for (const Edge& e : edges_) {
        s.insert(e.source());
        s.insert(e.target());
    }
    return s;
}

bool ParadigmGraph::contains(EntityPair relation) const {
    return std::ranges::any_of(edges_, [&](const Edge& e) { return e.relation == relation; });
}

ParadigmGraph build_graph(std::span<const EdgeSpec> edges, bool exogenous_artifact) {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const EdgeSpec& s : edges) out.push_back(Edge{{s.source, s.target}, s.seq, s.note});
    return ParadigmGraph(std::move(out), exogenous_artifact);
}

ParadigmGraph build_graph(std::initializer_list<EdgeSpec> edges, bool exogenous_artifact) {
    return build_graph(std::span<const EdgeSpec>(edges.begin(), edges.size()), exogenous_artifact);
}

ParadigmGraph normalize_sequences(const ParadigmGraph& g) {
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    int next = 0;
    int last = 0;
    for (Edge& e : edges) {
        if (next == 0 || e.seq != last) {
            ++next;
            last = e.seq;
        }
        e.seq = next;
    }
    return ParadigmGraph(std::move(edges), g.exogenous_artifact());
}

namespace {

using Step = std::vector<EntityPair>;

std::vector<std::vector<Edge>> group_by_seq(const ParadigmGraph& g) {
    std::vector<std::vector<Edge>> groups;
    for (const Edge& e : g.edges()) {
        if (groups.empty() || groups.back().front().seq != e.seq) groups.emplace_back();
        groups.back().push_back(e);
    }
    return groups;
}

Step step_pattern(const std::vector<Edge>& group) {
    Step s;
    for (const Edge& e : group) s.push_back(e.relation);
    return s;
}

}  // namespace

ParadigmGraph elide_iterations(const ParadigmGraph& g) {
    auto groups = group_by_seq(g);
    std::vector<Step> pattern;
    for (const auto& grp : groups) pattern.push_back(step_pattern(grp));

    // Shortest block first, leftmost first, until no adjacent repeat remains.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t len = 1; len * 2 <= pattern.size() && !changed; ++len) {
            for (std::size_t pos = 0; pos + 2 * len <= pattern.size(); ++pos) {
                if (std::equal(pattern.begin() + pos, pattern.begin() + pos + len, pattern.begin() + pos + len)) {
                    auto first = static_cast<std::ptrdiff_t>(pos + len);
                    auto last = static_cast<std::ptrdiff_t>(pos + 2 * len);
                    pattern.erase(pattern.begin() + first, pattern.begin() + last);
                    groups.erase(groups.begin() + first, groups.begin() + last);
                    changed = true;
                    break;
                }
            }
        }
    }

    std::vector<Edge> edges;
    int seq = 0;
    for (auto& grp : groups) {
        ++seq;
        for (Edge& e : grp) {
            e.seq = seq;
            edges.push_back(std::move(e));
        }
    }
    return ParadigmGraph(std::move(edges), g.exogenous_artifact());
}

WorkflowRecord::WorkflowRecord(std::string name_, ParadigmGraph graph_, std::map<std::string, std::string> metadata_)
    : name(std::move(name_)), graph(std::move(graph_)), metadata(std::move(metadata_)) {
    if (name.empty()) throw GraphError("workflow record name must be non-empty");
}

std::string to_string(const ParadigmGraph& g) {
    std::string out;
    for (const Edge& e : g.edges()) {
        if (!out.empty()) out += "; ";
        out += to_string(e.relation);
        out += '@';
        out += std::to_string(e.seq);
    }
    if (g.exogenous_artifact()) out += " [exo]";
    return out;
}

}  // namespace iai
