#include "iai/validate.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace iai {

std::string_view to_string(Profile p) { return p == Profile::Atomic ? "atomic" : "workflow"; }

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Info: return "info";
    }
    return "?";
}

std::optional<Profile> parse_profile(std::string_view text) {
    if (text == "atomic") return Profile::Atomic;
    if (text == "workflow") return Profile::Workflow;
    return std::nullopt;
}

std::string_view code(Rule r) {
    switch (r) {
        case Rule::R1_RelationLegality: return "R1";
        case Rule::R2_AiAtomicity: return "R2";
        case Rule::R3_InteractionRequirement: return "R3";
        case Rule::R4_CausalActivation: return "R4";
        case Rule::R5_Connectivity: return "R5";
        case Rule::R6_SequenceCompactness: return "R6";
        case Rule::R7_AugComposition: return "R7";
        case Rule::R8_RelationMultiplicity: return "R8";
        case Rule::E1_EditNoop: return "E1";
    }
    return "?";
}

std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::R1_RelationLegality: return "relation-legality";
        case Rule::R2_AiAtomicity: return "ai-atomicity";
        case Rule::R3_InteractionRequirement: return "interaction-requirement";
        case Rule::R4_CausalActivation: return "causal-activation";
        case Rule::R5_Connectivity: return "connectivity";
        case Rule::R6_SequenceCompactness: return "sequence-compactness";
        case Rule::R7_AugComposition: return "aug-composition";
        case Rule::R8_RelationMultiplicity: return "relation-multiplicity";
        case Rule::E1_EditNoop: return "edit-noop";
    }
    return "?";
}

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(
        std::ranges::count_if(findings, [](const Finding& f) { return f.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const {
    return static_cast<std::size_t>(
        std::ranges::count_if(findings, [](const Finding& f) { return f.severity == Severity::Warning; }));
}

bool ValidationReport::has(Rule r) const { return count(r) > 0; }

std::size_t ValidationReport::count(Rule r) const {
    return static_cast<std::size_t>(std::ranges::count_if(findings, [r](const Finding& f) { return f.rule == r; }));
}

ActivationState::ActivationState(bool exogenous_artifact, EntitySet carried) : active_(carried) {
    active_.insert(Entity::H);
    if (exogenous_artifact) active_.insert(Entity::A);
    // G is never carried: each segment invokes it afresh.
    active_.erase(Entity::G);
}

bool ActivationState::can_fire(EntityPair edge) const {
    if (!active(edge.source)) return false;
    if (edge.source == Entity::I && edge.target == Entity::A) return active(Entity::A);
    return true;
}

void ActivationState::fire(EntityPair edge) {
    switch (edge.target) {
        case Entity::T:
            if (edge.source == Entity::H || edge.source == Entity::I) active_.insert(Entity::T);
            break;
        case Entity::I:
            if (edge.source == Entity::H || edge.source == Entity::G) active_.insert(Entity::I);
            break;
        case Entity::Aug:
            active_.insert(Entity::Aug);
            break;
        case Entity::A:
            if (edge.source == Entity::G) active_.insert(Entity::A);
            break;
        case Entity::G:
            if (is_invocation(edge)) active_.insert(Entity::G);
            break;
        case Entity::H:
            break;
    }
}

std::vector<int> invocation_seqs(const ParadigmGraph& g) {
    std::set<int> seqs;
    for (const Edge& e : g.edges()) {
        if (is_invocation(e.relation)) seqs.insert(e.seq);
    }
    return {seqs.begin(), seqs.end()};
}

namespace {

std::string edge_label(const Edge& e) { return to_string(e.relation) + "@" + std::to_string(e.seq); }

void check_legality(const ParadigmGraph& g, std::vector<Finding>& out) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        const EntityPair p = g[i].relation;
        if (is_whitelisted(p)) continue;
        out.push_back({Rule::R1_RelationLegality, Severity::Error,
                       "relation " + to_string(p) + " is not allowed: " + std::string(exclusion_rationale(p)), i});
    }
}

void check_atomicity(const ParadigmGraph& g, Profile profile, std::vector<Finding>& out) {
    const auto seqs = invocation_seqs(g);
    if (seqs.size() < 2) return;
    std::string list;
    for (int s : seqs) list += (list.empty() ? "" : ", ") + std::to_string(s);

    if (profile == Profile::Workflow) {
        out.push_back({Rule::R2_AiAtomicity, Severity::Info,
                       std::to_string(seqs.size()) + " invocations at steps " + list, std::nullopt});
        return;
    }
    // Point at the first invocation edge of the second event.
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (is_invocation(g[i].relation) && g[i].seq == seqs[1]) {
            out.push_back({Rule::R2_AiAtomicity, Severity::Error,
                           "GenAI is invoked at " + std::to_string(seqs.size()) + " distinct steps (" + list +
                               "); an atomic paradigm has exactly one invocation",
                           i});
            return;
        }
    }
}

void check_interaction(const ParadigmGraph& g, std::vector<Finding>& out) {
    if (g.entities().contains(Entity::I)) return;
    out.push_back({Rule::R3_InteractionRequirement, Severity::Error,
                   "no relation involves I; an atomic paradigm needs at least one interaction modality",
                   std::nullopt});
}

void check_activation(const ParadigmGraph& g, EntitySet carried, std::vector<Finding>& out) {
    ActivationState state(g.exogenous_artifact(), carried);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Edge& e = g[i];
        if (!state.active(e.source())) {
            std::string why = e.source() == Entity::G ? "G has not been invoked yet"
                                                      : std::string(to_string(e.source())) + " is not active yet";
            out.push_back({Rule::R4_CausalActivation, Severity::Error, edge_label(e) + ": " + why, i});
        } else if (!state.can_fire(e.relation)) {
            out.push_back({Rule::R4_CausalActivation, Severity::Error,
                           edge_label(e) + ": I->A needs an existing artifact (none exogenous, no prior G->A)", i});
        }
        state.fire(e.relation);
    }
}

void check_connectivity(const ParadigmGraph& g, std::vector<Finding>& out) {
    std::array<std::size_t, kEntityCount> parent{};
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Edge& e : g.edges()) parent[find(index_of(e.source()))] = find(index_of(e.target()));

    const EntitySet present = g.entities();
    const std::size_t root = find(index_of(g[0].source()));
    const bool connected = std::ranges::all_of(
        kAllEntities, [&](Entity e) { return !present.contains(e) || find(index_of(e)) == root; });
    if (!connected) {
        out.push_back({Rule::R5_Connectivity, Severity::Error, "graph is not weakly connected", std::nullopt});
    }
    if (!present.empty() && !g.entities().contains(Entity::G)) {
        out.push_back({Rule::R5_Connectivity, Severity::Error, "no relation involves G", std::nullopt});
    }
}

void check_compactness(const ParadigmGraph& g, std::vector<Finding>& out) {
    int expected = 1;
    int last = 0;
    for (const Edge& e : g.edges()) {
        if (e.seq == last) continue;
        if (e.seq != expected) {
            out.push_back({Rule::R6_SequenceCompactness, Severity::Warning,
                           "sequence indices are not 1..k (found " + std::to_string(e.seq) + " where " +
                               std::to_string(expected) + " expected); run normalize",
                           std::nullopt});
            return;
        }
        last = e.seq;
        ++expected;
    }
}

void check_aug(const ParadigmGraph& g, std::vector<Finding>& out) {
    std::optional<std::size_t> first_in;
    bool consumed = false;
    bool derived = false;
    bool refined_t = false;
    std::optional<std::size_t> first_invocation;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const EntityPair p = g[i].relation;
        if (p == EntityPair{Entity::I, Entity::T}) refined_t = true;
        if (is_invocation(p) && !first_invocation) first_invocation = i;
        if (p.source == Entity::Aug && p.target == Entity::G) consumed = true;
        if (p.target != Entity::Aug) continue;
        if (!first_in) first_in = i;
        if (p.source == Entity::I || p.source == Entity::A || (p.source == Entity::T && refined_t)) derived = true;
    }
    if (!first_in) return;
    if (!derived) {
        out.push_back({Rule::R7_AugComposition, Severity::Warning,
                       "Aug carries no interaction-derived information (no I or A input, no I-refined T)",
                       *first_in});
    }
    if (!consumed && (!first_invocation || *first_in < *first_invocation)) {
        out.push_back({Rule::R7_AugComposition, Severity::Warning,
                       "Aug is assembled before invocation but never passed to G; add Aug->G", *first_in});
    }
}

void check_multiplicity(const ParadigmGraph& g, std::vector<Finding>& out) {
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto slot = std::uint64_t{1} << (index_of(g[i].source()) * kEntityCount + index_of(g[i].target()));
        const bool repeated = seen & slot;
        seen |= slot;
        if (repeated) {
            out.push_back({Rule::R8_RelationMultiplicity, Severity::Error,
                           "relation " + to_string(g[i].relation) + " appears more than once", i});
        }
    }
}

}  // namespace

ValidationReport validate(const ParadigmGraph& g, Profile profile, EntitySet carried) {
    ValidationReport report;
    report.profile = profile;
    auto& f = report.findings;

    check_legality(g, f);
    check_atomicity(g, profile, f);
    if (profile == Profile::Atomic) check_interaction(g, f);
    check_activation(g, carried, f);
    check_connectivity(g, f);
    check_compactness(g, f);
    check_aug(g, f);
    if (profile == Profile::Atomic) check_multiplicity(g, f);

    auto by_rule_then_edge = [](const Finding& a, const Finding& b) {
        return std::tie(a.rule, a.edge) < std::tie(b.rule, b.edge);
    };
    if (!std::ranges::is_sorted(f, by_rule_then_edge)) std::ranges::stable_sort(f, by_rule_then_edge);
    return report;
}

std::string format_report(const ParadigmGraph& g, const ValidationReport& report) {
    std::ostringstream os;
    for (const Finding& f : report.findings) {
        os << to_string(f.severity) << ' ' << code(f.rule) << ' ' << rule_name(f.rule);
        if (f.edge && *f.edge < g.size()) {
            os << " [edge " << (*f.edge + 1) << ": " << to_string(g[*f.edge].relation) << '@' << g[*f.edge].seq
               << ']';
        }
        os << ": " << f.message << '\n';
    }
    os << report.error_count() << " errors, " << report.warning_count() << " warnings\n";
    return os.str();
}

}  // namespace iai
