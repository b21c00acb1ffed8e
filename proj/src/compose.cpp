#include "iai/compose.hpp"

#include <algorithm>

namespace iai {

namespace {

constexpr EntityPair kHumanPrompt{Entity::H, Entity::T};

bool activates_prompt(EntityPair e) {
    return e == kHumanPrompt || e == EntityPair{Entity::I, Entity::T};
}

// A prompt is pending when its last activation comes after its last use.
bool prompt_pending(const ParadigmGraph& a) {
    std::optional<std::size_t> last_activation;
    std::optional<std::size_t> last_use;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (activates_prompt(a[i].relation)) last_activation = i;
        if (a[i].source() == Entity::T) last_use = i;
    }
    return last_activation && (!last_use || *last_activation > *last_use);
}

void check_operands(const ParadigmGraph& a, const ParadigmGraph& b) {
    if (const auto r = validate(a, Profile::Workflow); !r.passes()) {
        throw ComposeError("left operand fails workflow validation:\n" + format_report(a, r));
    }
    if (const auto r = validate(b, Profile::Atomic); !r.passes()) {
        throw ComposeError("right operand fails atomic validation:\n" + format_report(b, r));
    }
}

EntitySet compute_handoff(const ParadigmGraph& a, const ParadigmGraph& b) {
    EntitySet carried;
    if (b.exogenous_artifact()) {
        ActivationState state(a.exogenous_artifact());
        for (const Edge& e : a.edges()) state.fire(e.relation);
        if (!state.active(Entity::A)) {
            throw ComposeError(
                "unresolvable handoff: right operand needs an existing artifact A, but the left operand never "
                "produces one");
        }
        carried.insert(Entity::A);
    }
    if (prompt_pending(a)) {
        auto first = std::ranges::find_if(b.edges(), [](const Edge& e) { return e.touches(Entity::T); });
        if (first != b.edges().end() && first->relation == kHumanPrompt) carried.insert(Entity::T);
    }
    return carried;
}

}  // namespace

EntitySet handoff(const ParadigmGraph& a, const ParadigmGraph& b) {
    check_operands(a, b);
    return compute_handoff(a, b);
}

WorkflowRecord chain(const ParadigmGraph& a, const ParadigmGraph& b, std::string name) {
    check_operands(a, b);
    const EntitySet carried = compute_handoff(a, b);

    const ParadigmGraph left = normalize_sequences(a);
    const ParadigmGraph right = normalize_sequences(b);
    const int offset = left.max_seq();

    std::vector<Edge> edges(left.edges().begin(), left.edges().end());
    bool dropped = !carried.contains(Entity::T);
    for (const Edge& e : right.edges()) {
        if (!dropped && e.relation == kHumanPrompt) {
            dropped = true;
            continue;
        }
        edges.push_back({e.relation, e.seq + offset, e.note});
    }

    WorkflowRecord out(std::move(name), normalize_sequences(ParadigmGraph(std::move(edges), a.exogenous_artifact())));
    out.metadata["handoff"] = to_string(carried);
    if (const auto r = validate(out.graph, Profile::Workflow); !r.passes()) {
        throw ComposeError("composition fails workflow validation:\n" + format_report(out.graph, r));
    }
    return out;
}

std::string to_string(const EditOp& op) {
    return std::visit(
        [](const auto& o) -> std::string {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, AddEdge>) {
                return "add " + to_string(o.relation) + "@" + std::to_string(o.seq);
            } else if constexpr (std::is_same_v<T, RemoveEdge>) {
                return "remove " + to_string(o.relation);
            } else {
                return std::string("exogenous ") + (o.value ? "true" : "false");
            }
        },
        op);
}

namespace {

ParadigmGraph apply_one(const ParadigmGraph& g, const EditOp& op, std::vector<Finding>& notes) {
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    bool exo = g.exogenous_artifact();

    if (const auto* add = std::get_if<AddEdge>(&op)) {
        if (add->seq < 1) throw ComposeError("add_edge: seq must be >= 1, got " + std::to_string(add->seq));
        // The constructor's stable sort places it after the existing members of its group.
        edges.push_back({add->relation, add->seq, {}});
    } else if (const auto* rm = std::get_if<RemoveEdge>(&op)) {
        auto it = std::ranges::find(edges, rm->relation, &Edge::relation);
        if (it == edges.end()) {
            notes.push_back({Rule::E1_EditNoop, Severity::Warning,
                             "remove_edge: " + to_string(rm->relation) + " is not in the graph; nothing removed",
                             std::nullopt});
        } else {
            if (edges.size() == 1) throw ComposeError("remove_edge: cannot remove the only edge");
            edges.erase(it);
        }
    } else {
        exo = std::get<SetExogenous>(op).value;
    }
    return ParadigmGraph(std::move(edges), exo);
}

}  // namespace

EditResult apply_edits(const ParadigmGraph& g, std::span<const EditOp> ops) {
    std::vector<Finding> notes;
    ParadigmGraph cur = g;
    for (const EditOp& op : ops) cur = apply_one(cur, op, notes);
    ValidationReport report = validate(cur, Profile::Atomic);
    report.findings.insert(report.findings.end(), notes.begin(), notes.end());
    return {std::move(cur), std::move(report)};
}

EditResult apply_edit(const ParadigmGraph& g, const EditOp& op) { return apply_edits(g, std::span(&op, 1)); }

}  // namespace iai
