#include "iai/match.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "iai/validate.hpp"

namespace iai {

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Pre: return "pre";
        case Phase::Invoke: return "invoke";
        case Phase::Aftermath: return "after";
    }
    return "?";
}

std::strong_ordering operator<=>(const CanonicalForm& a, const CanonicalForm& b) {
    if (auto c = a.entries.size() <=> b.entries.size(); c != 0) return c;
    if (auto c = a.entries <=> b.entries; c != 0) return c;
    return a.exogenous_artifact <=> b.exogenous_artifact;
}

std::string to_string(const CanonicalForm& f) {
    std::string out = f.exogenous_artifact ? "exo" : "noexo";
    for (Phase p : {Phase::Pre, Phase::Invoke, Phase::Aftermath}) {
        out += ' ';
        out += to_string(p);
        out += '{';
        bool first = true;
        for (const auto& e : f.entries) {
            if (e.phase != p) continue;
            if (!first) out += ',';
            out += to_string(e.relation);
            first = false;
        }
        out += '}';
    }
    return out;
}

CanonicalForm canonical_form(const ParadigmGraph& g) {
    const auto seqs = invocation_seqs(g);
    if (seqs.size() != 1) {
        throw MatchError("canonical form needs exactly one invocation, found " + std::to_string(seqs.size()) +
                         "; decompose first");
    }
    const int inv = seqs.front();
    std::set<PhasedRelation> entries;
    for (const Edge& e : g.edges()) {
        Phase phase = Phase::Pre;
        if (is_invocation(e.relation) && e.seq == inv) {
            phase = Phase::Invoke;
        } else if (e.seq > inv) {
            phase = Phase::Aftermath;
        }
        entries.insert({phase, e.relation});
    }
    return {g.exogenous_artifact(), {entries.begin(), entries.end()}};
}

bool graphs_equal(const ParadigmGraph& a, const ParadigmGraph& b) { return canonical_form(a) == canonical_form(b); }

std::size_t edit_distance(const CanonicalForm& a, const CanonicalForm& b) {
    std::vector<PhasedRelation> diff;
    std::ranges::set_symmetric_difference(a.entries, b.entries, std::back_inserter(diff));
    return diff.size() + (a.exogenous_artifact == b.exogenous_artifact ? 0 : 1);
}

std::size_t edit_distance(const ParadigmGraph& a, const ParadigmGraph& b) {
    return edit_distance(canonical_form(a), canonical_form(b));
}

namespace {

enum class Closure : std::uint8_t { None, Fresh, Consumed };

class ClosureState {
public:
    void reset() { state_.fill(Closure::None); }

    bool connects(EntityPair e) const {
        if (e.source == Entity::G) return true;
        if (at(e.source) == Closure::Fresh) return true;
        return at(e.target) == Closure::Fresh && (e.source == Entity::H || e.target == Entity::Aug);
    }

    void absorb(EntityPair e) {
        if (e.source != Entity::H && e.source != Entity::G) state_[index_of(e.source)] = Closure::Consumed;
        state_[index_of(e.target)] = Closure::Fresh;
    }

private:
    Closure at(Entity e) const { return state_[index_of(e)]; }
    std::array<Closure, kEntityCount> state_{};
};

bool introduces(EntityPair e, Entity x) {
    switch (x) {
        case Entity::T: return e == EntityPair{Entity::H, Entity::T};
        case Entity::A: return e == EntityPair{Entity::G, Entity::A};
        case Entity::Aug: return e.target == Entity::Aug;
        default: return false;
    }
}

std::vector<int> assign_segments(const ParadigmGraph& g) {
    const std::size_t n = g.size();
    const auto inv_seqs = invocation_seqs(g);
    if (inv_seqs.empty()) throw DecomposeError("workflow never invokes G");
    const int last_inv = inv_seqs.back();

    std::vector<int> seg(n, -1);
    std::vector<std::size_t> pending;
    ClosureState closure;
    int cur = -1;
    int cur_seq = 0;
    bool cut = false;

    std::size_t i = 0;
    while (i < n) {
        const Edge& e = g[i];
        if (is_invocation(e.relation)) {
            if (cur < 0 || e.seq != cur_seq) {
                ++cur;
                cur_seq = e.seq;
                for (std::size_t p : pending) seg[p] = cur;
                pending.clear();
                closure.reset();
                cut = false;
            }
            seg[i++] = cur;
            continue;
        }
        if (cur < 0) {
            pending.push_back(i++);
            continue;
        }
        if (e.seq == cur_seq) {
            // Concurrent with the invocation: same segment.
            seg[i] = cur;
            if (closure.connects(e.relation)) closure.absorb(e.relation);
            ++i;
            continue;
        }

        // One concurrency group of the gap, up to the next invocation edge.
        std::size_t j = i;
        while (j < n && g[j].seq == e.seq && !is_invocation(g[j].relation)) ++j;
        if (cur_seq == last_inv) {
            // Nothing later to hand these to: the rest is this invocation's aftermath.
            for (std::size_t k = i; k < j; ++k) seg[k] = cur;
            i = j;
            continue;
        }
        if (cut) {
            for (std::size_t k = i; k < j; ++k) pending.push_back(k);
            i = j;
            continue;
        }
        std::vector<bool> joined(j - i, false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t k = i; k < j; ++k) {
                if (joined[k - i] || !closure.connects(g[k].relation)) continue;
                joined[k - i] = true;
                closure.absorb(g[k].relation);
                changed = true;
            }
        }
        for (std::size_t k = i; k < j; ++k) {
            if (joined[k - i]) {
                seg[k] = cur;
            } else {
                pending.push_back(k);
                cut = true;
            }
        }
        i = j;
    }

    if (!pending.empty()) {
        const Edge& e = g[pending.front()];
        throw DecomposeError("edge " + to_string(e.relation) + "@" + std::to_string(e.seq) +
                                 " is not attributable to any invocation",
                             pending.front());
    }
    return seg;
}

}  // namespace

std::vector<Segment> decompose(const WorkflowRecord& w) {
    const ParadigmGraph& g = w.graph;
    const auto report = validate(g, Profile::Workflow);
    if (!report.passes()) {
        const auto& f = *std::ranges::find(report.findings, Severity::Error, &Finding::severity);
        throw DecomposeError("workflow '" + w.name + "' fails workflow validation: " + std::string(code(f.rule)) +
                                 " " + f.message,
                             f.edge);
    }

    const auto seg = assign_segments(g);
    const int count = *std::ranges::max_element(seg) + 1;

    std::vector<Segment> out;
    for (int c = 0; c < count; ++c) {
        // Activation reached by everything assigned to earlier segments.
        ActivationState before(g.exogenous_artifact());
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (seg[i] < c) before.fire(g[i].relation);
            if (seg[i] == c) edges.push_back(g[i]);
        }

        EntitySet carried;
        if (c > 0) {
            for (Entity x : {Entity::T, Entity::Aug, Entity::A}) {
                if (!before.active(x)) continue;
                auto first = std::ranges::find_if(edges, [x](const Edge& e) { return e.touches(x); });
                if (first != edges.end() && !introduces(first->relation, x)) carried.insert(x);
            }
        }
        const bool exo = c == 0 ? g.exogenous_artifact() : carried.contains(Entity::A);
        out.push_back({normalize_sequences(ParadigmGraph(std::move(edges), exo)), carried});
    }
    return out;
}

std::string to_string(const Classification& c) {
    if (c.matched()) return "Matched(" + c.paradigm + ")";
    return "Novel(nearest " + c.paradigm + ", distance " + std::to_string(c.distance) + ")";
}

CanonicalForm handoff_form(const CatalogEntry& entry, EntitySet carried) {
    CanonicalForm f = canonical_form(entry.graph);
    if (carried.contains(Entity::T)) {
        std::erase_if(f.entries, [](const PhasedRelation& r) {
            return r.relation == EntityPair{Entity::H, Entity::T};
        });
    }
    if (carried.contains(Entity::A)) f.exogenous_artifact = true;
    return f;
}

Classification classify_against_catalog(const CanonicalForm& form, EntitySet carried, const Catalog& catalog) {
    if (catalog.empty()) throw MatchError("cannot classify against an empty catalog");
    CanonicalForm probe = form;
    if (carried.contains(Entity::A)) probe.exogenous_artifact = true;

    Classification best{"", SIZE_MAX, 0};
    for (const CatalogEntry& entry : catalog) {
        const std::size_t d = edit_distance(probe, handoff_form(entry, carried));
        if (d < best.distance) best = {entry.id, d, 0};
    }
    return best;
}

Classification classify_against_catalog(const ParadigmGraph& g, EntitySet carried, const Catalog& catalog) {
    return classify_against_catalog(canonical_form(g), carried, catalog);
}

}  // namespace iai
