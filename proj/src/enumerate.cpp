#include "iai/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <unordered_set>

#include "iai/validate.hpp"

namespace iai {

void check_bounds(const EnumerationBounds& bounds) {
    if (bounds.max_edges < 2) {
        throw Error("max_edges must be at least 2, got " + std::to_string(bounds.max_edges));
    }
    if (!bounds.include_prompt_only && !bounds.include_artifact_grounded) {
        throw Error("at least one exogenous option must be enabled");
    }
}

namespace {

std::vector<bool> exo_options(const EnumerationBounds& b) {
    std::vector<bool> out;
    if (b.include_prompt_only) out.push_back(false);
    if (b.include_artifact_grounded) out.push_back(true);
    return out;
}

using Mask = std::uint16_t;

constexpr Mask bit(std::size_t i) { return static_cast<Mask>(1U << i); }

Mask relation_mask(Entity s, Entity t) { return bit(*whitelist_index({s, t})); }

Mask target_mask(Entity t) {
    Mask m = 0;
    for (std::size_t i = 0; i < kRelationCount; ++i) {
        if (kWhitelist[i].target == t) m |= bit(i);
    }
    return m;
}

struct Tables {
    Mask invocation = 0;
    Mask touches_i = 0;
    Tables() {
        for (std::size_t i = 0; i < kRelationCount; ++i) {
            if (is_invocation(kWhitelist[i])) invocation |= bit(i);
            if (kWhitelist[i].source == Entity::I || kWhitelist[i].target == Entity::I) touches_i |= bit(i);
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

// Packed (exo, used, aftermath) triple; the invocation entries are used & invocation.
using FormKey = std::uint32_t;

FormKey pack(bool exo, Mask used, Mask after) {
    return static_cast<FormKey>(used) | (static_cast<FormKey>(after) << 12) | (static_cast<FormKey>(exo) << 24);
}

CanonicalForm unpack(FormKey key) {
    const Mask used = key & 0xFFF;
    const Mask after = (key >> 12) & 0xFFF;
    CanonicalForm f;
    f.exogenous_artifact = (key >> 24) & 1U;
    for (std::size_t i = 0; i < kRelationCount; ++i) {
        if (!(used & bit(i))) continue;
        Phase p = Phase::Pre;
        if (after & bit(i)) {
            p = Phase::Aftermath;
        } else if (tables().invocation & bit(i)) {
            p = Phase::Invoke;
        }
        f.entries.push_back({p, kWhitelist[i]});
    }
    std::ranges::sort(f.entries);
    return f;
}

bool connected_with_g(Mask used) {
    std::array<std::size_t, kEntityCount> parent{};
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    EntitySet present;
    for (std::size_t i = 0; i < kRelationCount; ++i) {
        if (!(used & bit(i))) continue;
        present.insert(kWhitelist[i].source);
        present.insert(kWhitelist[i].target);
        parent[find(index_of(kWhitelist[i].source))] = find(index_of(kWhitelist[i].target));
    }
    if (!present.contains(Entity::G)) return false;
    const std::size_t root = find(index_of(Entity::G));
    return std::ranges::all_of(present.members(), [&](Entity e) { return find(index_of(e)) == root; });
}

// Invocation group: not yet started, open (later edges may still join it), closed.
enum class Group : std::uint8_t { NotStarted, Open, Closed };

class Search {
public:
    Search(int max_edges, bool exo) : max_edges_(max_edges), exo_(exo) {}

    void run(std::set<FormKey>& out) {
        out_ = &out;
        visit(0, 0, Group::NotStarted);
    }

private:
    bool active(Entity e, Mask used) const {
        switch (e) {
            case Entity::H: return true;
            case Entity::T: return used & (relation_mask(Entity::H, Entity::T) | relation_mask(Entity::I, Entity::T));
            case Entity::I: return used & (relation_mask(Entity::H, Entity::I) | relation_mask(Entity::G, Entity::I));
            case Entity::Aug: return used & target_mask(Entity::Aug);
            case Entity::A: return exo_ || (used & relation_mask(Entity::G, Entity::A));
            case Entity::G: return used & tables().invocation;
        }
        return false;
    }

    bool can_fire(std::size_t r, Mask used) const {
        const EntityPair p = kWhitelist[r];
        if (!active(p.source, used)) return false;
        if (p == EntityPair{Entity::I, Entity::A}) return active(Entity::A, used);
        return true;
    }

    void visit(Mask used, Mask after, Group group) {
        const std::uint32_t state = pack(false, used, after) | (static_cast<std::uint32_t>(group) << 25);
        if (!seen_.insert(state).second) return;

        if (group != Group::NotStarted && (used & tables().touches_i) && connected_with_g(used)) {
            out_->insert(pack(exo_, used, after));
        }
        if (group == Group::Open) visit(used, after, Group::Closed);
        if (std::popcount(used) >= max_edges_) return;

        for (std::size_t r = 0; r < kRelationCount; ++r) {
            if ((used & bit(r)) || !can_fire(r, used)) continue;
            const bool invocation = tables().invocation & bit(r);
            if (invocation) {
                if (group == Group::Closed) continue;  // a second invocation step
                visit(used | bit(r), after, Group::Open);
            } else {
                visit(used | bit(r), group == Group::Closed ? Mask(after | bit(r)) : after, group);
            }
        }
    }

    int max_edges_;
    bool exo_;
    std::set<FormKey>* out_ = nullptr;
    std::unordered_set<std::uint32_t> seen_;
};

std::vector<CanonicalForm> sorted_forms(const std::set<FormKey>& keys) {
    std::vector<CanonicalForm> out;
    out.reserve(keys.size());
    for (FormKey k : keys) out.push_back(unpack(k));
    std::ranges::sort(out);
    return out;
}

}  // namespace

std::vector<CanonicalForm> enumerate_atomic(const EnumerationBounds& bounds) {
    check_bounds(bounds);
    const int max_edges = std::min<int>(bounds.max_edges, kRelationCount);
    std::set<FormKey> keys;
    for (bool exo : exo_options(bounds)) Search(max_edges, exo).run(keys);
    return sorted_forms(keys);
}

std::vector<CanonicalForm> oracle_enumerate(const EnumerationBounds& bounds) {
    check_bounds(bounds);
    if (bounds.max_edges > kOracleCeiling) {
        throw Error("oracle refuses max_edges " + std::to_string(bounds.max_edges) + " (ceiling " +
                    std::to_string(kOracleCeiling) + ")");
    }

    std::set<CanonicalForm> forms;
    std::vector<Edge> edges;
    for (bool exo : exo_options(bounds)) {
        for (unsigned subset = 1; subset < (1U << kRelationCount); ++subset) {
            const int k = std::popcount(subset);
            if (k > bounds.max_edges) continue;

            std::vector<std::size_t> order;
            for (std::size_t i = 0; i < kRelationCount; ++i) {
                if (subset & (1U << i)) order.push_back(i);
            }
            do {
                std::optional<std::size_t> first_inv;
                std::size_t last_inv = 0;
                for (std::size_t pos = 0; pos < order.size(); ++pos) {
                    if (!is_invocation(kWhitelist[order[pos]])) continue;
                    if (!first_inv) first_inv = pos;
                    last_inv = pos;
                }
                // Without an invocation every seq assignment fails alike; try one.
                const std::size_t p = first_inv.value_or(order.size());
                const std::size_t first_end = first_inv ? last_inv : order.size() - 1;
                for (std::size_t end = first_end; end < order.size(); ++end) {
                    edges.clear();
                    for (std::size_t pos = 0; pos < order.size(); ++pos) {
                        int seq = static_cast<int>(pos) + 1;
                        if (pos >= p && pos <= end) {
                            seq = static_cast<int>(p) + 1;
                        } else if (pos > end) {
                            seq = static_cast<int>(p) + 1 + static_cast<int>(pos - end);
                        }
                        edges.push_back({kWhitelist[order[pos]], seq, {}});
                    }
                    ParadigmGraph g(edges, exo);
                    if (validate(g, Profile::Atomic).passes()) forms.insert(canonical_form(g));
                    if (!first_inv) break;
                }
            } while (std::ranges::next_permutation(order).found);
        }
    }
    return {forms.begin(), forms.end()};
}

NoveltyReport novelty_report(const std::vector<CanonicalForm>& space, const Catalog& catalog) {
    NoveltyReport report;
    std::vector<std::pair<CanonicalForm, const CatalogEntry*>> catalog_forms;
    for (const CatalogEntry& e : catalog) catalog_forms.emplace_back(canonical_form(e.graph), &e);

    std::vector<KnownForm> known;
    for (const CanonicalForm& f : space) {
        auto hit = std::ranges::find(catalog_forms, f, &decltype(catalog_forms)::value_type::first);
        if (hit != catalog_forms.end()) {
            known.push_back({f, hit->second->id});
            continue;
        }
        const Classification c = classify_against_catalog(f, {}, catalog);
        report.novel.push_back({f, c.paradigm, c.distance});
    }
    // Catalog order for the known ones.
    for (const auto& [form, entry] : catalog_forms) {
        auto it = std::ranges::find(known, entry->id, &KnownForm::paradigm);
        if (it != known.end()) report.known.push_back(*it);
    }
    std::ranges::sort(report.novel, {}, &NovelForm::form);
    return report;
}

}  // namespace iai
