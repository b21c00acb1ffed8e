#include "iai/catalog.hpp"

#include <algorithm>
#include <set>

#include "iai/dsl.hpp"
#include "iai/validate.hpp"

namespace iai {

namespace detail {
extern const std::string_view kBundledCatalog;
}

std::string_view to_string(Timing t) {
    switch (t) {
        case Timing::Pre: return "pre";
        case Timing::Post: return "post";
        case Timing::Mixed: return "mixed";
    }
    return "?";
}

std::string_view to_string(Resources r) {
    return r == Resources::PromptOnly ? "prompt_only" : "artifact_grounded";
}

std::optional<Timing> parse_timing(std::string_view text) {
    if (text == "pre") return Timing::Pre;
    if (text == "post") return Timing::Post;
    if (text == "mixed") return Timing::Mixed;
    return std::nullopt;
}

std::optional<Resources> parse_resources(std::string_view text) {
    if (text == "prompt_only") return Resources::PromptOnly;
    if (text == "artifact_grounded") return Resources::ArtifactGrounded;
    return std::nullopt;
}

Timing classify_timing(const ParadigmGraph& g) {
    const auto seqs = invocation_seqs(g);
    if (seqs.empty()) throw Error("timing is undefined: the graph never invokes G");
    const int first = seqs.front();
    bool all_before = true;
    bool all_after = true;
    for (const Edge& e : g.edges()) {
        if (!e.touches(Entity::I)) continue;
        all_before = all_before && e.seq < first;
        all_after = all_after && e.seq > first;
    }
    if (all_before) return Timing::Pre;
    if (all_after) return Timing::Post;
    return Timing::Mixed;
}

Resources classify_resources(const ParadigmGraph& g) {
    return g.exogenous_artifact() ? Resources::ArtifactGrounded : Resources::PromptOnly;
}

Dimensions classify_dimensions(const ParadigmGraph& g) { return {classify_timing(g), classify_resources(g)}; }

const CatalogEntry* Catalog::find(std::string_view id) const {
    auto it = std::ranges::find(entries_, id, &CatalogEntry::id);
    return it == entries_.end() ? nullptr : &*it;
}

const CatalogEntry& Catalog::at(std::string_view id) const {
    if (const auto* e = find(id)) return *e;
    throw CatalogError("unknown paradigm id " + std::string(id));
}

namespace {

std::optional<int> paradigm_number(std::string_view id) {
    if (id.size() < 2 || id.front() != 'P') return std::nullopt;
    int n = 0;
    for (char c : id.substr(1)) {
        if (c < '0' || c > '9') return std::nullopt;
        n = n * 10 + (c - '0');
        if (n > kParadigmCount) return std::nullopt;
    }
    if (n < 1 || id[1] == '0') return std::nullopt;
    return n;
}

std::string meta_or_throw(const WorkflowRecord& r, const std::string& key, std::string_view who) {
    auto it = r.metadata.find(key);
    if (it == r.metadata.end()) throw CatalogError("entry " + std::string(who) + ": missing meta " + key);
    return it->second;
}

}  // namespace

Catalog load_catalog(std::string_view text) {
    auto parsed = dsl::parse_workflow(text);
    for (const auto& d : parsed.diagnostics) {
        if (d.severity == Severity::Error) throw CatalogError(dsl::format_diagnostic("catalog", d));
    }

    std::vector<std::optional<CatalogEntry>> slots(kParadigmCount);
    for (const WorkflowRecord& r : parsed.records) {
        auto id_it = r.metadata.find("id");
        if (id_it == r.metadata.end()) throw CatalogError("entry '" + r.name + "': missing meta id");
        const std::string& id = id_it->second;
        const auto number = paradigm_number(id);
        if (!number) throw CatalogError("entry '" + r.name + "': invalid id " + id);
        auto& slot = slots[static_cast<std::size_t>(*number - 1)];
        if (slot) throw CatalogError("duplicate id " + id);

        const auto timing = parse_timing(meta_or_throw(r, "timing", id));
        const auto resources = parse_resources(meta_or_throw(r, "resources", id));
        if (!timing || *timing == Timing::Mixed) throw CatalogError("entry " + id + ": invalid timing");
        if (!resources) throw CatalogError("entry " + id + ": invalid resources");

        const auto report = validate(r.graph, Profile::Atomic);
        if (!report.passes()) {
            throw CatalogError("validation failure " + id + ":\n" + format_report(r.graph, report));
        }
        const Dimensions computed = classify_dimensions(r.graph);
        if (computed.timing != *timing || computed.resources != *resources) {
            throw CatalogError("dimension mismatch " + id + ": declared " + std::string(to_string(*timing)) + "/" +
                               std::string(to_string(*resources)) + ", computed " +
                               std::string(to_string(computed.timing)) + "/" +
                               std::string(to_string(computed.resources)));
        }
        auto name_it = r.metadata.find("name");
        auto desc_it = r.metadata.find("description");
        slot = CatalogEntry{id,
                            *number,
                            name_it != r.metadata.end() ? name_it->second : r.name,
                            *timing,
                            *resources,
                            r.graph,
                            desc_it != r.metadata.end() ? desc_it->second : std::string{}};
    }

    std::vector<CatalogEntry> entries;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i]) throw CatalogError("missing id P" + std::to_string(i + 1));
        entries.push_back(std::move(*slots[i]));
    }

    std::set<EntityPair> covered;
    for (const auto& e : entries) {
        for (const Edge& edge : e.graph.edges()) covered.insert(edge.relation);
    }
    for (const EntityPair& p : kWhitelist) {
        if (!covered.contains(p)) throw CatalogError("relation " + to_string(p) + " occurs in no catalog entry");
    }
    return Catalog(std::move(entries));
}

std::string_view default_catalog_text() { return detail::kBundledCatalog; }

const Catalog& default_catalog() {
    static const Catalog catalog = load_catalog(default_catalog_text());
    return catalog;
}

}  // namespace iai
