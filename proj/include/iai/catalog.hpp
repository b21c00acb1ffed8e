#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iai/core.hpp"

namespace iai {

class CatalogError : public Error {
public:
    using Error::Error;
};

enum class Timing { Pre, Post, Mixed };
enum class Resources { PromptOnly, ArtifactGrounded };

std::string_view to_string(Timing t);
std::string_view to_string(Resources r);
std::optional<Timing> parse_timing(std::string_view text);
std::optional<Resources> parse_resources(std::string_view text);

struct Dimensions {
    Timing timing;
    Resources resources;

    friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

/// Interaction timing relative to the first invocation: pre if every
/// I-incident edge precedes it, post if every one follows it, else mixed.
/// Throws Error when the graph never invokes G.
Timing classify_timing(const ParadigmGraph& g);

/// Artifact-grounded iff the artifact is exogenous. An artifact first created
/// by G->A does not count.
Resources classify_resources(const ParadigmGraph& g);

Dimensions classify_dimensions(const ParadigmGraph& g);

struct CatalogEntry {
    std::string id;  // "P1".."P12"
    int number = 0;
    std::string name;
    Timing declared_timing = Timing::Pre;
    Resources declared_resources = Resources::PromptOnly;
    ParadigmGraph graph;
    std::string description;
};

/// The twelve atomic paradigms, ordered P1..P12.
class Catalog {
public:
    explicit Catalog(std::vector<CatalogEntry> entries) : entries_(std::move(entries)) {}

    std::span<const CatalogEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const CatalogEntry& operator[](std::size_t i) const { return entries_[i]; }
    const CatalogEntry* find(std::string_view id) const;
    /// Throws CatalogError for unknown ids.
    const CatalogEntry& at(std::string_view id) const;

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::vector<CatalogEntry> entries_;
};

inline constexpr int kParadigmCount = 12;

/// Parses and checks a catalog in the workflow text format. Aborts with
/// CatalogError naming the offending entry on a missing or duplicate id, a
/// graph that fails atomic validation, declared dimensions that disagree with
/// the computed ones, or incomplete relation coverage.
Catalog load_catalog(std::string_view text);

/// Text of the catalog bundled into the library.
std::string_view default_catalog_text();

/// Lazily loaded bundled catalog.
const Catalog& default_catalog();

}  // namespace iai
