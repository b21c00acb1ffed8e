#include <doctest.h>

#include <regex>

#include "iai/catalog.hpp"
#include "iai/compose.hpp"
#include "support.hpp"

using namespace iai;

namespace {

std::string bundled() { return std::string(default_catalog_text()); }

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

void expect_catalog_error(const std::string& text, const std::string& fragment) {
    try {
        load_catalog(text);
        FAIL("expected CatalogError containing " << fragment);
    } catch (const CatalogError& e) {
        CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
}

// Timing oracle: compare each I-incident seq against the first invocation seq by hand.
Timing manual_timing(const ParadigmGraph& g) {
    int first = 1 << 30;
    for (const Edge& e : g.edges()) {
        const bool to_g = e.target() == Entity::G && e.source() != Entity::I;
        if (to_g) first = std::min(first, e.seq);
    }
    int before = 0, after = 0, total = 0;
    for (const Edge& e : g.edges()) {
        if (e.source() != Entity::I && e.target() != Entity::I) continue;
        ++total;
        before += e.seq < first;
        after += e.seq > first;
    }
    if (before == total) return Timing::Pre;
    if (after == total) return Timing::Post;
    return Timing::Mixed;
}

}  // namespace

TEST_CASE("bundled catalog reproduces the taxonomy grouping") {
    const Catalog& c = default_catalog();
    REQUIRE(c.size() == 12);
    const auto expect = [&](int lo, int hi, Timing t, Resources r) {
        for (int i = lo; i <= hi; ++i) {
            const CatalogEntry& e = c.at("P" + std::to_string(i));
            CHECK(e.number == i);
            CHECK(classify_dimensions(e.graph) == Dimensions{t, r});
            CHECK(e.declared_timing == t);
            CHECK(e.declared_resources == r);
        }
    };
    expect(1, 3, Timing::Pre, Resources::PromptOnly);
    expect(4, 4, Timing::Pre, Resources::ArtifactGrounded);
    expect(5, 8, Timing::Post, Resources::PromptOnly);
    expect(9, 12, Timing::Post, Resources::ArtifactGrounded);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i].id == "P" + std::to_string(i + 1));
}

TEST_CASE("catalog entries carry names and descriptions") {
    for (const CatalogEntry& e : default_catalog()) {
        CHECK_FALSE(e.name.empty());
        CHECK_FALSE(e.description.empty());
        CHECK(e.graph.size() <= 7);
    }
    CHECK(default_catalog().at("P4").name == "Artifact as Instruction");
    CHECK(default_catalog().find("P13") == nullptr);
    CHECK_THROWS_AS(default_catalog().at("P13"), CatalogError);
}

TEST_CASE("the bundled text loads the same as the data file") {
    const auto from_file = load_catalog(test::read_file(test::source_dir() / "data" / "catalog.iai"));
    REQUIRE(from_file.size() == default_catalog().size());
    for (std::size_t i = 0; i < from_file.size(); ++i) CHECK(from_file[i].graph == default_catalog()[i].graph);
}

TEST_CASE("loader rejects broken catalogs") {
    const std::string text = bundled();
    SUBCASE("missing id") { expect_catalog_error(replace_once(text, "  meta id = \"P7\"\n", ""), "missing meta id"); }
    SUBCASE("duplicate id") { expect_catalog_error(replace_once(text, "meta id = \"P7\"", "meta id = \"P6\""), "duplicate id P6"); }
    SUBCASE("missing entry") {
        const auto start = text.find("workflow \"P12");
        expect_catalog_error(text.substr(0, start), "missing id P12");
    }
    SUBCASE("invalid graph") {
        expect_catalog_error(replace_once(text, "3: I -> A \"select, drag or brush elements\"", "3: I -> G"),
                             "validation failure P4");
    }
    SUBCASE("declared dimension disagrees") {
        expect_catalog_error(replace_once(text, "meta id = \"P5\"\n  meta name = \"AI-driven Prompt Suggestion\"\n  meta timing = \"post\"",
                                          "meta id = \"P5\"\n  meta name = \"AI-driven Prompt Suggestion\"\n  meta timing = \"pre\""),
                             "dimension mismatch P5");
    }
    SUBCASE("parse error") { expect_catalog_error(text + "\nworkflow \"x\" { 1: H -> Q }\n", "unknown entity"); }
}

TEST_CASE("timing agrees with the manual oracle") {
    for (const CatalogEntry& e : default_catalog()) CHECK(classify_timing(e.graph) == manual_timing(e.graph));

    // Composed workflows are judged against the first invocation.
    const auto p5p8 = chain(test::paradigm("P5"), test::paradigm("P8")).graph;
    CHECK(classify_timing(p5p8) == manual_timing(p5p8));
    CHECK(classify_timing(p5p8) == Timing::Post);
    const auto p1p5 = chain(test::paradigm("P1"), test::paradigm("P5")).graph;
    CHECK(classify_timing(p1p5) == manual_timing(p1p5));
    CHECK(classify_timing(p1p5) == Timing::Mixed);

    std::mt19937 rng(5);
    for (int i = 0; i < 300; ++i) {
        const auto g = test::random_valid_atomic(rng);
        CHECK(classify_timing(g) == manual_timing(g));
    }
}

TEST_CASE("timing needs an invocation") {
    CHECK_THROWS_AS(classify_timing(build_graph({{Entity::H, Entity::I, 1}}, false)), Error);
}

TEST_CASE("resources follow the exogenous flag, not G outputs") {
    CHECK(classify_resources(test::paradigm("P8")) == Resources::PromptOnly);
    CHECK(classify_resources(test::paradigm("P12")) == Resources::ArtifactGrounded);
}

TEST_CASE("dimension names parse back") {
    for (Timing t : {Timing::Pre, Timing::Post, Timing::Mixed}) CHECK(parse_timing(to_string(t)) == t);
    for (Resources r : {Resources::PromptOnly, Resources::ArtifactGrounded}) CHECK(parse_resources(to_string(r)) == r);
    CHECK_FALSE(parse_timing("during").has_value());
}
