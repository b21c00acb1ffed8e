#include <doctest.h>

#include "iai/dsl.hpp"
#include "iai/match.hpp"
#include "support.hpp"

using namespace iai;
using namespace iai::dsl;

namespace {

constexpr std::string_view kDirectGpt = R"(workflow "DirectGPT edit" {
  meta tool = "DirectGPT"
  meta expected = "P4"
  resources artifact
  1: H -> T "types edit request"
  2: H -> I
  3: I -> A "drags target element"
  4: A -> Aug
  4: T -> Aug
  5: Aug -> G
  6: G -> A
}
)";

std::size_t error_count(const ParseResult& r) {
    return static_cast<std::size_t>(std::count_if(r.diagnostics.begin(), r.diagnostics.end(),
                                                  [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

std::vector<std::filesystem::path> bundled_files() {
    auto files = test::iai_files(test::source_dir() / "corpus");
    for (const auto& f : test::iai_files(test::source_dir() / "scenarios")) files.push_back(f);
    files.push_back(test::source_dir() / "data" / "catalog.iai");
    return files;
}

}  // namespace

TEST_CASE("the DirectGPT sample parses to P4") {
    const auto r = parse_workflow(kDirectGpt);
    REQUIRE(r.diagnostics.empty());
    REQUIRE(r.records.size() == 1);
    const WorkflowRecord& w = r.records.front();
    CHECK(w.name == "DirectGPT edit");
    CHECK(w.graph.size() == 7);
    CHECK(w.graph.exogenous_artifact());
    CHECK(w.metadata.at("tool") == "DirectGPT");
    CHECK(w.graph[2].note == "drags target element");
    CHECK(w.graph[3].relation == EntityPair{Entity::A, Entity::Aug});
    CHECK(canonical_form(w.graph) == canonical_form(test::paradigm("P4")));
}

TEST_CASE("unknown entity is reported at its span") {
    const auto r = parse_workflow("workflow \"x\" {\n  1: H -> X\n}\n");
    REQUIRE(r.diagnostics.size() == 1);
    const Diagnostic& d = r.diagnostics.front();
    CHECK(d.severity == Severity::Error);
    CHECK(d.message == "unknown entity 'X'");
    CHECK(d.span == SourceSpan{2, 11, 1});
    CHECK(r.records.empty());
    CHECK(format_diagnostic("f.iai", d) == "f.iai:2:11: error: unknown entity 'X'");
}

TEST_CASE("an error drops only its own block") {
    const std::string text = R"(workflow "broken" {
  1: H -> T
  2: T => G
}
workflow "fine" {
  1: H -> T
  2: H -> I
  2: I -> T
  3: T -> G
}
)";
    const auto r = parse_workflow(text);
    CHECK(error_count(r) == 1);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records.front().name == "fine");
    CHECK(r.diagnostics.front().span.line == 3);
}

TEST_CASE("other malformed inputs") {
    SUBCASE("duplicate meta key") {
        const auto r = parse_workflow("workflow \"x\" {\n meta a = \"1\"\n meta a = \"2\"\n 1: H -> I\n}");
        REQUIRE(error_count(r) == 1);
        CHECK(r.diagnostics.front().message == "duplicate meta key 'a'");
        CHECK(r.diagnostics.front().span.line == 3);
        CHECK(r.records.empty());
    }
    SUBCASE("step index zero") {
        const auto r = parse_workflow("workflow \"x\" { 0: H -> T }");
        CHECK(error_count(r) == 1);
        CHECK(r.records.empty());
    }
    SUBCASE("empty workflow") {
        const auto r = parse_workflow("workflow \"x\" { }");
        CHECK(r.diagnostics.front().message == "workflow 'x' has no steps");
    }
    SUBCASE("unterminated block") { CHECK(error_count(parse_workflow("workflow \"x\" { 1: H -> T")) >= 1); }
    SUBCASE("unknown escape") { CHECK(error_count(parse_workflow("workflow \"a\\qb\" { 1: H -> T }")) >= 1); }
    SUBCASE("stray tokens before a block") {
        const auto r = parse_workflow("hello\nworkflow \"x\" { 1: H -> T\n 1: T -> G\n 2: G -> I\n 3: H -> I }");
        CHECK(error_count(r) == 1);
        CHECK(r.records.size() == 1);
    }
    SUBCASE("resources must say artifact") {
        CHECK(error_count(parse_workflow("workflow \"x\" { resources none 1: H -> T }")) == 1);
    }
}

TEST_CASE("comments, CRLF and whitespace") {
    const auto r = parse_workflow("# lead\r\nworkflow \"x\" {   # trailing\r\n 1:H->T\r\n\t2 : T -> G # c\r\n}\r\n");
    CHECK(r.diagnostics.empty());
    REQUIRE(r.records.size() == 1);
    CHECK(to_string(r.records.front().graph) == "H->T@1; T->G@2");
}

TEST_CASE("exogenous inference") {
    SUBCASE("first A edge is A->G: inferred true with an info diagnostic") {
        const auto r = parse_workflow("workflow \"v\" { 1: A -> G\n 2: G -> I\n 3: H -> I\n 4: I -> T }");
        REQUIRE(r.records.size() == 1);
        CHECK(r.records.front().graph.exogenous_artifact());
        REQUIRE(r.diagnostics.size() == 1);
        CHECK(r.diagnostics.front().severity == Severity::Info);
        CHECK_FALSE(r.has_errors());
    }
    SUBCASE("first A edge is G->A: inferred false") {
        const auto r = parse_workflow("workflow \"v\" { 1: H -> T\n 2: T -> G\n 3: G -> A\n 4: A -> G }");
        CHECK_FALSE(r.records.front().graph.exogenous_artifact());
    }
    SUBCASE("no A edges: false and silent") {
        const auto r = parse_workflow("workflow \"v\" { 1: H -> T\n 2: T -> G }");
        CHECK_FALSE(r.records.front().graph.exogenous_artifact());
        CHECK(r.diagnostics.empty());
    }
}

TEST_CASE("serializer") {
    CHECK(serialize_workflow({}).empty());

    SUBCASE("notes with quotes and backslashes survive") {
        const std::string note = "say \"hi\" \\ then\nleave";
        WorkflowRecord w("q \"name\"", ParadigmGraph({Edge{{Entity::H, Entity::T}, 1, note}, Edge{{Entity::T, Entity::G}, 2, {}}}, false),
                         {{"k", "v \"x\""}});
        const auto back = parse_workflow(serialize_workflow({w}));
        REQUIRE(back.diagnostics.empty());
        REQUIRE(back.records.size() == 1);
        CHECK(back.records.front() == w);
    }
    SUBCASE("seqs are normalized and meta keys sorted") {
        WorkflowRecord w("n", build_graph({{Entity::H, Entity::T, 3}, {Entity::T, Entity::G, 7}}, false),
                         {{"z", "1"}, {"a", "2"}});
        CHECK(serialize_workflow({w}) ==
              "workflow \"n\" {\n  meta a = \"2\"\n  meta z = \"1\"\n  1: H -> T\n  2: T -> G\n}\n");
    }
}

TEST_CASE("round trip on every bundled file") {
    for (const auto& path : bundled_files()) {
        CAPTURE(path.string());
        const auto first = parse_workflow(test::read_file(path));
        REQUIRE_FALSE(first.has_errors());
        const std::string once = serialize_workflow(first.records);
        const auto second = parse_workflow(once);
        REQUIRE_FALSE(second.has_errors());
        REQUIRE(second.records.size() == first.records.size());
        for (std::size_t i = 0; i < first.records.size(); ++i) {
            CHECK(second.records[i].metadata == first.records[i].metadata);
            CHECK(second.records[i].graph == normalize_sequences(first.records[i].graph));
        }
        CHECK(serialize_workflow(second.records) == once);
    }
}

TEST_CASE("property: round trip on random valid graphs") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const auto g = normalize_sequences(test::random_valid_atomic(rng));
        const WorkflowRecord w("r" + std::to_string(trial), g, {{"trial", std::to_string(trial)}});
        const auto back = parse_workflow(serialize_workflow({w}));
        REQUIRE(back.records.size() == 1);
        CHECK(back.records.front() == w);
    }
}

TEST_CASE("property: the parser is total and deterministic") {
    const std::string alphabet = "workflow{}\"\\:->#=metaresourcesartifactHTIAugG0123456789 \n\t\r\xc3\xa9!";
    std::mt19937 rng(99);
    const std::string base(kDirectGpt);
    for (int trial = 0; trial < 2000; ++trial) {
        std::string text;
        if (trial % 2 == 0) {
            const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 120)(rng);
            for (std::size_t i = 0; i < n; ++i) text += alphabet[rng() % alphabet.size()];
        } else {
            // Mutate the sample in a few places.
            text = base;
            for (int m = 0; m < 4; ++m) {
                const std::size_t at = rng() % text.size();
                text[at] = alphabet[rng() % alphabet.size()];
            }
        }
        const auto a = parse_workflow(text);
        const auto b = parse_workflow(text);
        CHECK(a.diagnostics == b.diagnostics);
        CHECK(a.records == b.records);
        for (const auto& d : a.diagnostics) {
            CHECK(d.span.line >= 1);
            CHECK(d.span.column >= 1);
        }
    }
}
