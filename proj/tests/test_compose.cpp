#include <doctest.h>

#include "iai/compose.hpp"
#include "iai/match.hpp"
#include "support.hpp"

using namespace iai;
using iai::test::paradigm;

namespace {

// Segment labels of a workflow, "novel" where nothing matches.
std::vector<std::string> labels(const WorkflowRecord& w) {
    std::vector<std::string> out;
    for (const Segment& s : decompose(w)) {
        const auto c = classify_against_catalog(s.graph, s.carried, default_catalog());
        out.push_back(c.matched() ? c.paradigm : "novel");
    }
    return out;
}

// Oracle for refusal: b needs an artifact it cannot declare and a has none at its end.
bool a_ends_with_artifact(const ParadigmGraph& a) {
    bool active = a.exogenous_artifact();
    for (const Edge& e : a.edges()) active = active || e.target() == Entity::A;
    return active;
}

}  // namespace

TEST_CASE("chain P5 then P8") {
    const auto w = chain(paradigm("P5"), paradigm("P8"));
    CHECK(w.graph.size() == paradigm("P5").size() + paradigm("P8").size() - 1);
    CHECK(w.graph.size() == 10);
    CHECK(w.metadata.at("handoff") == "{T}");
    CHECK(validate(w.graph, Profile::Workflow).passes());
    CHECK(invocation_seqs(w.graph).size() == 2);
    CHECK(handoff(paradigm("P5"), paradigm("P8")) == EntitySet{Entity::T});
    CHECK(w.name == "chain");
    CHECK(labels(w) == std::vector<std::string>{"P5", "P8"});
}

TEST_CASE("chain hands over a generated artifact") {
    const auto w = chain(paradigm("P1"), paradigm("P4"), "p1p4");
    CHECK(w.name == "p1p4");
    CHECK(w.metadata.at("handoff") == "{A}");
    CHECK_FALSE(w.graph.exogenous_artifact());
    CHECK(w.graph.size() == paradigm("P1").size() + paradigm("P4").size());
}

TEST_CASE("chain with nothing to hand over") {
    const auto w = chain(paradigm("P8"), paradigm("P1"));
    CHECK(w.metadata.at("handoff") == "{}");
    CHECK(validate(w.graph, Profile::Workflow).passes());
    CHECK(labels(w) == std::vector<std::string>{"P8", "P1"});
}

TEST_CASE("chain refuses an artifact-grounded step with no artifact") {
    CHECK_THROWS_WITH_AS(chain(paradigm("P5"), paradigm("P4")), doctest::Contains("A"), ComposeError);
    CHECK_THROWS_AS(handoff(paradigm("P7"), paradigm("P12")), ComposeError);
}

TEST_CASE("chain rejects invalid operands") {
    const auto bad = build_graph({{Entity::H, Entity::I, 1}, {Entity::I, Entity::T, 2}}, false);
    CHECK_THROWS_AS(chain(bad, paradigm("P1")), ComposeError);
    CHECK_THROWS_AS(chain(paradigm("P1"), bad), ComposeError);
    // A workflow is not an acceptable right operand.
    CHECK_THROWS_AS(chain(paradigm("P1"), chain(paradigm("P5"), paradigm("P8")).graph), ComposeError);
}

TEST_CASE("every pair and triple of paradigms round-trips through decompose") {
    const Catalog& c = default_catalog();
    std::size_t ok = 0, refused = 0;
    for (const auto& a : c) {
        for (const auto& b : c) {
            const bool should_refuse = b.graph.exogenous_artifact() && !a_ends_with_artifact(a.graph);
            WorkflowRecord w("x", a.graph);
            try {
                w = chain(a.graph, b.graph);
            } catch (const ComposeError&) {
                CHECK_MESSAGE(should_refuse, a.id << " " << b.id);
                ++refused;
                continue;
            }
            CHECK_FALSE(should_refuse);
            CHECK_MESSAGE((labels(w) == std::vector<std::string>{a.id, b.id}), a.id << " " << b.id);
            ++ok;

            for (const auto& x : c) {
                try {
                    const auto w3 = chain(w.graph, x.graph);
                    CHECK_MESSAGE((labels(w3) == std::vector<std::string>{a.id, b.id, x.id}), a.id << b.id << x.id);
                } catch (const ComposeError&) {
                    CHECK(x.graph.exogenous_artifact());
                    CHECK_FALSE(a_ends_with_artifact(w.graph));
                }
            }
        }
    }
    CHECK(ok == 129);
    CHECK(refused == 15);
}

TEST_CASE("edits") {
    SUBCASE("clearing P4's exogenous flag breaks activation at I->A") {
        const auto r = apply_edit(paradigm("P4"), SetExogenous{false});
        CHECK_FALSE(r.report.passes());
        REQUIRE(r.report.has(Rule::R4_CausalActivation));
        CHECK(r.graph[*r.report.findings.front().edge].relation == EntityPair{Entity::I, Entity::A});
    }
    SUBCASE("P11 without its opening prompt leaves T->Aug unactivated") {
        const std::vector<EditOp> ops = {RemoveEdge{{Entity::H, Entity::T}}, RemoveEdge{{Entity::T, Entity::G}}};
        const auto r = apply_edits(paradigm("P11"), ops);
        CHECK(r.graph.exogenous_artifact());
        CHECK(invocation_seqs(r.graph) == std::vector<int>{2});
        CHECK(r.graph[0].relation == EntityPair{Entity::A, Entity::G});
        CHECK_FALSE(classify_against_catalog(r.graph, {}, default_catalog()).matched());
        // The catalog P11 folds the original prompt into Aug, and nothing else introduces T.
        REQUIRE(r.report.count(Rule::R4_CausalActivation) == 1);
        CHECK(r.graph[*r.report.findings.front().edge].relation == EntityPair{Entity::T, Entity::Aug});

        // Re-introducing the prompt alongside the answer gives the AI-initiated graph.
        const auto fixed = apply_edit(r.graph, AddEdge{{Entity::H, Entity::T}, 3});
        CHECK(fixed.report.passes());
        CHECK_FALSE(classify_against_catalog(fixed.graph, {}, default_catalog()).matched());
    }
    SUBCASE("removing an absent relation warns and changes nothing") {
        const auto r = apply_edit(paradigm("P1"), RemoveEdge{{Entity::A, Entity::G}});
        CHECK(r.graph == paradigm("P1"));
        CHECK(r.report.passes());
        CHECK(r.report.count(Rule::E1_EditNoop) == 1);
        CHECK(r.report.warning_count() == 1);
    }
    SUBCASE("adds join their seq group at the end") {
        const auto r = apply_edit(paradigm("P1"), AddEdge{{Entity::I, Entity::Aug}, 2});
        CHECK(to_string(r.graph) == "H->T@1; H->I@2; I->T@2; I->Aug@2; T->G@3; G->A@4");
        CHECK(r.report.has(Rule::R7_AugComposition));
    }
    SUBCASE("refusals") {
        CHECK_THROWS_AS(apply_edit(paradigm("P1"), AddEdge{{Entity::H, Entity::I}, 0}), ComposeError);
        const auto one = build_graph({{Entity::H, Entity::T, 1}}, false);
        CHECK_THROWS_AS(apply_edit(one, RemoveEdge{{Entity::H, Entity::T}}), ComposeError);
    }
    SUBCASE("op rendering") {
        CHECK(to_string(EditOp{AddEdge{{Entity::I, Entity::Aug}, 2}}) == "add I->Aug@2");
        CHECK(to_string(EditOp{RemoveEdge{{Entity::H, Entity::T}}}) == "remove H->T");
        CHECK(to_string(EditOp{SetExogenous{true}}) == "exogenous true");
    }
}

TEST_CASE("property: add then remove restores the graph") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const auto g = test::random_valid_atomic(rng);
        const EntityPair rel = kWhitelist[rng() % kRelationCount];
        if (g.contains(rel)) continue;
        const int seq = std::uniform_int_distribution<int>(1, g.max_seq() + 1)(rng);
        const auto added = apply_edit(g, AddEdge{rel, seq});
        CHECK(added.graph.size() == g.size() + 1);
        const auto back = apply_edit(added.graph, RemoveEdge{rel});
        CHECK(back.graph == g);
        CHECK(back.report == validate(g, Profile::Atomic));

        const auto flipped = apply_edits(g, std::vector<EditOp>{SetExogenous{!g.exogenous_artifact()},
                                                                SetExogenous{g.exogenous_artifact()}});
        CHECK(flipped.graph == g);
    }
}
