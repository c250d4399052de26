#include "hrt/canonical_dag.hpp"
#include "hrt/errors.hpp"
#include "hrt/json_io.hpp"
#include "hrt/lang/backend.hpp"
#include "hrt/lang/render.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace hrt;
using namespace hrt::lang;
using hrt::testing::data_path;
using hrt::testing::sample_layout;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Bindings golden_bindings() {
    const json j = json::parse(slurp(data_path("tests/golden/bindings.json")));
    Bindings b;
    for (const auto& [k, v] : j.items()) b[k] = v.get<std::string>();
    return b;
}

} // namespace

TEST_CASE("templates ship byte-identical to prompts/") {
    for (TemplateId t : kTemplates) {
        const std::string file = slurp(data_path("prompts/" + std::string(template_name(t)) + ".txt"));
        CHECK(template_text(t) == file);
    }
}

TEST_CASE("rendered templates match golden files byte for byte") {
    const Bindings b = golden_bindings();
    for (TemplateId t : kTemplates) {
        CAPTURE(template_name(t));
        Bindings mine;
        for (const std::string& s : template_slots(t))
            if (b.count(s)) mine[s] = b.at(s);
        if (t == TemplateId::GraphRevision)
            for (std::string_view s : kSelfBoundSlots) mine.erase(std::string(s));
        const std::string golden = slurp(data_path("tests/golden/" + std::string(template_name(t)) + ".golden"));
        CHECK(render_template(t, mine) == golden);
    }
}

TEST_CASE("slot inventory per template") {
    using V = std::vector<std::string>;
    CHECK(template_slots(TemplateId::InitialGraph) == V{"recipe_book", "kitchen_items"});
    CHECK(template_slots(TemplateId::SubtaskAssignment) == V{"robot_state", "human_state", "graph_state"});
    CHECK(template_slots(TemplateId::StatusJudge).size() == 7);
    const V rev = template_slots(TemplateId::GraphRevision);
    CHECK(std::find(rev.begin(), rev.end(), "Human_message") != rev.end());
}

TEST_CASE("missing binding names the slot") {
    Bindings b{{"recipe_book", "x"}};
    try {
        (void)render_template(TemplateId::InitialGraph, b);
        FAIL("expected MissingSlot");
    } catch (const MissingSlot& e) {
        CHECK(e.slot == "kitchen_items");
    }
}

TEST_CASE("substitution is single pass and verbatim") {
    CHECK(render_text("a {x} b {y}", {{"x", "{y}"}, {"y", "Y"}}) == "a {y} b Y");
    CHECK(render_text("{ not a slot } {1x}", {}) == "{ not a slot } {1x}");
}

TEST_CASE("render helpers are pure") {
    const auto layout = sample_layout();
    const WorldState w = WorldState::initial(layout);
    const LocationTable loc(*layout);
    const SubtaskGraph g = canonical_dag(layout->orders.front(), *layout);
    CHECK(render_kitchen_items(w, loc) == render_kitchen_items(w, loc));
    CHECK(render_graph(g, loc) == render_graph(g, loc));
    CHECK(render_agent_state(w.agent(AgentRole::Human)) == "position (1, 1), facing up, holding nothing");
    CHECK(render_recipe_book(layout->orders).find("onion_soup") != std::string::npos);
    CHECK(render_task(g, std::nullopt, loc) == "none");
}

TEST_CASE("world json round-trips") {
    const auto layout = sample_layout();
    WorldState w = WorldState::initial(layout);
    w.agent(AgentRole::Human).held = Item{ItemKind::Onion, {}};
    w.counters[{0, 1}] = Item{ItemKind::Dish, {}};
    w.pots.front().contents.add(Ingredient::Onion, 2);
    w.tick = 17;
    w.score = 53;
    const WorldState back = world_from_json(json::parse(to_json(w).dump()), layout);
    CHECK(back == w);
}

TEST_CASE("graph state json round-trips") {
    const auto layout = sample_layout();
    const LocationTable loc(*layout);
    SubtaskGraph g = with_priorities(compute_edge_costs(canonical_dag(layout->orders.front(), *layout), *layout));
    g = add_temporary(g, "move to (3, 3)", {{3, 3}}, "robot should execute").first;
    const SubtaskGraph back = graph_from_state_json(json::parse(graph_state_json(g, loc).dump()), loc);
    CHECK(back == g);
    CHECK(back.version == g.version);
}

TEST_CASE("revision json round-trips") {
    const auto layout = sample_layout();
    const LocationTable loc(*layout);
    const std::vector<GraphRevision> rs = {
        rev::RemoveNode{3},
        rev::AddEdge{1, 6},
        rev::SplitNode{1, GridPos{0, 1}, 0},
        rev::SetAttribute{2, std::string("human prefers to do this task"), std::nullopt, std::nullopt, std::nullopt},
    };
    for (const GraphRevision& r : rs) CHECK(revision_from_json(to_json(r, loc), loc) == r);
    CHECK_THROWS_AS(revision_from_json(json{{"op", "teleport"}}, loc), ParseError);
}

TEST_CASE("schema validation") {
    CHECK_FALSE(validate_payload(SchemaId::Judge, json{{"finished_subtask_ids", {1, 2}}}));
    CHECK(validate_payload(SchemaId::Judge, json{{"finished_subtask_ids", {"a"}}}));
    CHECK_FALSE(validate_payload(SchemaId::Assignment,
                                 json{{"robot_subtask_id", 2}, {"human_subtask_id", nullptr}, {"message_to_human", ""}}));
    CHECK(validate_payload(SchemaId::Assignment, json{{"robot_subtask_id", 2}}));
    CHECK(validate_payload(SchemaId::GraphRevision, json{{"query_type", 7}, {"message", ""}}));
    CHECK_FALSE(validate_payload(SchemaId::GraphRevision, json{{"query_type", 2}, {"message", "ok"}}));

    std::string why;
    const auto p = payload_from_text(SchemaId::Judge, "Sure!\n```json\n{\"finished_subtask_ids\": [4]}\n```", &why);
    REQUIRE(p);
    CHECK(judge_from_payload(*p).finished == std::vector<SubtaskId>{4});
    CHECK_FALSE(payload_from_text(SchemaId::Judge, "no json here", &why));
    CHECK(why == "no JSON block found");
}

TEST_CASE("request fingerprint ignores the structured context") {
    BackendRequest a;
    a.system = "s";
    a.user = "u";
    BackendRequest b = a;
    b.context = json{{"anything", 1}};
    CHECK(a.fingerprint() == b.fingerprint());
    b.seed = 1;
    CHECK(a.fingerprint() != b.fingerprint());
}
