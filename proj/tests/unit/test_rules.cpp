#include "hrt/canonical_dag.hpp"
#include "hrt/coordinator_rules.hpp"
#include "hrt/manager_rules.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>

using namespace hrt;
using hrt::testing::data_path;
using hrt::testing::sample_layout;

namespace {

SubtaskGraph soup_graph(const Layout& l, const char* recipe = "onion_soup") {
    return recost(canonical_dag(RecipeBook::standard().at(recipe), l), l);
}

WorldState walk(WorldState w, std::initializer_list<AtomicAction> human) {
    for (AtomicAction a : human) w = step(w, a, AtomicAction::Stay).world;
    return w;
}

} // namespace

TEST_CASE("preference notes bind a task to an agent") {
    CHECK(preferred_agent("the human will do it") == AgentRole::Human);
    CHECK(preferred_agent("Robot first, then the human") == AgentRole::Robot);
    CHECK(!preferred_agent("anyone"));
}

TEST_CASE("rule allocation hands out distinct ready tasks, robot first") {
    const auto l = sample_layout();
    const SubtaskGraph g = soup_graph(*l);
    const WorldState w = WorldState::initial(l);
    const RuleAllocation a = rule_allocate(g, w, {});
    REQUIRE(a.picks[0]);
    REQUIRE(a.picks[1]);
    CHECK(*a.picks[0] != *a.picks[1]);
    for (const auto& p : a.picks) CHECK(g.node(*p).status == SubtaskStatus::ReadyToExecute);
    CHECK(!a.nothing_assignable);

    // A busy agent keeps its task.
    const RuleAllocation kept = rule_allocate(g, w, {std::optional<SubtaskId>{7}, std::nullopt});
    CHECK(kept.picks[0] == 7);
    CHECK(kept.picks[1] != 7);

    // Exclusions are honoured.
    const RuleAllocation ex = rule_allocate(g, w, {}, {{index_of(AgentRole::Robot), *a.picks[1]}});
    CHECK(ex.picks[1] != a.picks[1]);
}

TEST_CASE("an emergency task goes first") {
    const auto l = sample_layout();
    auto [g, id] = add_temporary(soup_graph(*l), "move to (2, 2)", {GridPos{2, 2}}, "for the robot");
    CHECK(g.node(id).status == SubtaskStatus::Emergency);
    const RuleAllocation a = rule_allocate(g, WorldState::initial(l), {});
    CHECK(a.picks[1] == id);
}

TEST_CASE("corrections replace picks that break the hard rules") {
    const auto l = sample_layout();
    const SubtaskGraph g = soup_graph(*l);
    const WorldState w = WorldState::initial(l);
    std::vector<std::string> why;
    const AssignedPair fixed = correct_allocation(g, w, {}, {std::optional<SubtaskId>{9}, std::optional<SubtaskId>{0}}, &why);
    CHECK(!why.empty());
    REQUIRE(fixed[0]);
    CHECK(*fixed[0] != 9);
    CHECK(fixed[1] == 0);
    CHECK(hard_eligible(g, 9, w, AgentRole::Human).ok == false);
    CHECK(hard_eligible(g, 0, w, AgentRole::Human).ok);

    why.clear();
    const AssignedPair same = correct_allocation(g, w, {}, {std::optional<SubtaskId>{0}, std::optional<SubtaskId>{0}}, &why);
    CHECK(!why.empty());
    CHECK(same[0] != same[1]);
}

TEST_CASE("instruction text names the task and its place") {
    const auto l = sample_layout();
    const SubtaskGraph g = soup_graph(*l);
    CHECK(instruction_text(g, {std::optional<SubtaskId>{0}, std::nullopt}) == "Please pick onion at (2, 0).");
    CHECK(!instruction_text(g, {}).empty());
}

TEST_CASE("rule judge credits the agent that changed the world") {
    const auto l = sample_layout();
    const SubtaskGraph g = soup_graph(*l);
    // Human at (1,1): step right under the onion dispenser, face it, pick.
    const WorldState before = walk(WorldState::initial(l), {AtomicAction::Right, AtomicAction::Up});
    const WorldState after = step(before, AtomicAction::Interact, AtomicAction::Stay).world;
    REQUIRE(after.agent(AgentRole::Human).held.kind == ItemKind::Onion);

    const RuleVerdict assigned = rule_judge(g, before, after, {std::optional<SubtaskId>{0}, std::nullopt}, {true, false});
    CHECK(assigned.finished == std::vector<SubtaskId>{0});
    CHECK(!assigned.off_script);

    const RuleVerdict other = rule_judge(g, before, after, {std::optional<SubtaskId>{7}, std::nullopt}, {true, false});
    REQUIRE(other.finished.size() == 1);
    CHECK(g.node(other.finished[0]).name == "pick onion");
    CHECK(other.off_script);

    CHECK(rule_judge(g, before, after, {}, {false, false}).finished.empty());
}

TEST_CASE("request classification") {
    CHECK(classify_rule("hello") == QueryKind::Unclear);
    CHECK(classify_rule("") == QueryKind::Unclear);
    CHECK(classify_rule("I'll get the dish") == QueryKind::AttributeChange);
    CHECK(classify_rule("put onions on counter (3,3), I'll take them") == QueryKind::StructureChange);
    CHECK(classify_rule("move to (2,2)") == QueryKind::TemporaryTask);
    CHECK(coordinates_in("from (1, 2) to 3,4") == std::vector<GridPos>{{1, 2}, {3, 4}});
    CHECK(coordinates_in("no numbers").empty());
}

TEST_CASE("a hand-off request becomes a split") {
    const Layout l = load_layout_file(data_path("data/layouts/medium.layout"));
    const SubtaskGraph g = soup_graph(l);
    const LocationTable loc(l);
    const json r = rule_revision("put onions on counter (5,2), I'll take them", g, l, loc);
    CHECK(r.at("query_type") == 1);
    bool split = false;
    for (const json& op : r.at("revisions")) split |= op.value("op", "") == "split_node";
    CHECK(split);
}

TEST_CASE("split analysis shrinks the longest leg") {
    const Layout l = load_layout_file(data_path("data/layouts/medium.layout"));
    const SubtaskGraph g = soup_graph(l);
    const SplitAnalysis s = analyze_splits(g, l);
    CHECK(s.max_edge_cost > 0);
    CHECK(!s.max_edges.empty());
    for (const SplitOption& o : s.proposal) {
        CHECK(l.at(o.counter) == TileKind::Counter);
        CHECK(o.max_leg() < s.max_edge_cost);
    }
}
