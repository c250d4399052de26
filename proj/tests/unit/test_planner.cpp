#include "hrt/planner.hpp"
#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "../support/random_layouts.hpp"

#include <doctest.h>

using namespace hrt;
using hrt::testing::make_layout;
using hrt::testing::sample_layout;

namespace {

AgentState agent_at(AgentRole r, GridPos p, Direction f) {
    AgentState a;
    a.role = r;
    a.pos = p;
    a.facing = f;
    return a;
}

} // namespace

TEST_CASE("plan: already facing the goal is a single Interact") {
    const auto l = sample_layout();
    PlanQuery q{l.get(), agent_at(AgentRole::Human, {2, 1}, Direction::Up), std::nullopt, {{2, 0}}};
    auto p = plan(q);
    REQUIRE(p);
    CHECK(p->actions == std::vector<AtomicAction>{AtomicAction::Interact});
    CHECK(p->cost() == 1);
    CHECK(p->goal == GridPos{2, 0});
}

TEST_CASE("plan: human start to onion dispenser on the sample layout") {
    const auto l = sample_layout();
    PlanQuery q{l.get(), agent_at(AgentRole::Human, {1, 1}, Direction::Up), std::nullopt, {{2, 0}}};
    auto p = plan(q);
    REQUIRE(p);
    // Frozen oracle value: Right, Up (turn only), Interact.
    CHECK(p->cost() == 3);
    CHECK(p->cost() == *testing::bfs_oracle_cost(*l, {1, 1}, 0, {{2, 0}}));
    CHECK(p->actions == std::vector<AtomicAction>{AtomicAction::Right, AtomicAction::Up, AtomicAction::Interact});
}

TEST_CASE("plan: blocked corridor") {
    auto l = make_layout("XXXXXXX\nO1 2  P\nXXXXSDX\n");
    PlanQuery q{l.get(), agent_at(AgentRole::Human, {1, 1}, Direction::Up),
                agent_at(AgentRole::Robot, {3, 1}, Direction::Up), {{6, 1}}};
    CHECK_FALSE(plan(q));
    q.treat_other_as = OtherAgent::Ignore;
    auto p = plan(q);
    REQUIRE(p);
    CHECK(p->cost() == 5);
}

TEST_CASE("plan: floor goal is rejected") {
    const auto l = sample_layout();
    PlanQuery q{l.get(), agent_at(AgentRole::Human, {1, 1}, Direction::Up), std::nullopt, {{2, 2}}};
    CHECK_THROWS_AS(plan(q), std::invalid_argument);
}

TEST_CASE("plan: equal-cost goals resolve to the smallest position") {
    // Counters left and right of the agent are both one turn away.
    auto l = make_layout("XXXXX\nOX1XP\nX 2 X\nXSXDX\n");
    PlanQuery q{l.get(), agent_at(AgentRole::Human, {2, 1}, Direction::Up), std::nullopt, {{3, 1}, {1, 1}}};
    auto p = plan(q);
    REQUIRE(p);
    CHECK(p->goal == GridPos{1, 1});
    CHECK(p->cost() == 2);
}

TEST_CASE("path_cost on the sample layout") {
    const auto l = sample_layout();
    // Onion dispenser to pot, frozen oracle value: from (2,1) go Down, Left, Interact.
    CHECK(path_cost(*l, {{2, 0}}, {{0, 2}}) == 3);
    CHECK(path_cost(*l, {{2, 0}}, {{0, 2}}) == *testing::bfs_oracle_cost(*l, {2, 1}, 2, {{0, 2}}));
    // Same-tile degenerate case costs only the Interact.
    CHECK(path_cost(*l, {{2, 0}}, {{2, 0}}) == 1);
    // Wall off the middle of a corridor after loading (the loader would refuse it).
    Layout split = load_layout("XXXXXXX\nO1   2P\nXXSXDXX\n");
    split.tiles[static_cast<std::size_t>(1 * split.width + 3)] = TileKind::Counter;
    CHECK(path_cost(split, {{0, 1}}, {{6, 1}}) == kUnreachable);
}

TEST_CASE("plan matches the BFS oracle on random layouts and replays through step") {
    std::mt19937 rng(20261014);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Layout layout = testing::random_layout(rng);
        auto shared = std::make_shared<const Layout>(layout);
        const auto fixtures = layout.fixtures();
        std::uniform_int_distribution<std::size_t> pick(0, fixtures.size() - 1);
        std::set<GridPos> goals;
        for (int k = 0; k < 2; ++k) goals.insert(fixtures[pick(rng)]);
        const int facing = static_cast<int>(rng() % 4);
        const bool with_other = rng() % 2;
        AgentState self = agent_at(AgentRole::Human, layout.starts[0], static_cast<Direction>(facing));
        AgentState other = agent_at(AgentRole::Robot, layout.starts[1], Direction::Up);

        PlanQuery q{shared.get(), self, std::nullopt, goals};
        if (with_other) q.other = other;
        auto p = plan(q);
        auto oracle = testing::bfs_oracle_cost(layout, self.pos, facing, goals,
                                               with_other ? std::optional<GridPos>(other.pos) : std::nullopt);
        REQUIRE(p.has_value() == oracle.has_value());
        if (!p) continue;
        CHECK(p->cost() == *oracle);
        ++checked;

        // Replay: the robot stays put, the human follows the plan.
        WorldState w = WorldState::initial(shared);
        w.agent(AgentRole::Human) = self;
        w.agent(AgentRole::Robot).pos = other.pos;
        if (!with_other) {
            // Park the robot out of the way by ignoring it in the check below.
            continue;
        }
        for (std::size_t i = 0; i + 1 < p->actions.size(); ++i)
            w = step(w, p->actions[i], AtomicAction::Stay).world;
        CHECK(goals.count(w.agent(AgentRole::Human).facing_cell()));
        CHECK(w.agent(AgentRole::Human).facing_cell() == p->goal);
    }
    CHECK(checked > 100);
}

TEST_CASE("plan_to_cell walks onto floor") {
    const auto l = sample_layout();
    auto p = plan_to_cell(*l, agent_at(AgentRole::Human, {1, 1}, Direction::Up), std::nullopt, {3, 3});
    REQUIRE(p);
    CHECK(p->cost() == 4);
    CHECK(p->actions.back() != AtomicAction::Interact);
    CHECK_FALSE(plan_to_cell(*l, agent_at(AgentRole::Human, {1, 1}, Direction::Up), std::nullopt, {0, 0}));
}
