#include "hrt/errors.hpp"
#include "hrt/world.hpp"
#include "../support/fixtures.hpp"

#include <doctest.h>

using namespace hrt;
using hrt::testing::make_layout;
using hrt::testing::sample_layout;

TEST_CASE("load_layout parses the sample kitchen") {
    const auto l = sample_layout();
    CHECK(l->width == 5);
    CHECK(l->height == 5);
    // Counted by hand: three open cells in each of rows 1-3.
    CHECK(l->floor_cells().size() == 9);
    CHECK(l->starts[0] == GridPos{1, 1});
    CHECK(l->starts[1] == GridPos{3, 2});
    CHECK(l->at({2, 0}) == TileKind::OnionDispenser);
    CHECK(l->at({0, 2}) == TileKind::Pot);
    CHECK(l->at({4, 2}) == TileKind::ServeWindow);
    CHECK(l->at({2, 4}) == TileKind::DishDispenser);
    CHECK(l->orders.size() == 1);
    CHECK(l->orders[0].id == "onion_soup");
}

TEST_CASE("load_layout rejects bad input") {
    CHECK_THROWS_AS(load_layout("XXX\nX1X\nXXX\n"), ValidationError);
    CHECK_THROWS_AS(load_layout("XXOXX\nX1 ?X\nP  2S\nXXDXX\n"), ParseError);
    CHECK_THROWS_AS(load_layout("XXOXX\nX1 X\nP  2S\nXXDXX\n"), ParseError);
    CHECK_THROWS_AS(load_layout(""), ParseError);
    // Floor split in two by a wall.
    CHECK_THROWS_AS(load_layout("XXOXXX\nX1X  X\nP X 2S\nXXDXXX\n"), ValidationError);
    CHECK_THROWS_AS(load_layout("colour: red\nXXOXX\nX1  X\nP  2S\nXXDXX\n"), ParseError);
}

TEST_CASE("layout text round-trips") {
    const auto l = sample_layout();
    const Layout again = load_layout(l->to_text());
    CHECK(again.tiles == l->tiles);
    CHECK(again.starts == l->starts);
    CHECK(again.trial_ticks() == 300);
}

TEST_CASE("step: both Stay only advances the clock") {
    const WorldState w = WorldState::initial(sample_layout());
    const auto r = step(w, AtomicAction::Stay, AtomicAction::Stay);
    WorldState expect = w;
    expect.tick = 1;
    CHECK(r.world == expect);
    CHECK(r.events.empty());
}

TEST_CASE("step: swap and same-cell conflicts block both agents") {
    auto l = make_layout("XXOXX\nX12 X\nP   S\nXXDXX\n");
    WorldState w = WorldState::initial(l);
    auto r = step(w, AtomicAction::Right, AtomicAction::Left);
    CHECK(r.world.agent(AgentRole::Human).pos == GridPos{1, 1});
    CHECK(r.world.agent(AgentRole::Robot).pos == GridPos{2, 1});
    CHECK(r.world.agent(AgentRole::Human).facing == Direction::Right);
    CHECK(r.world.agent(AgentRole::Robot).facing == Direction::Left);

    auto l2 = make_layout("XXOXX\nX1 2X\nP   S\nXXDXX\n");
    r = step(WorldState::initial(l2), AtomicAction::Right, AtomicAction::Left);
    CHECK(r.world.agent(AgentRole::Human).pos == GridPos{1, 1});
    CHECK(r.world.agent(AgentRole::Robot).pos == GridPos{3, 1});
}

TEST_CASE("step: walking into a stationary agent is blocked, following is allowed") {
    auto l = make_layout("XXOXXX\nX12  X\nP    S\nXXDXXX\n");
    WorldState w = WorldState::initial(l);
    auto r = step(w, AtomicAction::Right, AtomicAction::Stay);
    CHECK(r.world.agent(AgentRole::Human).pos == GridPos{1, 1});
    r = step(w, AtomicAction::Right, AtomicAction::Right);
    CHECK(r.world.agent(AgentRole::Human).pos == GridPos{2, 1});
    CHECK(r.world.agent(AgentRole::Robot).pos == GridPos{3, 1});
}

TEST_CASE("step while paused throws") {
    WorldState w = WorldState::initial(sample_layout());
    w.paused = true;
    CHECK_THROWS_AS(step(w, AtomicAction::Stay, AtomicAction::Stay), SteppedWhilePaused);
}

namespace {

WorldState with_human(WorldState w, GridPos p, Direction f, Item held) {
    auto& h = w.agent(AgentRole::Human);
    h.pos = p;
    h.facing = f;
    h.held = held;
    return w;
}

} // namespace

TEST_CASE("interact table") {
    const WorldState base = WorldState::initial(sample_layout());

    SUBCASE("empty hands at onion dispenser pick an onion") {
        auto w = with_human(base, {2, 1}, Direction::Up, Item::none());
        auto r = step(w, AtomicAction::Interact, AtomicAction::Stay);
        CHECK(r.world.agent(AgentRole::Human).held.kind == ItemKind::Onion);
        REQUIRE(r.events.size() == 1);
        CHECK(r.events[0].kind == EventKind::PickedUp);
    }
    SUBCASE("holding an onion at the dispenser fails without change") {
        auto w = with_human(base, {2, 1}, Direction::Up, Item::of(ItemKind::Onion));
        auto r = step(w, AtomicAction::Interact, AtomicAction::Stay);
        CHECK(r.world.agent(AgentRole::Human).held.kind == ItemKind::Onion);
        REQUIRE(r.events.size() == 1);
        CHECK(r.events[0].kind == EventKind::InteractFailed);
    }
    SUBCASE("counter place then pick") {
        auto w = with_human(base, {1, 1}, Direction::Left, Item::of(ItemKind::Dish));
        auto r = step(w, AtomicAction::Interact, AtomicAction::Stay);
        CHECK(r.world.agent(AgentRole::Human).held.empty());
        REQUIRE(r.world.counter_item({0, 1}));
        CHECK(r.world.counter_item({0, 1})->kind == ItemKind::Dish);
        r = step(r.world, AtomicAction::Interact, AtomicAction::Stay);
        CHECK(r.world.agent(AgentRole::Human).held.kind == ItemKind::Dish);
        CHECK(r.world.counters.empty());
    }
    SUBCASE("pot: add, start, cook, take, serve") {
        auto w = with_human(base, {1, 2}, Direction::Left, Item::of(ItemKind::Onion));
        for (int i = 0; i < 3; ++i) {
            w = step(w, AtomicAction::Interact, AtomicAction::Stay).world;
            w.agent(AgentRole::Human).held = Item::of(ItemKind::Onion);
        }
        CHECK(w.pot_at({0, 2})->contents.count(Ingredient::Onion) == 3);
        // A fourth onion does not fit.
        auto full = step(w, AtomicAction::Interact, AtomicAction::Stay);
        CHECK(full.events[0].kind == EventKind::InteractFailed);

        w.agent(AgentRole::Human).held = Item::none();
        auto r = step(w, AtomicAction::Interact, AtomicAction::Stay);
        CHECK(r.events[0].kind == EventKind::CookStarted);
        CHECK(r.world.pot_at({0, 2})->phase == PotPhase::Cooking);
        CHECK(r.world.pot_at({0, 2})->remaining_ticks == 20);
        w = r.world;
        bool ready = false;
        for (int i = 0; i < 20; ++i) {
            r = step(w, AtomicAction::Stay, AtomicAction::Stay);
            w = r.world;
            for (const auto& e : r.events) ready = ready || e.kind == EventKind::SoupReady;
        }
        CHECK(ready);
        CHECK(w.pot_at({0, 2})->phase == PotPhase::Ready);

        w.agent(AgentRole::Human).held = Item::of(ItemKind::Dish);
        r = step(w, AtomicAction::Interact, AtomicAction::Stay);
        CHECK(r.world.agent(AgentRole::Human).held == Item::soup(Ingredients(3, 0)));
        CHECK(r.world.pot_at({0, 2})->phase == PotPhase::Idle);
        CHECK(r.world.pot_at({0, 2})->contents.empty());

        w = r.world;
        w.agent(AgentRole::Human).pos = {3, 1};
        w.agent(AgentRole::Robot).pos = {2, 2};
        w.agent(AgentRole::Human).facing = Direction::Right;
        // (4,1) is a counter; move down to face the serve window at (4,2).
        w = step(w, AtomicAction::Down, AtomicAction::Stay).world;
        w = step(w, AtomicAction::Right, AtomicAction::Stay).world;
        r = step(w, AtomicAction::Interact, AtomicAction::Stay);
        CHECK(r.world.score == 53);
        CHECK(r.world.deliveries == 1);
        CHECK(r.events[0].kind == EventKind::Delivered);
        CHECK(r.events[0].points == 53);
        CHECK(r.world.orders.size() == 1);
    }
}

TEST_CASE("score_delivery partial credit") {
    const std::vector<Recipe> orders{RecipeBook::standard().at("onion_soup")};
    CHECK(score_delivery(Ingredients(3, 0), orders) == 53);
    CHECK(score_delivery(Ingredients(2, 0), orders) == 35);
    CHECK(score_delivery(Ingredients(1, 0), orders) == 17);
    CHECK(score_delivery(Ingredients(0, 3), orders) == 0);
    CHECK(score_delivery(Ingredients(2, 1), orders) == 17);
    CHECK_THROWS_AS(score_delivery(Ingredients(3, 0), {}), NoActiveOrder);
    CHECK_THROWS_AS(score_delivery(Ingredients(), orders), std::invalid_argument);
}

TEST_CASE("legal_actions") {
    {
        // Hand-built so it skips validation: the human cell is walled in.
        auto boxed = std::make_shared<Layout>();
        boxed->width = 5;
        boxed->height = 3;
        boxed->tiles.assign(15, TileKind::Counter);
        boxed->tiles[6] = TileKind::Floor;  // (1,1)
        boxed->tiles[8] = TileKind::Floor;  // (3,1)
        boxed->starts = {GridPos{1, 1}, GridPos{3, 1}};
        WorldState bw = WorldState::initial(boxed);
        CHECK(legal_actions(bw, 0) == std::set<AtomicAction>{AtomicAction::Stay, AtomicAction::Interact});
    }
    const WorldState w = WorldState::initial(sample_layout());
    // Human at (1,1) facing the counter (1,0).
    auto human = legal_actions(w, 0);
    CHECK(human == std::set<AtomicAction>{AtomicAction::Right, AtomicAction::Down, AtomicAction::Stay,
                                          AtomicAction::Interact});
    CHECK_THROWS_AS(legal_actions(w, 2), UnknownAgent);
    CHECK_THROWS_AS(legal_actions(w, -1), UnknownAgent);

    // Robot in the middle of an open room, facing floor.
    auto room = make_layout("XXOXXXX\nX1    X\nP     S\nX  2  X\nX     X\nXXDXXXX\n");
    WorldState rw = WorldState::initial(room);
    CHECK(legal_actions(rw, 1) == std::set<AtomicAction>{AtomicAction::Up, AtomicAction::Down, AtomicAction::Left,
                                                         AtomicAction::Right, AtomicAction::Stay});
}

TEST_CASE("determinism of step") {
    WorldState a = WorldState::initial(sample_layout());
    WorldState b = a;
    const AtomicAction seq[] = {AtomicAction::Right, AtomicAction::Up, AtomicAction::Interact, AtomicAction::Down};
    for (AtomicAction h : seq) {
        auto ra = step(a, h, AtomicAction::Left);
        auto rb = step(b, h, AtomicAction::Left);
        CHECK(ra.world == rb.world);
        CHECK(ra.events == rb.events);
        a = ra.world;
        b = rb.world;
    }
}
