#include "hrt/world.hpp"
#include "hrt/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace hrt {

std::string_view to_string(AtomicAction a) {
    switch (a) {
    case AtomicAction::Up: return "up";
    case AtomicAction::Down: return "down";
    case AtomicAction::Left: return "left";
    case AtomicAction::Right: return "right";
    case AtomicAction::Stay: return "stay";
    case AtomicAction::Interact: return "interact";
    }
    return "?";
}

std::optional<AtomicAction> action_from_string(std::string_view s) {
    for (AtomicAction a : kAtomicActions)
        if (to_string(a) == s) return a;
    return std::nullopt;
}

std::optional<Direction> direction_of(AtomicAction a) {
    switch (a) {
    case AtomicAction::Up: return Direction::Up;
    case AtomicAction::Down: return Direction::Down;
    case AtomicAction::Left: return Direction::Left;
    case AtomicAction::Right: return Direction::Right;
    default: return std::nullopt;
    }
}

AtomicAction move_action(Direction d) {
    switch (d) {
    case Direction::Up: return AtomicAction::Up;
    case Direction::Down: return AtomicAction::Down;
    case Direction::Left: return AtomicAction::Left;
    case Direction::Right: return AtomicAction::Right;
    }
    return AtomicAction::Stay;
}

std::string_view to_string(PotPhase p) {
    switch (p) {
    case PotPhase::Idle: return "idle";
    case PotPhase::Cooking: return "cooking";
    case PotPhase::Ready: return "ready";
    }
    return "?";
}

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::Moved: return "Moved";
    case EventKind::PickedUp: return "PickedUp";
    case EventKind::Placed: return "Placed";
    case EventKind::CookStarted: return "CookStarted";
    case EventKind::SoupReady: return "SoupReady";
    case EventKind::Delivered: return "Delivered";
    case EventKind::InteractFailed: return "InteractFailed";
    }
    return "?";
}

std::string_view to_string(InteractResult r) {
    switch (r) {
    case InteractResult::PickIngredient: return "pick_ingredient";
    case InteractResult::PickDish: return "pick_dish";
    case InteractResult::PlaceOnCounter: return "place_on_counter";
    case InteractResult::PickFromCounter: return "pick_from_counter";
    case InteractResult::AddToPot: return "add_to_pot";
    case InteractResult::StartCooking: return "start_cooking";
    case InteractResult::TakeSoup: return "take_soup";
    case InteractResult::Deliver: return "deliver";
    case InteractResult::Failed: return "failed";
    }
    return "?";
}

WorldState WorldState::initial(std::shared_ptr<const Layout> layout) {
    if (!layout) throw std::invalid_argument("WorldState::initial needs a layout");
    WorldState w;
    for (int i = 0; i < kAgentCount; ++i) {
        AgentState& a = w.agents[static_cast<std::size_t>(i)];
        a.role = static_cast<AgentRole>(i);
        a.pos = layout->starts[static_cast<std::size_t>(i)];
        a.facing = Direction::Up;
    }
    for (GridPos p : layout->cells_of(TileKind::Pot)) w.pots.push_back(PotState{p, {}, PotPhase::Idle, 0});
    w.orders = layout->orders;
    w.layout = std::move(layout);
    return w;
}

const AgentState& WorldState::agent(int id) const {
    if (id < 0 || id >= kAgentCount) throw UnknownAgent(id);
    return agents[static_cast<std::size_t>(id)];
}

const PotState* WorldState::pot_at(GridPos p) const {
    for (const PotState& pot : pots)
        if (pot.pos == p) return &pot;
    return nullptr;
}

PotState* WorldState::pot_at(GridPos p) {
    for (PotState& pot : pots)
        if (pot.pos == p) return &pot;
    return nullptr;
}

const Item* WorldState::counter_item(GridPos p) const {
    auto it = counters.find(p);
    return it == counters.end() ? nullptr : &it->second;
}

bool WorldState::operator==(const WorldState& o) const {
    return layout == o.layout && agents == o.agents && pots == o.pots && counters == o.counters &&
           orders == o.orders && next_order == o.next_order && score == o.score && deliveries == o.deliveries &&
           tick == o.tick && paused == o.paused;
}

int score_against(const Ingredients& soup, const Recipe& recipe) {
    const int matched = soup.overlap(recipe.required);
    const int wrong = soup.size() - matched;
    const int credit = std::max(0, matched - wrong);
    return recipe.points * credit / recipe.required.size();
}

namespace {

// Index of the order a soup would be scored against: highest points, oldest on ties.
std::size_t best_order(const Ingredients& soup, const std::vector<Recipe>& orders) {
    std::size_t best = 0;
    int best_points = -1;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        const int pts = score_against(soup, orders[i]);
        if (pts > best_points) {
            best_points = pts;
            best = i;
        }
    }
    return best;
}

} // namespace

int score_delivery(const Ingredients& soup, const std::vector<Recipe>& orders) {
    if (soup.empty()) throw std::invalid_argument("cannot score an empty soup");
    if (orders.empty()) throw NoActiveOrder();
    return score_against(soup, orders[best_order(soup, orders)]);
}

InteractOutcome interact_outcome(const WorldState& w, const AgentState& agent) {
    const Layout& layout = *w.layout;
    InteractOutcome out;
    out.target = agent.facing_cell();
    out.held_after = agent.held;
    if (!layout.in_bounds(out.target)) return out;

    const Item& held = agent.held;
    switch (layout.at(out.target)) {
    case TileKind::Floor: break;
    case TileKind::OnionDispenser:
        if (held.empty()) return {InteractResult::PickIngredient, out.target, Item::of(ItemKind::Onion), 0};
        break;
    case TileKind::TomatoDispenser:
        if (held.empty()) return {InteractResult::PickIngredient, out.target, Item::of(ItemKind::Tomato), 0};
        break;
    case TileKind::DishDispenser:
        if (held.empty()) return {InteractResult::PickDish, out.target, Item::of(ItemKind::Dish), 0};
        break;
    case TileKind::Counter: {
        const Item* resting = w.counter_item(out.target);
        if (resting && held.empty()) return {InteractResult::PickFromCounter, out.target, *resting, 0};
        if (!resting && !held.empty()) return {InteractResult::PlaceOnCounter, out.target, Item::none(), 0};
        break;
    }
    case TileKind::Pot: {
        const PotState* pot = w.pot_at(out.target);
        if (!pot) break;
        if (ingredient_of(held.kind) && pot->phase == PotPhase::Idle && pot->contents.size() < layout.pot_capacity)
            return {InteractResult::AddToPot, out.target, Item::none(), 0};
        if (held.empty() && pot->phase == PotPhase::Idle && !pot->contents.empty())
            return {InteractResult::StartCooking, out.target, Item::none(), 0};
        if (held.kind == ItemKind::Dish && pot->phase == PotPhase::Ready)
            return {InteractResult::TakeSoup, out.target, Item::soup(pot->contents), 0};
        break;
    }
    case TileKind::ServeWindow:
        if (held.kind == ItemKind::Soup && !held.contents.empty() && !w.orders.empty())
            return {InteractResult::Deliver, out.target, Item::none(), score_delivery(held.contents, w.orders)};
        break;
    }
    return out;
}

namespace {

void apply_interact(WorldState& w, int id, std::vector<WorldEvent>& events, const WorldConfig& cfg,
                    std::vector<GridPos>& started) {
    AgentState& agent = w.agents[static_cast<std::size_t>(id)];
    const InteractOutcome out = interact_outcome(w, agent);
    WorldEvent ev;
    ev.agent = id;
    ev.from = agent.pos;
    ev.to = out.target;

    switch (out.result) {
    case InteractResult::PickIngredient:
    case InteractResult::PickDish:
        ev.kind = EventKind::PickedUp;
        ev.item = out.held_after;
        break;
    case InteractResult::PickFromCounter:
        ev.kind = EventKind::PickedUp;
        ev.item = out.held_after;
        w.counters.erase(out.target);
        break;
    case InteractResult::PlaceOnCounter:
        ev.kind = EventKind::Placed;
        ev.item = agent.held;
        w.counters[out.target] = agent.held;
        break;
    case InteractResult::AddToPot: {
        ev.kind = EventKind::Placed;
        ev.item = agent.held;
        w.pot_at(out.target)->contents.add(*ingredient_of(agent.held.kind));
        break;
    }
    case InteractResult::StartCooking: {
        PotState& pot = *w.pot_at(out.target);
        int ticks = cfg.default_cook_ticks;
        if (!w.orders.empty()) ticks = w.orders[best_order(pot.contents, w.orders)].cook_ticks;
        pot.phase = PotPhase::Cooking;
        pot.remaining_ticks = std::max(1, ticks);
        started.push_back(pot.pos);
        ev.kind = EventKind::CookStarted;
        ev.item = Item::soup(pot.contents);
        break;
    }
    case InteractResult::TakeSoup: {
        PotState& pot = *w.pot_at(out.target);
        ev.kind = EventKind::PickedUp;
        ev.item = out.held_after;
        pot = PotState{pot.pos, {}, PotPhase::Idle, 0};
        break;
    }
    case InteractResult::Deliver: {
        ev.kind = EventKind::Delivered;
        ev.item = agent.held;
        ev.points = out.points;
        const std::size_t idx = best_order(agent.held.contents, w.orders);
        w.orders.erase(w.orders.begin() + static_cast<std::ptrdiff_t>(idx));
        const auto& rotation = w.layout->orders;
        if (!rotation.empty()) {
            w.orders.push_back(rotation[w.next_order % rotation.size()]);
            ++w.next_order;
        }
        w.score += out.points;
        ++w.deliveries;
        break;
    }
    case InteractResult::Failed:
        ev.kind = EventKind::InteractFailed;
        break;
    }
    agent.held = out.held_after;
    events.push_back(ev);
}

} // namespace

StepResult step(const WorldState& w, AtomicAction human, AtomicAction robot, const WorldConfig& cfg) {
    if (w.paused) throw SteppedWhilePaused();
    StepResult r{w, {}};
    WorldState& s = r.world;
    const Layout& layout = *s.layout;
    const std::array<AtomicAction, kAgentCount> actions{human, robot};

    std::vector<GridPos> started;
    for (int i = 0; i < kAgentCount; ++i)
        if (actions[static_cast<std::size_t>(i)] == AtomicAction::Interact) apply_interact(s, i, r.events, cfg, started);

    // Movement: turn toward the requested direction, step only if the cell is free floor.
    std::array<GridPos, kAgentCount> origin{s.agents[0].pos, s.agents[1].pos};
    std::array<GridPos, kAgentCount> intended = origin;
    for (int i = 0; i < kAgentCount; ++i) {
        const auto dir = direction_of(actions[static_cast<std::size_t>(i)]);
        if (!dir) continue;
        AgentState& a = s.agents[static_cast<std::size_t>(i)];
        a.facing = *dir;
        const GridPos target = neighbor(a.pos, *dir);
        if (layout.is_floor(target)) intended[static_cast<std::size_t>(i)] = target;
    }
    const bool same_cell = intended[0] == intended[1];
    const bool swap = intended[0] == origin[1] && intended[1] == origin[0];
    if (!same_cell && !swap) {
        for (int i = 0; i < kAgentCount; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const auto other_idx = static_cast<std::size_t>(1 - i);
            if (intended[idx] == origin[idx]) continue;
            // Walking into a cell whose occupant stays put is blocked; following is fine.
            if (intended[idx] == origin[other_idx] && intended[other_idx] == origin[other_idx]) continue;
            s.agents[idx].pos = intended[idx];
            WorldEvent ev;
            ev.kind = EventKind::Moved;
            ev.agent = i;
            ev.from = origin[idx];
            ev.to = intended[idx];
            r.events.push_back(ev);
        }
    }

    for (PotState& pot : s.pots) {
        if (pot.phase != PotPhase::Cooking) continue;
        if (std::find(started.begin(), started.end(), pot.pos) != started.end()) continue;
        if (--pot.remaining_ticks <= 0) {
            pot.remaining_ticks = 0;
            pot.phase = PotPhase::Ready;
            WorldEvent ev;
            ev.kind = EventKind::SoupReady;
            ev.from = pot.pos;
            ev.to = pot.pos;
            ev.item = Item::soup(pot.contents);
            r.events.push_back(ev);
        }
    }

    ++s.tick;
    return r;
}

std::set<AtomicAction> legal_actions(const WorldState& w, int agent_id) {
    const AgentState& a = w.agent(agent_id);
    const AgentState& o = w.agent(1 - agent_id);
    std::set<AtomicAction> out{AtomicAction::Stay};
    for (Direction d : kDirections) {
        const GridPos n = neighbor(a.pos, d);
        if (w.layout->is_floor(n) && n != o.pos) out.insert(move_action(d));
    }
    const GridPos f = a.facing_cell();
    if (w.layout->in_bounds(f) && w.layout->at(f) != TileKind::Floor) out.insert(AtomicAction::Interact);
    return out;
}

bool has_effect(const WorldState& w, int agent_id, AtomicAction a) {
    const auto legal = legal_actions(w, agent_id);
    if (legal.count(a)) return true;
    const auto dir = direction_of(a);
    return dir && *dir != w.agent(agent_id).facing;
}

std::string render_ascii(const WorldState& w) {
    std::vector<std::string> rows = w.layout->rows();
    for (int y = 0; y < w.layout->height; ++y)
        for (int x = 0; x < w.layout->width; ++x)
            if (rows[y][x] == '1' || rows[y][x] == '2') rows[y][x] = ' ';
    for (const auto& [pos, item] : w.counters) {
        char c = '?';
        switch (item.kind) {
        case ItemKind::Onion: c = 'o'; break;
        case ItemKind::Tomato: c = 't'; break;
        case ItemKind::Dish: c = 'd'; break;
        case ItemKind::Soup: c = 's'; break;
        case ItemKind::None: c = 'X'; break;
        }
        rows[pos.y][pos.x] = c;
    }
    for (const AgentState& a : w.agents) rows[a.pos.y][a.pos.x] = static_cast<char>('1' + a.id());
    std::string out;
    for (const auto& r : rows) out += r + '\n';
    return out;
}

} // namespace hrt
