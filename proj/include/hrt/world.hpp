#pragma once

#include "hrt/layout.hpp"

#include <array>
#include <map>
#include <memory>
#include <set>
#include <vector>

namespace hrt {

enum class AtomicAction : std::uint8_t { Up, Down, Left, Right, Stay, Interact };

inline constexpr std::array<AtomicAction, 6> kAtomicActions{AtomicAction::Up,   AtomicAction::Down,
                                                            AtomicAction::Left, AtomicAction::Right,
                                                            AtomicAction::Stay, AtomicAction::Interact};

std::string_view to_string(AtomicAction a);
std::optional<AtomicAction> action_from_string(std::string_view s);
std::optional<Direction> direction_of(AtomicAction a);
AtomicAction move_action(Direction d);

struct AgentState {
    AgentRole role = AgentRole::Human;
    GridPos pos{};
    Direction facing = Direction::Up;
    Item held{};

    int id() const { return index_of(role); }
    GridPos facing_cell() const { return neighbor(pos, facing); }

    auto operator<=>(const AgentState&) const = default;
};

enum class PotPhase : std::uint8_t { Idle, Cooking, Ready };

std::string_view to_string(PotPhase p);

struct PotState {
    GridPos pos{};
    Ingredients contents{};
    PotPhase phase = PotPhase::Idle;
    int remaining_ticks = 0; // > 0 exactly while Cooking

    auto operator<=>(const PotState&) const = default;
};

enum class EventKind : std::uint8_t { Moved, PickedUp, Placed, CookStarted, SoupReady, Delivered, InteractFailed };

std::string_view to_string(EventKind k);

struct WorldEvent {
    EventKind kind = EventKind::Moved;
    int agent = -1;  // -1 for events raised by a pot
    GridPos from{};  // Moved: origin cell; otherwise the agent's cell (or the pot)
    GridPos to{};    // Moved: destination; interact events: the tile acted on
    Item item{};     // PickedUp / Placed / Delivered: the item involved
    int points = 0;  // Delivered

    auto operator<=>(const WorldEvent&) const = default;
};

struct WorldConfig {
    int default_cook_ticks = 20;
};

/// Full kitchen snapshot. Value type: copies are independent.
struct WorldState {
    std::shared_ptr<const Layout> layout;
    std::array<AgentState, kAgentCount> agents{};
    std::vector<PotState> pots;
    std::map<GridPos, Item> counters; // items resting on Counter tiles
    std::vector<Recipe> orders;       // active orders, oldest first
    std::size_t next_order = 0;       // rotation index into layout->orders
    int score = 0;
    int deliveries = 0;
    int tick = 0;
    bool paused = false;

    static WorldState initial(std::shared_ptr<const Layout> layout);

    const AgentState& agent(int id) const;
    const AgentState& agent(AgentRole r) const { return agents[static_cast<std::size_t>(index_of(r))]; }
    AgentState& agent(AgentRole r) { return agents[static_cast<std::size_t>(index_of(r))]; }
    const PotState* pot_at(GridPos p) const;
    PotState* pot_at(GridPos p);
    const Item* counter_item(GridPos p) const;

    /// Equality over all dynamic state; the layout is compared by identity.
    bool operator==(const WorldState& other) const;
};

struct StepResult {
    WorldState world;
    std::vector<WorldEvent> events;
};

/// Advances the world by one tick. Interactions resolve first (human, then
/// robot), then simultaneous movement, then pot timers. Throws
/// SteppedWhilePaused when `w.paused`.
StepResult step(const WorldState& w, AtomicAction human, AtomicAction robot, const WorldConfig& cfg = {});

enum class InteractResult : std::uint8_t {
    PickIngredient,
    PickDish,
    PlaceOnCounter,
    PickFromCounter,
    AddToPot,
    StartCooking,
    TakeSoup,
    Deliver,
    Failed,
};

std::string_view to_string(InteractResult r);

struct InteractOutcome {
    InteractResult result = InteractResult::Failed;
    GridPos target{};
    Item held_after{};
    int points = 0; // Deliver only
};

/// Pure lookup of what Interact would do for `agent` in `w`.
InteractOutcome interact_outcome(const WorldState& w, const AgentState& agent);

/// Points for serving `soup` against the best-matching active order.
/// Throws NoActiveOrder when `orders` is empty and std::invalid_argument for an empty soup.
int score_delivery(const Ingredients& soup, const std::vector<Recipe>& orders);
/// Partial-credit rule for a single recipe.
int score_against(const Ingredients& soup, const Recipe& recipe);

/// Throws UnknownAgent for ids other than 0 (human) and 1 (robot).
std::set<AtomicAction> legal_actions(const WorldState& w, int agent_id);

/// Whether the action would change anything: a legal action, or a move that
/// only rotates the agent toward a blocked cell.
bool has_effect(const WorldState& w, int agent_id, AtomicAction a);

/// Renders the grid with agents ('1' human, '2' robot) and counter items.
std::string render_ascii(const WorldState& w);

} // namespace hrt
