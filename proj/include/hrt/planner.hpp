#pragma once

#include "hrt/world.hpp"

#include <limits>
#include <optional>
#include <set>
#include <vector>

namespace hrt {

/// Action-count cost. kUnreachable marks pairs no plan can connect.
using Cost = long long;
inline constexpr Cost kUnreachable = std::numeric_limits<Cost>::max() / 4;

constexpr Cost add_cost(Cost a, Cost b) {
    return (a >= kUnreachable || b >= kUnreachable) ? kUnreachable : a + b;
}

enum class OtherAgent : std::uint8_t { Obstacle, Ignore };

struct PlanQuery {
    const Layout* layout = nullptr;
    AgentState self{};
    std::optional<AgentState> other;
    std::set<GridPos> goals; // non-Floor tiles to interact with
    OtherAgent treat_other_as = OtherAgent::Obstacle;
};

struct Plan {
    std::vector<AtomicAction> actions;
    GridPos goal{};

    Cost cost() const { return static_cast<Cost>(actions.size()); }
    bool operator==(const Plan&) const = default;
};

/// Lowest-action-cost plan that ends facing one of the goals and interacting
/// with it. Breadth-first over (cell, facing); expansion order Up, Down, Left,
/// Right; among equally cheap goals the smallest GridPos wins. Returns nullopt
/// when no goal is attainable. Throws std::invalid_argument when a goal is Floor.
std::optional<Plan> plan(const PlanQuery& q);

/// Lowest-cost walk that ends standing on `cell` (any facing). No Interact is
/// appended. nullopt when unreachable.
std::optional<Plan> plan_to_cell(const Layout& layout, const AgentState& self, const std::optional<AgentState>& other,
                                 GridPos cell, OtherAgent treat_other_as = OtherAgent::Obstacle);

/// Cheapest plan cost from any of `from` (any facing, no other agent) to any of
/// `to`. Non-Floor entries of `from` stand for the Floor cells next to them,
/// i.e. the cells an agent occupies right after working at that tile.
Cost path_cost(const Layout& layout, const std::set<GridPos>& from, const std::set<GridPos>& to);

} // namespace hrt
