#pragma once

#include "hrt/graph_wire.hpp"
#include "hrt/world.hpp"

#include <optional>
#include <string>

namespace hrt::lang {

/// One line per recipe: "- onion_soup: onion x3 (cook 20 ticks, 53 points)".
std::string render_recipe_book(const std::vector<Recipe>& recipes);

/// Every non-Floor tile with its location id and coordinates (plus pot and
/// counter contents), then the floor cells' ids.
std::string render_kitchen_items(const WorldState& w, const LocationTable& locations);

/// "position (1, 1), facing up, holding onion"
std::string render_agent_state(const AgentState& a);

/// Wire nodes and costed edges as JSON text.
std::string render_graph(const SubtaskGraph& g, const LocationTable& locations);

/// Ready nodes with their priorities, in ready_set order.
std::string render_ready_tasks(const SubtaskGraph& g, const LocationTable& locations);

/// A single node on the wire, or "none".
std::string render_task(const SubtaskGraph& g, std::optional<SubtaskId> id, const LocationTable& locations);

/// Pending nodes not in `exclude`, as wire JSON.
std::string render_open_tasks(const SubtaskGraph& g, const std::vector<SubtaskId>& exclude,
                              const LocationTable& locations);

/// The node schema quoted in the graph prompts.
std::string subtasks_example();

} // namespace hrt::lang
