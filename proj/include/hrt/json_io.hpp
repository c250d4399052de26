#pragma once

#include "hrt/graph_wire.hpp"
#include "hrt/world.hpp"

namespace hrt {

json to_json(GridPos p);         // [x, y]
GridPos pos_from_json(const json& j);
json to_json(const Item& item);  // {"kind", "contents"?}
Item item_from_json(const json& j);
json to_json(const AgentState& a);
AgentState agent_from_json(const json& j);
json to_json(const PotState& p);
PotState pot_from_json(const json& j);
json to_json(const WorldEvent& e);

/// Everything dynamic about the world; the layout travels separately.
json to_json(const WorldState& w);
WorldState world_from_json(const json& j, std::shared_ptr<const Layout> layout);

/// Wire nodes plus the bookkeeping the wire format leaves out (priority,
/// running time, stall flags, edge costs, sink, version).
json graph_state_json(const SubtaskGraph& g, const LocationTable& locations);
SubtaskGraph graph_from_state_json(const json& j, const LocationTable& locations);

json to_json(const GraphRevision& r, const LocationTable& locations);
/// Throws ParseError on unknown ops or bad fields.
GraphRevision revision_from_json(const json& j, const LocationTable& locations);

} // namespace hrt
