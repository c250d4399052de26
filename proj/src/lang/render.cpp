#include "hrt/lang/render.hpp"

#include <algorithm>
#include <sstream>

namespace hrt::lang {

std::string render_recipe_book(const std::vector<Recipe>& recipes) {
    std::ostringstream out;
    for (std::size_t i = 0; i < recipes.size(); ++i) {
        const Recipe& r = recipes[i];
        if (i) out << "\n";
        out << "- " << r.id << ": " << r.required.describe() << " (cook " << r.cook_ticks << " ticks, " << r.points
            << " points)";
    }
    return out.str();
}

std::string render_kitchen_items(const WorldState& w, const LocationTable& locations) {
    std::ostringstream out;
    out << "Locations (ids for target_position_id):";
    std::vector<std::string> floor;
    for (const auto& e : locations.entries()) {
        if (e.kind == TileKind::Floor) {
            floor.push_back(std::to_string(e.id) + " " + to_string(e.pos));
            continue;
        }
        out << "\n- id " << e.id << ": " << to_string(e.kind) << " at " << to_string(e.pos);
        if (const PotState* pot = w.pot_at(e.pos)) {
            out << ", " << to_string(pot->phase) << ", contents " << pot->contents.describe();
            if (pot->phase == PotPhase::Cooking) out << ", " << pot->remaining_ticks << " ticks left";
        }
        if (const Item* item = w.counter_item(e.pos)) out << ", holds " << item->describe();
    }
    out << "\n- floor cells: ";
    for (std::size_t i = 0; i < floor.size(); ++i) out << (i ? ", " : "") << "id " << floor[i];
    return out.str();
}

std::string render_agent_state(const AgentState& a) {
    std::ostringstream out;
    out << "position " << to_string(a.pos) << ", facing " << to_string(a.facing) << ", holding "
        << (a.held.empty() ? std::string("nothing") : a.held.describe());
    return out.str();
}

std::string render_graph(const SubtaskGraph& g, const LocationTable& locations) {
    json edges = json::array();
    for (const SubtaskEdge& e : g.edges) {
        json cost = e.cost >= kUnreachable ? json("unreachable") : json(e.cost);
        edges.push_back({{"parent", e.parent}, {"child", e.child}, {"cost", cost}});
    }
    return json{{"subtasks", graph_to_wire(g, locations)}, {"edges", edges}}.dump();
}

std::string render_ready_tasks(const SubtaskGraph& g, const LocationTable& locations) {
    json out = json::array();
    for (SubtaskId id : ready_set(g)) {
        json n = node_to_wire(g.node(id), locations);
        n["priority"] = g.node(id).priority;
        out.push_back(std::move(n));
    }
    return out.dump();
}

std::string render_task(const SubtaskGraph& g, std::optional<SubtaskId> id, const LocationTable& locations) {
    if (!id || !g.contains(*id)) return "none";
    return node_to_wire(g.node(*id), locations).dump();
}

std::string render_open_tasks(const SubtaskGraph& g, const std::vector<SubtaskId>& exclude,
                              const LocationTable& locations) {
    json out = json::array();
    for (const auto& [id, n] : g.nodes) {
        if (std::find(exclude.begin(), exclude.end(), id) != exclude.end()) continue;
        if (n.status == SubtaskStatus::Success || n.status == SubtaskStatus::Executing) continue;
        out.push_back(node_to_wire(n, locations));
    }
    return out.dump();
}

std::string subtasks_example() {
    return R"({"id": int, "name": string, "target_position_id": list[int], "task_type": int, "task_status": int, "notes": str, "parent_subtask": list[int]})";
}

} // namespace hrt::lang
