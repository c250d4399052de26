#include "hrt/json_io.hpp"
#include "hrt/errors.hpp"

namespace hrt {

namespace {

Direction direction_or_throw(const std::string& s) {
    const auto d = direction_from_string(s);
    if (!d) throw ParseError("unknown direction '" + s + "'");
    return *d;
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

GridPos location(const json& j, const LocationTable& loc) {
    if (j.is_array()) return pos_from_json(j);
    const auto p = loc.position(j.get<int>());
    if (!p) throw ParseError("unknown location id " + j.dump());
    return *p;
}

std::vector<GridPos> locations(const json& j, const LocationTable& loc) {
    std::vector<GridPos> out;
    if (j.is_number_integer()) return {location(j, loc)};
    for (const json& e : j) out.push_back(location(e, loc));
    return out;
}

json location_ids(const std::vector<GridPos>& ps, const LocationTable& loc) {
    json out = json::array();
    for (GridPos p : ps) {
        const auto id = loc.id_of(p);
        out.push_back(id ? json(*id) : to_json(p));
    }
    return out;
}

} // namespace

json to_json(GridPos p) { return json::array({p.x, p.y}); }

GridPos pos_from_json(const json& j) {
    if (j.is_array() && j.size() == 2) return {j[0].get<int>(), j[1].get<int>()};
    if (j.is_object()) return {field(j, "x").get<int>(), field(j, "y").get<int>()};
    throw ParseError("bad position " + j.dump());
}

json to_json(const Item& item) {
    json j = {{"kind", to_string(item.kind)}};
    if (item.kind == ItemKind::Soup)
        j["contents"] = {{"onion", item.contents.count(Ingredient::Onion)},
                         {"tomato", item.contents.count(Ingredient::Tomato)}};
    return j;
}

Item item_from_json(const json& j) {
    const auto kind = item_kind_from_string(field(j, "kind").get<std::string>());
    if (!kind) throw ParseError("unknown item kind " + j.dump());
    Item item = Item::of(*kind);
    if (*kind == ItemKind::Soup) {
        const json& c = field(j, "contents");
        item.contents = Ingredients(c.value("onion", 0), c.value("tomato", 0));
    }
    return item;
}

json to_json(const AgentState& a) {
    return {{"role", to_string(a.role)}, {"pos", to_json(a.pos)}, {"facing", to_string(a.facing)}, {"held", to_json(a.held)}};
}

AgentState agent_from_json(const json& j) {
    AgentState a;
    a.role = field(j, "role").get<std::string>() == "robot" ? AgentRole::Robot : AgentRole::Human;
    a.pos = pos_from_json(field(j, "pos"));
    a.facing = direction_or_throw(field(j, "facing").get<std::string>());
    a.held = item_from_json(field(j, "held"));
    return a;
}

json to_json(const PotState& p) {
    return {{"pos", to_json(p.pos)},
            {"contents", {{"onion", p.contents.count(Ingredient::Onion)}, {"tomato", p.contents.count(Ingredient::Tomato)}}},
            {"phase", to_string(p.phase)},
            {"remaining_ticks", p.remaining_ticks}};
}

PotState pot_from_json(const json& j) {
    PotState p;
    p.pos = pos_from_json(field(j, "pos"));
    const json& c = field(j, "contents");
    p.contents = Ingredients(c.value("onion", 0), c.value("tomato", 0));
    const std::string phase = field(j, "phase").get<std::string>();
    if (phase == "idle") p.phase = PotPhase::Idle;
    else if (phase == "cooking") p.phase = PotPhase::Cooking;
    else if (phase == "ready") p.phase = PotPhase::Ready;
    else throw ParseError("unknown pot phase '" + phase + "'");
    p.remaining_ticks = j.value("remaining_ticks", 0);
    return p;
}

json to_json(const WorldEvent& e) {
    json j = {{"kind", to_string(e.kind)}, {"agent", e.agent}, {"from", to_json(e.from)}, {"to", to_json(e.to)}};
    if (!e.item.empty()) j["item"] = to_json(e.item);
    if (e.kind == EventKind::Delivered) j["points"] = e.points;
    return j;
}

json to_json(const WorldState& w) {
    json agents = json::array();
    for (const AgentState& a : w.agents) agents.push_back(to_json(a));
    json pots = json::array();
    for (const PotState& p : w.pots) pots.push_back(to_json(p));
    json counters = json::array();
    for (const auto& [pos, item] : w.counters) counters.push_back({{"pos", to_json(pos)}, {"item", to_json(item)}});
    json orders = json::array();
    for (const Recipe& r : w.orders) orders.push_back(r.id);
    return {{"agents", agents},   {"pots", pots},     {"counters", counters},
            {"orders", orders},   {"next_order", w.next_order}, {"score", w.score},
            {"deliveries", w.deliveries}, {"tick", w.tick}, {"paused", w.paused}};
}

WorldState world_from_json(const json& j, std::shared_ptr<const Layout> layout) {
    WorldState w = WorldState::initial(layout);
    const json& agents = field(j, "agents");
    if (!agents.is_array() || agents.size() != kAgentCount) throw ParseError("expected two agents");
    for (std::size_t i = 0; i < agents.size(); ++i) w.agents[i] = agent_from_json(agents[i]);
    w.pots.clear();
    for (const json& p : field(j, "pots")) w.pots.push_back(pot_from_json(p));
    w.counters.clear();
    for (const json& c : j.value("counters", json::array())) w.counters[pos_from_json(field(c, "pos"))] = item_from_json(field(c, "item"));
    if (j.contains("orders")) {
        w.orders.clear();
        for (const json& id : j["orders"]) {
            const std::string name = id.get<std::string>();
            const Recipe* found = nullptr;
            for (const Recipe& r : layout->orders)
                if (r.id == name) found = &r;
            if (!found) throw ParseError("order '" + name + "' is not in the layout's recipe list");
            w.orders.push_back(*found);
        }
    }
    w.next_order = j.value("next_order", std::size_t{0});
    w.score = j.value("score", 0);
    w.deliveries = j.value("deliveries", 0);
    w.tick = j.value("tick", 0);
    w.paused = j.value("paused", false);
    return w;
}

json graph_state_json(const SubtaskGraph& g, const LocationTable& loc) {
    json nodes = json::array();
    for (const auto& [_, n] : g.nodes) {
        json w = node_to_wire(n, loc);
        w["priority"] = n.priority;
        w["running_time"] = n.running_time;
        if (n.stalled) w["stalled"] = true;
        if (n.stall_estimate) w["stall_estimate"] = *n.stall_estimate;
        nodes.push_back(std::move(w));
    }
    json edges = json::array();
    for (const SubtaskEdge& e : g.edges) edges.push_back({{"parent", e.parent}, {"child", e.child}, {"cost", e.cost}});
    return {{"nodes", nodes}, {"edges", edges}, {"sink", g.sink}, {"version", g.version}};
}

SubtaskGraph graph_from_state_json(const json& j, const LocationTable& loc) {
    auto parsed = nodes_from_wire(field(j, "nodes"), loc);
    if (auto* bad = std::get_if<Malformed>(&parsed)) throw ParseError(bad->reason);
    auto& nodes = std::get<std::vector<SubtaskNode>>(parsed);
    const json& raw = field(j, "nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        nodes[i].priority = raw[i].value("priority", Cost{0});
        nodes[i].running_time = raw[i].value("running_time", 0);
        nodes[i].stalled = raw[i].value("stalled", false);
        if (raw[i].contains("stall_estimate")) nodes[i].stall_estimate = raw[i]["stall_estimate"].get<Cost>();
    }
    SubtaskGraph g = make_graph(std::move(nodes));
    for (const json& e : j.value("edges", json::array()))
        for (SubtaskEdge& mine : g.edges)
            if (mine.parent == e.at("parent").get<int>() && mine.child == e.at("child").get<int>())
                mine.cost = e.at("cost").get<Cost>();
    g.sink = j.value("sink", g.sink);
    g.version = j.value("version", std::uint64_t{0});
    return g;
}

json to_json(const GraphRevision& r, const LocationTable& loc) {
    return std::visit(
        [&](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, rev::AddNode>) {
                return {{"op", "add_node"}, {"node", node_to_wire(v.node, loc)}};
            } else if constexpr (std::is_same_v<T, rev::RemoveNode>) {
                return {{"op", "remove_node"}, {"id", v.id}};
            } else if constexpr (std::is_same_v<T, rev::AddEdge>) {
                return {{"op", "add_edge"}, {"parent", v.parent}, {"child", v.child}};
            } else if constexpr (std::is_same_v<T, rev::RemoveEdge>) {
                return {{"op", "remove_edge"}, {"parent", v.parent}, {"child", v.child}};
            } else if constexpr (std::is_same_v<T, rev::SplitNode>) {
                json j = {{"op", "split_node"}, {"node_id", v.node_id}};
                j["handoff_position_id"] = location_ids({v.handoff}, loc)[0];
                if (v.parent) j["parent"] = *v.parent;
                return j;
            } else {
                json j = {{"op", "set_attribute"}, {"id", v.id}};
                if (v.notes) j["notes"] = *v.notes;
                if (v.name) j["name"] = *v.name;
                if (v.task_type) j["task_type"] = wire_code(*v.task_type);
                if (v.targets) j["target_position_id"] = location_ids(*v.targets, loc);
                return j;
            }
        },
        r);
}

GraphRevision revision_from_json(const json& j, const LocationTable& loc) {
    if (!j.is_object()) throw ParseError("revision must be an object");
    const std::string op = field(j, "op").get<std::string>();
    try {
        if (op == "add_node") {
            auto parsed = nodes_from_wire(json::array({field(j, "node")}), loc);
            if (auto* bad = std::get_if<Malformed>(&parsed)) throw ParseError(bad->reason);
            return rev::AddNode{std::get<std::vector<SubtaskNode>>(parsed).front()};
        }
        if (op == "remove_node") return rev::RemoveNode{field(j, "id").get<int>()};
        if (op == "add_edge") return rev::AddEdge{field(j, "parent").get<int>(), field(j, "child").get<int>()};
        if (op == "remove_edge") return rev::RemoveEdge{field(j, "parent").get<int>(), field(j, "child").get<int>()};
        if (op == "split_node") {
            rev::SplitNode s;
            s.node_id = field(j, "node_id").get<int>();
            s.handoff = location(field(j, "handoff_position_id"), loc);
            if (j.contains("parent") && !j["parent"].is_null()) s.parent = j["parent"].get<int>();
            return s;
        }
        if (op == "set_attribute" || op == "set_notes") {
            rev::SetAttribute s;
            s.id = field(j, "id").get<int>();
            if (j.contains("notes")) s.notes = j["notes"].get<std::string>();
            if (j.contains("name")) s.name = j["name"].get<std::string>();
            if (j.contains("task_type")) {
                const auto t = subtask_type_from_wire(j["task_type"].get<int>());
                if (!t) throw ParseError("unknown task type code " + j["task_type"].dump());
                s.task_type = *t;
            }
            if (j.contains("target_position_id")) s.targets = locations(j["target_position_id"], loc);
            return s;
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad ") + op + " revision: " + e.what());
    }
    throw ParseError("unknown revision op '" + op + "'");
}

} // namespace hrt
