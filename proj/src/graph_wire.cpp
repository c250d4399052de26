#include "hrt/graph_wire.hpp"

#include <set>
#include <sstream>

namespace hrt {

LocationTable::LocationTable(const Layout& layout) {
    auto add = [&](GridPos p) {
        const int id = static_cast<int>(entries_.size());
        entries_.push_back({id, p, layout.at(p)});
        by_pos_[p] = id;
    };
    for (GridPos p : layout.fixtures()) add(p);
    for (GridPos p : layout.floor_cells()) add(p);
}

std::optional<int> LocationTable::id_of(GridPos p) const {
    auto it = by_pos_.find(p);
    if (it == by_pos_.end()) return std::nullopt;
    return it->second;
}

std::optional<GridPos> LocationTable::position(int id) const {
    if (id < 0 || id >= static_cast<int>(entries_.size())) return std::nullopt;
    return entries_[static_cast<std::size_t>(id)].pos;
}

json LocationTable::to_json() const {
    json out = json::array();
    for (const Entry& e : entries_) out.push_back({{"id", e.id}, {"x", e.pos.x}, {"y", e.pos.y}, {"kind", to_string(e.kind)}});
    return out;
}

json node_to_wire(const SubtaskNode& n, const LocationTable& locations) {
    json targets = json::array();
    for (GridPos p : n.targets) {
        const auto id = locations.id_of(p);
        targets.push_back(id ? *id : -1);
    }
    json j = {
        {"id", n.id},
        {"name", n.name},
        {"target_position_id", targets},
        {"task_type", wire_code(n.task_type)},
        {"task_status", wire_code(n.status)},
        {"notes", n.notes},
        {"parent_subtask", n.parents},
    };
    if (n.temporary) j["temporary"] = true;
    return j;
}

json graph_to_wire(const SubtaskGraph& g, const LocationTable& locations) {
    json out = json::array();
    for (const auto& [_, n] : g.nodes) out.push_back(node_to_wire(n, locations));
    return out;
}

namespace {

std::optional<int> int_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) return std::nullopt;
    return it->get<int>();
}

std::optional<std::vector<int>> int_list(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (it->is_number_integer()) return std::vector<int>{it->get<int>()};
    if (!it->is_array()) return std::nullopt;
    std::vector<int> out;
    for (const json& v : *it) {
        if (!v.is_number_integer()) return std::nullopt;
        out.push_back(v.get<int>());
    }
    return out;
}

} // namespace

NodesOrMalformed nodes_from_wire(const json& j, const LocationTable& locations) {
    const json* list = &j;
    if (j.is_object()) {
        auto it = j.find("subtasks");
        if (it == j.end()) return Malformed{"expected an array of subtasks or an object with \"subtasks\""};
        list = &*it;
    }
    if (!list->is_array()) return Malformed{"subtasks must be an array"};
    if (list->empty()) return Malformed{"no subtasks"};

    std::vector<SubtaskNode> out;
    std::set<int> ids;
    for (std::size_t i = 0; i < list->size(); ++i) {
        const json& e = (*list)[i];
        const std::string where = "subtask #" + std::to_string(i) + ": ";
        if (!e.is_object()) return Malformed{where + "not an object"};
        SubtaskNode n;
        const auto id = int_field(e, "id");
        if (!id) return Malformed{where + "missing integer \"id\""};
        n.id = *id;
        if (!ids.insert(n.id).second) return Malformed{where + "duplicate id " + std::to_string(n.id)};
        auto name = e.find("name");
        if (name == e.end() || !name->is_string()) return Malformed{where + "missing string \"name\""};
        n.name = name->get<std::string>();

        const auto type = int_field(e, "task_type");
        if (!type) return Malformed{where + "missing integer \"task_type\""};
        const auto t = subtask_type_from_wire(*type);
        if (!t) return Malformed{"unknown task type code " + std::to_string(*type)};
        n.task_type = *t;

        auto tmp = e.find("temporary");
        n.temporary = tmp != e.end() && tmp->is_boolean() && tmp->get<bool>();
        const auto status = int_field(e, "task_status");
        if (!status) return Malformed{where + "missing integer \"task_status\""};
        const auto s = subtask_status_from_wire(*status, n.temporary);
        if (!s) return Malformed{"unknown status code " + std::to_string(*status)};
        n.status = *s;

        const auto targets = int_list(e, "target_position_id");
        if (!targets) return Malformed{where + "missing \"target_position_id\" list"};
        for (int loc : *targets) {
            const auto p = locations.position(loc);
            if (!p) return Malformed{where + "unknown target_position_id " + std::to_string(loc)};
            n.targets.push_back(*p);
        }
        if (n.targets.empty()) return Malformed{where + "empty \"target_position_id\""};

        auto notes = e.find("notes");
        if (notes != e.end() && !notes->is_null()) {
            if (!notes->is_string()) return Malformed{where + "\"notes\" must be a string"};
            n.notes = notes->get<std::string>();
        }
        const auto parents = int_list(e, "parent_subtask");
        if (!parents) return Malformed{where + "missing \"parent_subtask\" list"};
        n.parents = *parents;
        out.push_back(std::move(n));
    }
    return out;
}

std::optional<json> extract_json_block(std::string_view text) {
    for (std::size_t start = 0; start < text.size(); ++start) {
        const char open = text[start];
        if (open != '{' && open != '[') continue;
        // Walk to the matching close bracket, honouring strings.
        std::vector<char> stack;
        bool in_string = false, escaped = false;
        std::size_t end = std::string_view::npos;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped) escaped = false;
                else if (c == '\\') escaped = true;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '{' || c == '[') stack.push_back(c);
            else if (c == '}' || c == ']') {
                if (stack.empty() || (c == '}') != (stack.back() == '{')) break;
                stack.pop_back();
                if (stack.empty()) {
                    end = i;
                    break;
                }
            }
        }
        if (end == std::string_view::npos) continue;
        json parsed = json::parse(text.substr(start, end - start + 1), nullptr, false);
        if (!parsed.is_discarded() && (parsed.is_object() || parsed.is_array())) return parsed;
    }
    return std::nullopt;
}

NodesOrMalformed parse_subtasks(std::string_view text, const LocationTable& locations) {
    const auto block = extract_json_block(text);
    if (!block) return Malformed{"no JSON block found"};
    return nodes_from_wire(*block, locations);
}

std::string graph_summary_line(const SubtaskGraph& g) {
    std::ostringstream out;
    out << "v" << g.version << ":";
    for (const auto& [id, n] : g.nodes) out << " " << id << "=" << to_string(n.status);
    return out.str();
}

} // namespace hrt
