#pragma once

#include "hrt/subtask_graph.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace hrt {

using json = nlohmann::json;

/// Session-scoped numbering of layout positions that target_position_id
/// values index into: every fixture in row-major order, then every floor cell.
class LocationTable {
public:
    struct Entry {
        int id = 0;
        GridPos pos{};
        TileKind kind = TileKind::Floor;
    };

    LocationTable() = default;
    explicit LocationTable(const Layout& layout);

    const std::vector<Entry>& entries() const { return entries_; }
    std::optional<int> id_of(GridPos p) const;
    std::optional<GridPos> position(int id) const;

    /// [{"id", "x", "y", "kind"}, ...]
    json to_json() const;

private:
    std::vector<Entry> entries_;
    std::map<GridPos, int> by_pos_;
};

/// Wire fields: id, name, target_position_id, task_type, task_status,
/// notes, parent_subtask; plus "temporary": true on temporary nodes.
json node_to_wire(const SubtaskNode& n, const LocationTable& locations);
json graph_to_wire(const SubtaskGraph& g, const LocationTable& locations);

struct Malformed {
    std::string reason;
    bool operator==(const Malformed&) const = default;
};

using NodesOrMalformed = std::variant<std::vector<SubtaskNode>, Malformed>;

/// Accepts a bare array of nodes or an object holding one under "subtasks".
NodesOrMalformed nodes_from_wire(const json& j, const LocationTable& locations);

/// Finds the first balanced JSON object or array in free text (code fences
/// and surrounding prose are skipped) and parses it.
std::optional<json> extract_json_block(std::string_view text);

/// extract_json_block followed by nodes_from_wire.
NodesOrMalformed parse_subtasks(std::string_view text, const LocationTable& locations);

/// Hand-readable summary used in logs and the snapshot panel.
std::string graph_summary_line(const SubtaskGraph& g);

} // namespace hrt
