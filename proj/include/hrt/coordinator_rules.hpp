#pragma once

#include "hrt/graph_wire.hpp"
#include "hrt/task_effects.hpp"

#include <string>
#include <vector>

namespace hrt {

/// Human request categories from the revision prompt's decision tree.
enum class QueryKind : std::uint8_t { Unclear = 0, StructureChange = 1, AttributeChange = 2, TemporaryTask = 3 };

std::string_view to_string(QueryKind k);

/// All "(x, y)" or "x,y" pairs in order of appearance.
std::vector<GridPos> coordinates_in(std::string_view message);

/// Keyword rules. A move request or a handoff request needs a coordinate; a
/// preference needs a first/second person phrase and a task word. Anything
/// else is Unclear. Total over all strings.
QueryKind classify_rule(std::string_view message);

/// Nodes a preference or handoff message talks about: pending, non-temporary
/// nodes whose inferred effect matches the verbs and items mentioned.
std::vector<SubtaskId> nodes_mentioned(const SubtaskGraph& g, const Layout& layout, std::string_view message);

/// Deterministic GraphRevision payload for `message`:
/// {"query_type", "message", "revisions": [ops]}.
json rule_revision(std::string_view message, const SubtaskGraph& g, const Layout& layout, const LocationTable& loc);

/// Reply for an Unclear query.
std::string clarification_text();

struct SplitOption {
    SubtaskEdge edge;
    GridPos counter{};
    Cost leg1 = 0; // parent targets -> counter
    Cost leg2 = 0; // counter -> child targets

    Cost max_leg() const { return std::max(leg1, leg2); }
};

struct SplitAnalysis {
    Cost max_edge_cost = 0;             // largest finite cost among open edges
    std::vector<SubtaskEdge> max_edges; // every open edge at that cost
    std::vector<SplitOption> proposal;  // one per max edge; empty unless all qualify
    bool all_unreachable = false;       // every open edge is kUnreachable
};

/// Cheapest counter for routing `edge` through a handoff, by max leg then
/// position. nullopt when the edge cannot be split.
std::optional<SplitOption> best_split(const SubtaskGraph& g, const Layout& layout, const SubtaskEdge& edge);

/// "Open" edges lead into nodes that are not done yet. A proposal is made
/// when every open edge tied at the maximum can be split so that its longest
/// leg shrinks by at least `threshold` of the edge cost.
SplitAnalysis analyze_splits(const SubtaskGraph& g, const Layout& layout, double threshold = 0.25);

/// Deterministic ActiveSuggestion payload: split proposal when one
/// qualifies, otherwise a grouping of open tasks by nearest agent.
json rule_suggestion(const SubtaskGraph& g, const WorldState& w, const LocationTable& loc, double threshold = 0.25);

} // namespace hrt
