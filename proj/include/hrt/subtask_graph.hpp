#pragma once

#include "hrt/planner.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hrt {

using SubtaskId = int;

enum class SubtaskType : std::uint8_t { Putting, Getting, Operating };

enum class SubtaskStatus : std::uint8_t { Unknown, NotReady, ReadyToExecute, Executing, Success, Failure, Emergency };

std::string_view to_string(SubtaskType t);
std::string_view to_string(SubtaskStatus s);

/// Wire codes used in every language-model exchange: 0 PUTTING, 1 GETTING, 2 COOKING.
int wire_code(SubtaskType t);
std::optional<SubtaskType> subtask_type_from_wire(int code);

/// 0 UNKNOWN, 1 READY_TO_EXECUTE, 2 SUCCESS, 3 FAIL, 4 NOT READY, 5 EXECUTING.
/// Emergency has no code of its own; it travels as READY_TO_EXECUTE on a
/// node flagged temporary.
int wire_code(SubtaskStatus s);
std::optional<SubtaskStatus> subtask_status_from_wire(int code, bool temporary);

struct SubtaskNode {
    SubtaskId id = 0;
    std::string name;
    SubtaskType task_type = SubtaskType::Getting;
    SubtaskStatus status = SubtaskStatus::Unknown;
    std::vector<GridPos> targets;
    std::string notes;
    std::vector<SubtaskId> parents;
    Cost priority = 0;
    int running_time = 0;
    bool temporary = false;
    bool stalled = false;
    std::optional<Cost> stall_estimate; // overrides the edge-cost estimate when set

    bool operator==(const SubtaskNode&) const = default;
};

struct SubtaskEdge {
    SubtaskId parent = 0;
    SubtaskId child = 0;
    Cost cost = 0;

    bool operator==(const SubtaskEdge&) const = default;
};

struct SubtaskGraph {
    std::map<SubtaskId, SubtaskNode> nodes;
    std::vector<SubtaskEdge> edges; // sorted by (parent, child)
    SubtaskId sink = -1;
    std::uint64_t version = 0;

    const SubtaskNode& node(SubtaskId id) const;
    SubtaskNode& node(SubtaskId id);
    bool contains(SubtaskId id) const { return nodes.count(id) != 0; }
    std::vector<SubtaskId> children(SubtaskId id) const;
    const SubtaskEdge* edge(SubtaskId parent, SubtaskId child) const;
    SubtaskId next_id() const { return nodes.empty() ? 0 : nodes.rbegin()->first + 1; }

    /// Structural equality: everything except the version counter.
    bool operator==(const SubtaskGraph& o) const { return nodes == o.nodes && edges == o.edges && sink == o.sink; }
};

enum class ViolationKind : std::uint8_t {
    Cycle,
    Consistency,
    DanglingParent,
    DuplicateEdge,
    EmptyTargets,
    NoSink,
    NoPathToSink,
    BadTemporary,
    RunningTime,
};

std::string_view to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::vector<SubtaskId> nodes;
    std::string detail;

    bool operator==(const Violation&) const = default;
};

std::string describe(const std::vector<Violation>& vs);

struct IllegalTransition : std::logic_error {
    IllegalTransition(SubtaskId id, SubtaskStatus from, SubtaskStatus to);
    SubtaskId id;
    SubtaskStatus from;
    SubtaskStatus to;
};

struct RevisionRejected : std::runtime_error {
    explicit RevisionRejected(std::vector<Violation> vs);
    RevisionRejected(const std::string& why);
    std::vector<Violation> violations;
};

struct NoPathToSink : std::runtime_error {
    explicit NoPathToSink(std::vector<SubtaskId> ids);
    std::vector<SubtaskId> stranded;
};

struct UnknownSubtask : std::out_of_range {
    explicit UnknownSubtask(SubtaskId id) : std::out_of_range("unknown subtask id " + std::to_string(id)) {}
};

/// Builds a graph from nodes whose `parents` lists define the edges. The
/// sink is the single childless non-temporary node (or -1 if there is none;
/// validate() reports it). Edge costs start at 0.
SubtaskGraph make_graph(std::vector<SubtaskNode> nodes);

/// All invariant checks; an empty result means the graph is usable.
std::vector<Violation> validate(const SubtaskGraph& g);

using CostFn = std::function<Cost(const std::set<GridPos>&, const std::set<GridPos>&)>;

/// Fills every edge cost with the cheapest parent-target to child-target
/// planner cost. Unreachable pairs get kUnreachable and a warning line.
SubtaskGraph compute_edge_costs(SubtaskGraph g, const Layout& layout, const CostFn& cost_fn = {},
                                std::vector<std::string>* warnings = nullptr);

enum class PriorityRule : std::uint8_t { CriticalPath, ShortestPath };

/// Remaining cost from each node to the sink: the heaviest path by default.
/// Temporary nodes get one more than the largest non-temporary priority.
std::map<SubtaskId, Cost> compute_priorities(const SubtaskGraph& g, PriorityRule rule = PriorityRule::CriticalPath);

/// compute_priorities written back into the nodes.
SubtaskGraph with_priorities(SubtaskGraph g, PriorityRule rule = PriorityRule::CriticalPath);

/// Ids available for assignment: Emergency first, then priority descending, then id.
std::vector<SubtaskId> ready_set(const SubtaskGraph& g);

/// Whether `from -> to` is in the status relation for a node of this kind.
bool transition_allowed(SubtaskStatus from, SubtaskStatus to, bool temporary);

/// Throws IllegalTransition. Moving to ReadyToExecute also needs every parent
/// at Success. Success re-derives the readiness of the children.
SubtaskGraph set_status(SubtaskGraph g, SubtaskId id, SubtaskStatus to);

/// Unknown and NotReady nodes become ReadyToExecute once all parents
/// succeeded; remaining Unknown nodes become NotReady.
void refresh_readiness(SubtaskGraph& g);

std::pair<SubtaskGraph, SubtaskId> add_temporary(SubtaskGraph g, std::string name, std::vector<GridPos> targets,
                                                 std::string notes, SubtaskType type = SubtaskType::Operating);
SubtaskGraph remove_temporary(SubtaskGraph g, SubtaskId id);

/// The same plan for the next order: temporaries dropped, every node back to
/// Unknown with its bookkeeping cleared, readiness re-derived.
SubtaskGraph reset_progress(SubtaskGraph g);

namespace rev {

struct AddNode {
    SubtaskNode node;
    bool operator==(const AddNode&) const = default;
};
struct RemoveNode {
    SubtaskId id = 0;
    bool operator==(const RemoveNode&) const = default;
};
struct AddEdge {
    SubtaskId parent = 0;
    SubtaskId child = 0;
    bool operator==(const AddEdge&) const = default;
};
struct RemoveEdge {
    SubtaskId parent = 0;
    SubtaskId child = 0;
    bool operator==(const RemoveEdge&) const = default;
};
/// Routes the item a node consumes through a counter: the producing parent
/// (or `parent` when given) feeds a new put-at-counter node, which feeds a new
/// get-from-counter node, which feeds the original node.
struct SplitNode {
    SubtaskId node_id = 0;
    GridPos handoff{};
    std::optional<SubtaskId> parent;
    bool operator==(const SplitNode&) const = default;
};
struct SetAttribute {
    SubtaskId id = 0;
    std::optional<std::string> notes;
    std::optional<std::vector<GridPos>> targets;
    std::optional<SubtaskType> task_type;
    std::optional<std::string> name;
    bool operator==(const SetAttribute&) const = default;
};

} // namespace rev

using GraphRevision = std::variant<rev::AddNode, rev::RemoveNode, rev::AddEdge, rev::RemoveEdge, rev::SplitNode,
                                   rev::SetAttribute>;

std::string_view revision_kind(const GraphRevision& r);
std::string describe(const GraphRevision& r);

/// Applies one revision. With a layout the edge costs and priorities are
/// recomputed. Throws RevisionRejected and leaves `g` untouched on failure.
SubtaskGraph apply_revision(const SubtaskGraph& g, const GraphRevision& r, const Layout* layout = nullptr);
SubtaskGraph apply_revisions(const SubtaskGraph& g, const std::vector<GraphRevision>& rs,
                             const Layout* layout = nullptr);

struct StallConfig {
    int timeout_factor = 3;
    Cost fallback_estimate = 10;
};

/// The duration a node is expected to take: its override, else its cheapest
/// finite incoming edge, else its cheapest finite outgoing edge, else the fallback.
Cost stall_estimate(const SubtaskGraph& g, SubtaskId id, const StallConfig& cfg = {});

/// Advances running_time of the listed Executing nodes and flags those past
/// timeout_factor times their estimate.
SubtaskGraph tick_running_time(SubtaskGraph g, const std::vector<SubtaskId>& executing, const StallConfig& cfg = {});

/// Recomputes edge costs (planner path cost) and priorities in one go.
SubtaskGraph recost(SubtaskGraph g, const Layout& layout, PriorityRule rule = PriorityRule::CriticalPath,
                    std::vector<std::string>* warnings = nullptr);

} // namespace hrt
