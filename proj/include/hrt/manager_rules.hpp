#pragma once

#include <functional>

#include "hrt/task_effects.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hrt {

/// Which agent a node's notes bind it to: the earliest mention of "human" or
/// "robot" wins; nullopt when neither appears.
std::optional<AgentRole> preferred_agent(std::string_view notes);

/// Current task per agent, indexed by agent id (human 0, robot 1).
using AssignedPair = std::array<std::optional<SubtaskId>, kAgentCount>;

/// (agent id, subtask id) pairs that must not be allocated, e.g. a task an
/// agent just stalled on.
using Exclusions = std::set<std::pair<int, SubtaskId>>;

/// Cheapest plan for `role` to carry out `n` from the current world:
/// walking to a fixture target ends with Interact; a floor target is walked onto.
std::optional<Plan> plan_for_node(const SubtaskNode& n, const WorldState& w, AgentRole role,
                                  OtherAgent treat_other_as = OtherAgent::Ignore);

/// Cheapest plan for `role` to carry out node `id` from the current world:
/// walking to a fixture target ends with Interact; a floor target is walked
/// onto. The other agent is ignored (it moves), so this is a ranking cost.
std::optional<Plan> task_plan(const SubtaskGraph& g, SubtaskId id, const WorldState& w, AgentRole role,
                              OtherAgent treat_other_as = OtherAgent::Ignore);

/// What an agent does when the only way forward runs through the other agent.
enum class WhenBlocked : std::uint8_t {
    Wait,  // hold still until the way clears
    Yield, // get out of the way (see yield_step)
};

/// First action toward carrying out a plan produced by `planner`. Plans
/// around the other agent when possible; when only a path through it exists,
/// follows that path up to the other agent and then waits or yields. Stay when
/// there is no plan or the next Interact would fail. `avoid` is forwarded to
/// yield_step; `was_blocked`, when given, reports whether the other agent was
/// in the way.
AtomicAction navigate(const WorldState& w, AgentRole role,
                      const std::function<std::optional<Plan>(OtherAgent)>& planner,
                      WhenBlocked blocked = WhenBlocked::Wait, const std::set<GridPos>& avoid = {},
                      bool* was_blocked = nullptr);

/// Giving way: if standing in `avoid` (the cells the other agent is expected
/// to walk through), head for the nearest reachable cell outside it;
/// otherwise step to the neighbour that takes us farthest from the other
/// agent. Stay when boxed in.
AtomicAction yield_step(const WorldState& w, AgentRole role, const std::set<GridPos>& avoid);

/// Cells an agent passes through while following `p` from `start`, the
/// other agent ignored, excluding the start cell.
std::set<GridPos> plan_cells(const Layout& layout, const AgentState& start, const Plan& p);

/// An agent with nothing to do gets out of the way: off chokepoints (see
/// critical_cells) first, then off cells next to interaction tiles, toward
/// the nearest better cell. Stay when nothing better is reachable.
AtomicAction park(const WorldState& w, AgentRole role);

struct Eligibility {
    bool ok = false;
    std::string reason; // why not, for correction logs
};

/// Hard constraints for handing node `id` to `role`: the node is ready (or
/// Emergency), the agent's hands suit it, and a plan exists.
Eligibility hard_eligible(const SubtaskGraph& g, SubtaskId id, const WorldState& w, AgentRole role);

/// Hard constraints plus the preference binding. A node bound to the other
/// agent stays eligible when that agent cannot start it because of what it
/// holds (it is holding something else) and `role` can.
Eligibility rule_eligible(const SubtaskGraph& g, SubtaskId id, const WorldState& w, AgentRole role);

struct RuleAllocation {
    AssignedPair picks{};     // new picks for agents that were free, else the current task
    bool nothing_assignable = false; // some agent is free and nothing fits it
};

/// The fallback allocation order: Emergency first, robot before human, the
/// holding constraint, then priority (desc), plan cost (asc), id (asc), with
/// preference notes binding a task to its agent. Busy agents keep their task.
RuleAllocation rule_allocate(const SubtaskGraph& g, const WorldState& w, const AssignedPair& current,
                             const Exclusions& excluded = {});

/// Checks a proposed allocation against the hard rules and patches every
/// violating pick with the rule choice. Returns the repaired pair; each
/// correction is described in `corrections`.
AssignedPair correct_allocation(const SubtaskGraph& g, const WorldState& w, const AssignedPair& current,
                                const AssignedPair& proposed, std::vector<std::string>* corrections,
                                const Exclusions& excluded = {});

/// "Please pick onion at (2, 0)." style instruction for the human; a wait
/// instruction when the human has nothing assigned.
std::string instruction_text(const SubtaskGraph& g, const AssignedPair& picks);

struct RuleVerdict {
    std::vector<SubtaskId> finished;
    bool off_script = false; // the human finished something it was not assigned
};

/// Exact state-diff judging for one tick. Each agent completes at most one
/// task: its own first, then an unassigned ready task, then the other
/// agent's. MoveTo tasks are checked on arrival; everything else needs the
/// agent to have pressed Interact (`interacted`).
RuleVerdict rule_judge(const SubtaskGraph& g, const WorldState& prev, const WorldState& cur,
                       const AssignedPair& current, const std::array<bool, kAgentCount>& interacted);

} // namespace hrt
