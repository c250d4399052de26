#pragma once

#include "hrt/lang/requests.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hrt {

struct Assignment {
    AgentRole agent = AgentRole::Robot;
    SubtaskId subtask = 0;
    std::optional<Plan> plan; // advisory for the human
    std::string instruction;
};

struct AllocationOutcome {
    bool changed = false; // the (human, robot) assignment differs from the last one announced
    AssignedPair before{};
    AssignedPair after{};
    std::vector<Assignment> assignments; // newly made
    std::string instruction;             // for the human
    std::vector<std::string> corrections;
    bool nothing_assignable = false;
    std::vector<SubtaskId> preempted; // bumped for an emergency
};

struct JudgeVerdict {
    std::vector<SubtaskId> finished_subtask_ids;
    bool off_script = false;
    bool invoked = false; // the status judge ran (Interact tick)
    bool sink_done = false;
};

struct ManagerConfig {
    StallConfig stall{};
};

/// Real-time allocation, robot control and completion judging for one
/// session. All language calls go through the backend; its answers are
/// checked against the hard allocation rules before use.
class Manager {
public:
    Manager(lang::BackendPtr backend, std::shared_ptr<const lang::RequestBuilder> requests, ManagerConfig cfg = {});

    const AssignedPair& assigned() const { return assigned_; }
    std::optional<SubtaskId> assigned(AgentRole r) const { return assigned_[static_cast<std::size_t>(index_of(r))]; }

    /// Gives tasks to free agents (and lets an Emergency task preempt its
    /// bound agent). Marks new assignments Executing.
    AllocationOutcome allocate(SubtaskGraph& g, const WorldState& w);

    /// One action for the robot: the next step of a fresh plan for its task
    /// (replanned every tick around the human), Stay while an Interact would
    /// fail, and stashing a useless held item when idle.
    AtomicAction robot_action(const SubtaskGraph& g, const WorldState& w);

    /// Judges the tick prev -> cur and writes Success for finished tasks.
    /// The backend judge runs only when an agent pressed Interact; move tasks
    /// are checked on arrival every tick.
    JudgeVerdict judge(SubtaskGraph& g, const WorldState& prev, const WorldState& cur,
                       const std::array<bool, kAgentCount>& interacted);

    /// Running-time bookkeeping after a tick: stalled tasks and tasks the
    /// agent's hands no longer suit are handed back. Returns the ids released.
    std::vector<SubtaskId> maintain(SubtaskGraph& g, const WorldState& w);

    /// Forget every assignment (a fresh graph for the next order).
    void reset();

    std::size_t robot_assignments() const { return robot_plan_costs_count_; }
    double mean_robot_plan_cost() const;

private:
    void release(SubtaskGraph& g, AgentRole r);
    AtomicAction choose_robot_action(const SubtaskGraph& g, const WorldState& w) const;

    lang::BackendPtr backend_;
    std::shared_ptr<const lang::RequestBuilder> requests_;
    ManagerConfig cfg_;
    AssignedPair assigned_{};
    AssignedPair announced_{};
    bool announced_once_ = false;
    Exclusions excluded_;
    std::map<std::pair<int, SubtaskId>, int> exclusion_left_; // ticks until an exclusion lapses
    std::map<std::pair<int, SubtaskId>, int> stall_count_;
    long long robot_plan_costs_sum_ = 0;
    std::size_t robot_plan_costs_count_ = 0;
    // Skip re-asking the backend while nothing that affects eligibility moved.
    std::optional<std::tuple<std::uint64_t, ItemKind, ItemKind, AssignedPair, std::size_t>> idle_key_;
    // The robot's last attempted walk; a bump into the human makes it hold
    // still for a tick so the two do not collide forever.
    std::optional<std::pair<GridPos, GridPos>> robot_walk_; // from, to
};

} // namespace hrt
