#include "hrt/manager.hpp"

#include <algorithm>

namespace hrt {

namespace {

std::size_t slot(AgentRole r) { return static_cast<std::size_t>(index_of(r)); }

bool open_status(SubtaskStatus s) { return s != SubtaskStatus::Success && s != SubtaskStatus::Unknown; }

// Marks `id` done, first completing any prerequisites it implies.
void complete(SubtaskGraph& g, SubtaskId id) {
    for (SubtaskId p : std::vector<SubtaskId>(g.node(id).parents))
        if (g.contains(p) && g.node(p).status != SubtaskStatus::Success) complete(g, p);
    if (g.node(id).status == SubtaskStatus::Failure) g = set_status(std::move(g), id, SubtaskStatus::ReadyToExecute);
    const SubtaskStatus s = g.node(id).status;
    if (s == SubtaskStatus::ReadyToExecute) g = set_status(std::move(g), id, SubtaskStatus::Executing);
    g = set_status(std::move(g), id, SubtaskStatus::Success);
}

} // namespace

Manager::Manager(lang::BackendPtr backend, std::shared_ptr<const lang::RequestBuilder> requests, ManagerConfig cfg)
    : backend_(std::move(backend)), requests_(std::move(requests)), cfg_(cfg) {
    if (!backend_ || !requests_) throw std::invalid_argument("manager needs a backend and a request builder");
}

void Manager::reset() {
    robot_walk_.reset();
    assigned_ = {};
    excluded_.clear();
    exclusion_left_.clear();
    stall_count_.clear();
    idle_key_.reset();
}

double Manager::mean_robot_plan_cost() const {
    return robot_plan_costs_count_ ? static_cast<double>(robot_plan_costs_sum_) / static_cast<double>(robot_plan_costs_count_) : 0.0;
}

void Manager::release(SubtaskGraph& g, AgentRole r) {
    auto& a = assigned_[slot(r)];
    if (!a) return;
    if (g.contains(*a) && g.node(*a).status == SubtaskStatus::Executing)
        g = set_status(std::move(g), *a, g.node(*a).temporary ? SubtaskStatus::Emergency : SubtaskStatus::ReadyToExecute);
    a.reset();
    idle_key_.reset();
}

AllocationOutcome Manager::allocate(SubtaskGraph& g, const WorldState& w) {
    AllocationOutcome out;
    out.before = assigned_;

    // An emergency task bumps whatever its agent is doing.
    for (const auto& [id, n] : g.nodes) {
        if (n.status != SubtaskStatus::Emergency) continue;
        const AgentRole bound = preferred_agent(n.notes).value_or(AgentRole::Robot);
        const auto cur = assigned_[slot(bound)];
        if (cur && g.contains(*cur) && !g.node(*cur).temporary) {
            out.preempted.push_back(*cur);
            release(g, bound);
        }
    }

    const bool any_free = std::any_of(assigned_.begin(), assigned_.end(), [](const auto& a) { return !a.has_value(); });
    const auto key = std::make_tuple(g.version, w.agent(AgentRole::Human).held.kind, w.agent(AgentRole::Robot).held.kind,
                                     assigned_, excluded_.size());
    if (any_free && !(idle_key_ && *idle_key_ == key)) {
        const lang::BackendResponse resp = backend_->complete(requests_->assignment(w, g, assigned_, excluded_));
        AssignedPair proposed = assigned_;
        std::string llm_message;
        if (resp.payload) {
            const lang::AssignmentReply reply = lang::assignment_from_payload(*resp.payload);
            proposed[slot(AgentRole::Robot)] = reply.robot;
            proposed[slot(AgentRole::Human)] = reply.human;
            llm_message = reply.message_to_human;
        } else {
            out.corrections.push_back("malformed assignment reply (" + resp.error + "); using the rule allocation");
            proposed = rule_allocate(g, w, assigned_, excluded_).picks;
        }
        const AssignedPair picks = correct_allocation(g, w, assigned_, proposed, &out.corrections, excluded_);

        for (AgentRole role : {AgentRole::Robot, AgentRole::Human}) {
            const std::size_t i = slot(role);
            if (assigned_[i] || !picks[i]) continue;
            const SubtaskId id = *picks[i];
            g = set_status(std::move(g), id, SubtaskStatus::Executing);
            assigned_[i] = id;
            std::optional<Plan> p = task_plan(g, id, w, role);
            Cost estimate = p ? std::max<Cost>(1, p->cost()) : cfg_.stall.fallback_estimate;
            const SubtaskNode& n = g.node(id);
            const TaskEffect e = infer_effect(n, w.layout.get());
            if (e.kind == EffectKind::Pick && e.item == ItemKind::Soup) {
                int wait = 0;
                for (GridPos t : n.targets)
                    if (const PotState* pot = w.pot_at(t)) wait = std::max(wait, pot->remaining_ticks);
                estimate += wait;
            }
            g.node(id).stall_estimate = estimate;
            if (role == AgentRole::Robot && p) {
                robot_plan_costs_sum_ += p->cost();
                ++robot_plan_costs_count_;
            }
            out.assignments.push_back({role, id, p, {}});
        }
        const bool still_free = std::any_of(assigned_.begin(), assigned_.end(), [](const auto& a) { return !a.has_value(); });
        out.nothing_assignable = still_free;
        if (still_free) idle_key_ = std::make_tuple(g.version, w.agent(AgentRole::Human).held.kind,
                                                    w.agent(AgentRole::Robot).held.kind, assigned_, excluded_.size());
        else idle_key_.reset();

        const bool human_corrected = std::any_of(out.corrections.begin(), out.corrections.end(),
                                                 [](const std::string& c) { return c.rfind("human", 0) == 0; });
        out.instruction = (!backend_->deterministic() && !human_corrected && !llm_message.empty())
                              ? llm_message
                              : instruction_text(g, assigned_);
    } else {
        out.instruction = instruction_text(g, assigned_);
    }
    for (Assignment& a : out.assignments)
        if (a.agent == AgentRole::Human) a.instruction = out.instruction;

    out.after = assigned_;
    out.changed = !announced_once_ || assigned_ != announced_;
    announced_ = assigned_;
    announced_once_ = true;
    return out;
}

AtomicAction Manager::robot_action(const SubtaskGraph& g, const WorldState& w) {
    const AgentState& robot = w.agent(AgentRole::Robot);
    const Layout& layout = *w.layout;
    const bool bumped = robot_walk_ && robot.pos == robot_walk_->first && layout.is_floor(robot_walk_->second);
    robot_walk_.reset();
    if (bumped) return AtomicAction::Stay;
    const AtomicAction a = choose_robot_action(g, w);
    if (const auto d = direction_of(a)) robot_walk_ = {robot.pos, neighbor(robot.pos, *d)};
    return a;
}

AtomicAction Manager::choose_robot_action(const SubtaskGraph& g, const WorldState& w) const {
    const AgentState& robot = w.agent(AgentRole::Robot);
    const Layout& layout = *w.layout;

    // Where the human is expected to walk, so a blocked robot can clear it.
    std::set<GridPos> human_path;
    if (const auto h = assigned(AgentRole::Human); h && g.contains(*h))
        if (const auto p = task_plan(g, *h, w, AgentRole::Human, OtherAgent::Ignore))
            human_path = plan_cells(layout, w.agent(AgentRole::Human), *p);

    const auto id = assigned(AgentRole::Robot);
    if (!id || !g.contains(*id)) {
        if (human_path.count(robot.pos)) return yield_step(w, AgentRole::Robot, human_path);
        if (robot.held.empty()) return park(w, AgentRole::Robot);
        // Keep a held item only if some open task will still want it.
        for (const auto& [_, n] : g.nodes) {
            if (n.status == SubtaskStatus::Success || n.status == SubtaskStatus::Failure) continue;
            const auto need = required_held(infer_effect(n, &layout));
            if (need && *need == robot.held.kind) return park(w, AgentRole::Robot);
        }
        std::set<GridPos> free_counters;
        for (GridPos c : layout.cells_of(TileKind::Counter))
            if (!w.counter_item(c) && !layout.adjacent_floor(c).empty()) free_counters.insert(c);
        if (free_counters.empty()) return AtomicAction::Stay;
        return navigate(
            w, AgentRole::Robot,
            [&](OtherAgent treat) { return plan({&layout, robot, w.agent(AgentRole::Human), free_counters, treat}); },
            WhenBlocked::Yield, human_path);
    }

    return navigate(
        w, AgentRole::Robot, [&](OtherAgent treat) { return task_plan(g, *id, w, AgentRole::Robot, treat); },
        WhenBlocked::Yield, human_path);
}

JudgeVerdict Manager::judge(SubtaskGraph& g, const WorldState& prev, const WorldState& cur,
                            const std::array<bool, kAgentCount>& interacted) {
    JudgeVerdict v;
    auto add = [&](SubtaskId id) {
        if (std::find(v.finished_subtask_ids.begin(), v.finished_subtask_ids.end(), id) == v.finished_subtask_ids.end())
            v.finished_subtask_ids.push_back(id);
    };

    for (AgentRole role : {AgentRole::Robot, AgentRole::Human}) {
        const auto id = assigned(role);
        if (!id || !g.contains(*id)) continue;
        const SubtaskNode& n = g.node(*id);
        if (infer_effect(n, cur.layout.get()).kind == EffectKind::MoveTo &&
            at_move_target(n, *cur.layout, cur.agent(role).pos))
            add(*id);
    }

    if (interacted[0] || interacted[1]) {
        v.invoked = true;
        const lang::BackendResponse resp = backend_->complete(requests_->judge(prev, cur, g, assigned_, interacted));
        if (resp.payload)
            for (SubtaskId id : lang::judge_from_payload(*resp.payload).finished)
                if (g.contains(id) && open_status(g.node(id).status)) add(id);
    }

    const auto human = assigned(AgentRole::Human);
    const auto robot = assigned(AgentRole::Robot);
    for (SubtaskId id : v.finished_subtask_ids) {
        if (id == human) continue;
        if (id == robot && interacted[slot(AgentRole::Robot)]) continue;
        if (interacted[slot(AgentRole::Human)]) v.off_script = true;
    }

    for (SubtaskId id : v.finished_subtask_ids) {
        if (id == g.sink) v.sink_done = true;
        if (!g.contains(id) || g.node(id).status == SubtaskStatus::Success) continue; // implied by an earlier one
        complete(g, id);
        if (g.node(id).temporary) g = remove_temporary(std::move(g), id);
    }
    for (auto& a : assigned_)
        if (a && (!g.contains(*a) || g.node(*a).status == SubtaskStatus::Success)) a.reset();
    if (!v.finished_subtask_ids.empty()) idle_key_.reset();
    return v;
}

std::vector<SubtaskId> Manager::maintain(SubtaskGraph& g, const WorldState& w) {
    std::vector<SubtaskId> released;
    for (auto it = exclusion_left_.begin(); it != exclusion_left_.end();) {
        if (--it->second <= 0) {
            excluded_.erase(it->first);
            idle_key_.reset();
            it = exclusion_left_.erase(it);
        } else {
            ++it;
        }
    }

    std::vector<SubtaskId> executing;
    for (const auto& a : assigned_)
        if (a && g.contains(*a)) executing.push_back(*a);
    if (!executing.empty()) g = tick_running_time(std::move(g), executing, cfg_.stall);

    for (AgentRole role : {AgentRole::Robot, AgentRole::Human}) {
        const auto id = assigned(role);
        if (!id) continue;
        if (!g.contains(*id)) {
            assigned_[slot(role)].reset();
            continue;
        }
        const SubtaskNode& n = g.node(*id);
        const bool stalled = n.stalled;
        const bool unsuited = !can_start(infer_effect(n, w.layout.get()), w.agent(role).held);
        if (!stalled && !unsuited) continue;
        if (stalled) {
            const std::pair<int, SubtaskId> k{index_of(role), *id};
            excluded_.insert(k);
            // Each repeat stall on the same task doubles the time out.
            const int repeats = std::min(stall_count_[k]++, 6);
            exclusion_left_[k] = static_cast<int>(std::min<Cost>(stall_estimate(g, *id, cfg_.stall) << repeats, 1000));
        }
        released.push_back(*id);
        release(g, role);
    }
    return released;
}

} // namespace hrt
