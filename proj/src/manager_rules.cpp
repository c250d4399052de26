#include "hrt/manager_rules.hpp"

#include "hrt/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>

namespace hrt {

namespace {

std::size_t slot(AgentRole r) { return static_cast<std::size_t>(index_of(r)); }

bool is_pending_for_assignment(const SubtaskNode& n) {
    return n.status == SubtaskStatus::ReadyToExecute || n.status == SubtaskStatus::Emergency;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string where(const SubtaskNode& n) {
    if (n.targets.empty()) return {};
    std::ostringstream out;
    out << " at (" << n.targets.front().x << ", " << n.targets.front().y << ")";
    return out.str();
}

} // namespace

std::optional<AgentRole> preferred_agent(std::string_view notes) {
    const std::string s = lower(notes);
    const auto h = s.find("human");
    const auto r = s.find("robot");
    if (h == std::string::npos && r == std::string::npos) return std::nullopt;
    return h < r ? AgentRole::Human : AgentRole::Robot;
}

AtomicAction navigate(const WorldState& w, AgentRole role,
                      const std::function<std::optional<Plan>(OtherAgent)>& planner, WhenBlocked blocked,
                      const std::set<GridPos>& avoid, bool* was_blocked) {
    if (was_blocked) *was_blocked = false;
    const AgentState& self = w.agent(role);
    const AgentState& mate = w.agent(other(role));
    auto first = [&](const Plan& p) {
        if (p.actions.empty()) return AtomicAction::Stay;
        const AtomicAction a = p.actions.front();
        if (a == AtomicAction::Interact && interact_outcome(w, self).result == InteractResult::Failed) return AtomicAction::Stay;
        return a;
    };
    if (const auto p = planner(OtherAgent::Obstacle)) return first(*p);
    const auto p = planner(OtherAgent::Ignore);
    if (!p || p->actions.empty()) return AtomicAction::Stay;
    if (was_blocked) *was_blocked = true;
    if (blocked == WhenBlocked::Yield) return yield_step(w, role, avoid);
    const AtomicAction a = p->actions.front();
    const auto d = direction_of(a);
    if (d && neighbor(self.pos, *d) == mate.pos) return AtomicAction::Stay;
    return first(*p);
}

std::set<GridPos> plan_cells(const Layout& layout, const AgentState& start, const Plan& p) {
    std::set<GridPos> out;
    GridPos pos = start.pos;
    for (AtomicAction a : p.actions) {
        const auto d = direction_of(a);
        if (!d) continue;
        const GridPos n = neighbor(pos, *d);
        if (layout.is_floor(n)) {
            pos = n;
            out.insert(pos);
        }
    }
    return out;
}

AtomicAction yield_step(const WorldState& w, AgentRole role, const std::set<GridPos>& avoid) {
    const Layout& layout = *w.layout;
    const AgentState& self = w.agent(role);
    const AgentState& mate = w.agent(other(role));
    if (avoid.count(self.pos)) {
        std::optional<Plan> best;
        for (GridPos c : layout.floor_cells()) {
            if (avoid.count(c) || c == mate.pos) continue;
            auto p = plan_to_cell(layout, self, mate, c, OtherAgent::Obstacle);
            if (p && !p->actions.empty() && (!best || p->cost() < best->cost())) best = std::move(p);
        }
        if (best) return best->actions.front();
    }
    // Walking distance from the other agent, through floor only.
    std::map<GridPos, int> dist{{mate.pos, 0}};
    std::vector<GridPos> frontier{mate.pos};
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        const GridPos p = frontier[i];
        for (Direction d : kDirections) {
            const GridPos n = neighbor(p, d);
            if (layout.is_floor(n) && dist.emplace(n, dist[p] + 1).second) frontier.push_back(n);
        }
    }
    const auto far = [&](GridPos c) { auto it = dist.find(c); return it == dist.end() ? 0 : it->second; };
    std::optional<Direction> pick;
    int best = far(self.pos);
    for (Direction d : kDirections) {
        const GridPos n = neighbor(self.pos, d);
        if (!layout.is_floor(n) || n == mate.pos) continue;
        if (far(n) > best) {
            best = far(n);
            pick = d;
        }
    }
    return pick ? move_action(*pick) : AtomicAction::Stay;
}

AtomicAction park(const WorldState& w, AgentRole role) {
    const Layout& layout = *w.layout;
    const std::set<GridPos> critical = critical_cells(layout);
    auto quiet = [&](GridPos c) {
        for (Direction d : kDirections)
            if (is_interaction_tile(layout.at(neighbor(c, d)))) return false;
        return true;
    };
    // Best: out of everyone's way. Next: at least not a chokepoint.
    auto rank = [&](GridPos c) { return (critical.count(c) ? 2 : 0) + (quiet(c) ? 0 : 1); };
    const AgentState& self = w.agent(role);
    const AgentState& mate = w.agent(other(role));
    const int here = rank(self.pos);
    if (here == 0) return AtomicAction::Stay;
    std::optional<std::pair<std::pair<int, Cost>, Plan>> best;
    for (GridPos c : layout.floor_cells()) {
        if (c == mate.pos || rank(c) >= here) continue;
        auto p = plan_to_cell(layout, self, mate, c, OtherAgent::Obstacle);
        if (!p || p->actions.empty()) continue;
        const std::pair<int, Cost> key{rank(c), p->cost()};
        if (!best || key < best->first) best = {{key, std::move(*p)}};
    }
    return best ? best->second.actions.front() : AtomicAction::Stay;
}

std::optional<Plan> task_plan(const SubtaskGraph& g, SubtaskId id, const WorldState& w, AgentRole role,
                              OtherAgent treat_other_as) {
    return plan_for_node(g.node(id), w, role, treat_other_as);
}

std::optional<Plan> plan_for_node(const SubtaskNode& n, const WorldState& w, AgentRole role, OtherAgent treat_other_as) {
    const Layout& layout = *w.layout;
    const AgentState& self = w.agent(role);
    const AgentState& other = w.agent(hrt::other(role));
    const TaskEffect e = infer_effect(n, &layout);

    std::set<GridPos> fixtures;
    std::vector<GridPos> floors;
    for (GridPos p : n.targets) {
        if (!layout.in_bounds(p)) continue;
        if (layout.at(p) == TileKind::Floor) floors.push_back(p);
        else fixtures.insert(p);
    }

    if (e.kind == EffectKind::MoveTo) {
        if (at_move_target(n, layout, self.pos)) return Plan{{}, self.pos};
        std::optional<Plan> best;
        for (GridPos f : floors) {
            auto p = plan_to_cell(layout, self, other, f, treat_other_as);
            if (p && (!best || p->cost() < best->cost())) best = p;
        }
        if (!fixtures.empty()) {
            PlanQuery q{&layout, self, other, fixtures, treat_other_as};
            if (auto p = plan(q)) {
                p->actions.pop_back(); // arrive only; a move task does not interact
                if (!best || p->cost() < best->cost()) best = p;
            }
        }
        return best;
    }
    if (fixtures.empty()) return std::nullopt;
    PlanQuery q{&layout, self, other, fixtures, treat_other_as};
    return plan(q);
}

Eligibility hard_eligible(const SubtaskGraph& g, SubtaskId id, const WorldState& w, AgentRole role) {
    if (!g.contains(id)) return {false, "unknown subtask " + std::to_string(id)};
    const SubtaskNode& n = g.node(id);
    if (!is_pending_for_assignment(n)) return {false, "subtask " + std::to_string(id) + " is " + std::string(to_string(n.status))};
    const TaskEffect e = infer_effect(n, w.layout.get());
    if (!can_start(e, w.agent(role).held))
        return {false, std::string(to_string(role)) + " holding " + w.agent(role).held.describe() + " cannot start " + n.name};
    if (!task_plan(g, id, w, role)) return {false, n.name + " is unreachable for the " + std::string(to_string(role))};
    return {true, {}};
}

Eligibility rule_eligible(const SubtaskGraph& g, SubtaskId id, const WorldState& w, AgentRole role) {
    Eligibility e = hard_eligible(g, id, w, role);
    if (!e.ok) return e;
    const auto bound = preferred_agent(g.node(id).notes);
    if (!bound || *bound == role) return e;
    // Soft override: the preferred agent's hands are full with something else.
    const TaskEffect fx = infer_effect(g.node(id), w.layout.get());
    if (!can_start(fx, w.agent(*bound).held)) return e;
    return {false, g.node(id).name + " is bound to the " + std::string(to_string(*bound))};
}

namespace {

std::optional<SubtaskId> best_for(const SubtaskGraph& g, const WorldState& w, AgentRole role,
                                  const std::vector<SubtaskId>& taken, bool respect_preferences,
                                  const Exclusions& excluded) {
    using Key = std::tuple<int, Cost, Cost, SubtaskId>;
    std::optional<std::pair<Key, SubtaskId>> best;
    for (SubtaskId id : ready_set(g)) {
        if (std::find(taken.begin(), taken.end(), id) != taken.end()) continue;
        if (excluded.count({index_of(role), id})) continue;
        const Eligibility ok = respect_preferences ? rule_eligible(g, id, w, role) : hard_eligible(g, id, w, role);
        if (!ok.ok) continue;
        const SubtaskNode& n = g.node(id);
        const Cost c = task_plan(g, id, w, role)->cost();
        const Key k{n.status == SubtaskStatus::Emergency ? 0 : 1, -n.priority, c, id};
        if (!best || k < best->first) best = {k, id};
    }
    if (!best) return std::nullopt;
    return best->second;
}

} // namespace

RuleAllocation rule_allocate(const SubtaskGraph& g, const WorldState& w, const AssignedPair& current,
                             const Exclusions& excluded) {
    RuleAllocation out;
    out.picks = current;
    for (AgentRole role : {AgentRole::Robot, AgentRole::Human}) {
        if (out.picks[slot(role)]) continue;
        std::vector<SubtaskId> taken;
        for (const auto& p : out.picks)
            if (p) taken.push_back(*p);
        out.picks[slot(role)] = best_for(g, w, role, taken, true, excluded);
        if (!out.picks[slot(role)]) out.nothing_assignable = true;
    }
    return out;
}

AssignedPair correct_allocation(const SubtaskGraph& g, const WorldState& w, const AssignedPair& current,
                                const AssignedPair& proposed, std::vector<std::string>* corrections,
                                const Exclusions& excluded) {
    AssignedPair out = current;
    auto note = [&](std::string s) {
        if (corrections) corrections->push_back(std::move(s));
    };
    for (AgentRole role : {AgentRole::Robot, AgentRole::Human}) {
        const std::size_t i = slot(role);
        const std::string who(to_string(role));
        if (current[i]) {
            if (proposed[i] != current[i]) note(who + " is busy and keeps subtask " + std::to_string(*current[i]));
            continue;
        }
        std::vector<SubtaskId> taken;
        for (const auto& p : out)
            if (p) taken.push_back(*p);
        const auto emergency_pick = [&]() -> std::optional<SubtaskId> {
            auto id = best_for(g, w, role, taken, true, excluded);
            if (id && g.node(*id).status == SubtaskStatus::Emergency) return id;
            return std::nullopt;
        }();

        std::optional<SubtaskId> p = proposed[i];
        std::string why;
        if (p) {
            if (std::find(taken.begin(), taken.end(), *p) != taken.end()) why = "subtask " + std::to_string(*p) + " is already assigned";
            else if (auto e = hard_eligible(g, *p, w, role); !e.ok) why = e.reason;
            else if (excluded.count({index_of(role), *p})) why = "subtask " + std::to_string(*p) + " just stalled for this agent";
            else if (emergency_pick && g.node(*p).status != SubtaskStatus::Emergency) why = "emergency subtask comes first";
        } else if (emergency_pick) {
            why = "emergency subtask comes first";
        }
        if (!why.empty()) {
            p = best_for(g, w, role, taken, true, excluded);
            note(who + ": " + why + "; using " + (p ? std::to_string(*p) : std::string("none")));
        }
        out[i] = p;
    }
    return out;
}

std::string instruction_text(const SubtaskGraph& g, const AssignedPair& picks) {
    const auto human = picks[slot(AgentRole::Human)];
    const auto robot = picks[slot(AgentRole::Robot)];
    if (human && g.contains(*human)) {
        const SubtaskNode& n = g.node(*human);
        return "Please " + n.name + where(n) + ".";
    }
    if (robot && g.contains(*robot)) return "Please wait; I will " + g.node(*robot).name + ".";
    return "Nothing to do right now; please wait.";
}

RuleVerdict rule_judge(const SubtaskGraph& g, const WorldState& prev, const WorldState& cur,
                       const AssignedPair& current, const std::array<bool, kAgentCount>& interacted) {
    RuleVerdict v;
    auto claimed = [&](SubtaskId id) { return std::find(v.finished.begin(), v.finished.end(), id) != v.finished.end(); };
    for (AgentRole role : {AgentRole::Robot, AgentRole::Human}) {
        const auto own = current[slot(role)];
        const auto theirs = current[slot(other(role))];
        std::vector<SubtaskId> order;
        if (own) order.push_back(*own);
        for (SubtaskId id : ready_set(g))
            if (id != own && id != theirs) order.push_back(id);
        if (theirs) order.push_back(*theirs);
        // Last, tasks the graph does not consider ready yet: the world may
        // show them done anyway (an ingredient fetched off the plan).
        for (const auto& [id, n] : g.nodes)
            if (n.status == SubtaskStatus::NotReady || n.status == SubtaskStatus::Failure) order.push_back(id);

        for (SubtaskId id : order) {
            if (claimed(id) || !g.contains(id)) continue;
            const SubtaskNode& n = g.node(id);
            const TaskEffect e = infer_effect(n, cur.layout.get());
            if (e.kind == EffectKind::MoveTo) {
                if (id != own) continue; // arrival only counts for the agent sent there
            } else if (!interacted[slot(role)]) {
                continue;
            }
            if (!effect_completed(n, e, role, prev, cur)) continue;
            v.finished.push_back(id);
            if (role == AgentRole::Human && id != own) v.off_script = true;
            break;
        }
    }
    return v;
}

} // namespace hrt
