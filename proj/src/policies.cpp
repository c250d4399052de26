#include "hrt/policies.hpp"

#include "hrt/manager_rules.hpp"

namespace hrt {

std::string_view to_string(PolicyKind k) {
    switch (k) {
    case PolicyKind::Compliant: return "compliant";
    case PolicyKind::Independent: return "independent";
    case PolicyKind::Requester: return "requester";
    case PolicyKind::Idle: return "idle";
    }
    return "?";
}

std::optional<PolicyKind> policy_from_string(std::string_view s) {
    for (PolicyKind k : {PolicyKind::Compliant, PolicyKind::Independent, PolicyKind::Requester, PolicyKind::Idle})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

namespace {

constexpr int kPatience = 3;

AtomicAction toward(const WorldState& w, AgentRole role, const std::set<GridPos>& goals, Movement m) {
    if (goals.empty()) return AtomicAction::Stay;
    return navigate(
        w, role, [&](OtherAgent treat) { return plan({w.layout.get(), w.agent(role), w.agent(other(role)), goals, treat}); },
        m.when_blocked, {}, m.blocked);
}

std::set<GridPos> tiles(const Layout& l, TileKind k) {
    const auto v = l.cells_of(k);
    return {v.begin(), v.end()};
}

} // namespace

AtomicAction greedy_action(const WorldState& w, AgentRole role, Movement m) {
    if (m.blocked) *m.blocked = false;
    const Layout& layout = *w.layout;
    const AgentState& self = w.agent(role);
    const AgentState& mate = w.agent(other(role));
    if (w.pots.empty()) return AtomicAction::Stay;
    const PotState& pot = w.pots.front();
    const std::set<GridPos> pot_goal{pot.pos};

    if (self.held.kind == ItemKind::Soup) return toward(w, role, tiles(layout, TileKind::ServeWindow), m);
    if (self.held.kind == ItemKind::Dish) return toward(w, role, pot_goal, m);

    const Recipe* recipe = w.orders.empty() ? nullptr : &w.orders.front();
    auto still_needed = [&](Ingredient i) {
        if (!recipe) return 0;
        int n = recipe->required.count(i) - pot.contents.count(i);
        if (ingredient_of(mate.held.kind) == i) --n;
        if (ingredient_of(self.held.kind) == i) --n;
        return n;
    };

    if (const auto ing = ingredient_of(self.held.kind)) {
        if (pot.phase == PotPhase::Idle && pot.contents.size() < layout.pot_capacity) return toward(w, role, pot_goal, m);
        std::set<GridPos> free;
        for (GridPos c : layout.cells_of(TileKind::Counter))
            if (!w.counter_item(c)) free.insert(c);
        return toward(w, role, free, m);
    }

    // Empty hands.
    if (pot.phase == PotPhase::Idle && recipe && !pot.contents.empty() &&
        (pot.contents == recipe->required || pot.contents.size() >= layout.pot_capacity))
        return toward(w, role, pot_goal, m);
    if (pot.phase == PotPhase::Idle) {
        for (Ingredient i : kIngredients) {
            if (still_needed(i) <= 0) continue;
            const TileKind src = i == Ingredient::Onion ? TileKind::OnionDispenser : TileKind::TomatoDispenser;
            return toward(w, role, tiles(layout, src), m);
        }
        return park(w, role);
    }
    const bool mate_serving = mate.held.kind == ItemKind::Dish || mate.held.kind == ItemKind::Soup;
    if (!mate_serving) return toward(w, role, tiles(layout, TileKind::DishDispenser), m);
    return park(w, role);
}

AtomicAction follow_instruction(const Instruction& ins, const WorldState& w, AgentRole role, Movement m) {
    if (m.blocked) *m.blocked = false;
    if (!ins.subtask || ins.targets.empty()) return park(w, role);
    SubtaskNode n;
    n.id = *ins.subtask;
    n.name = ins.name;
    n.task_type = ins.task_type;
    n.targets = ins.targets;
    return navigate(
        w, role, [&](OtherAgent treat) { return plan_for_node(n, w, role, treat); }, m.when_blocked, {}, m.blocked);
}

HumanPolicy::HumanPolicy(PolicyConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {}

std::vector<ScriptedRequest> HumanPolicy::due(int tick) const {
    std::vector<ScriptedRequest> out;
    if (cfg_.kind != PolicyKind::Requester) return out;
    for (const ScriptedRequest& r : cfg_.script)
        if (r.tick == tick) out.push_back(r);
    return out;
}

AtomicAction HumanPolicy::act(const TeamCore& core) {
    // Draw every tick so the noise stream does not depend on the mode.
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    if (cfg_.kind == PolicyKind::Idle) return AtomicAction::Stay;
    if (cfg_.think_noise > 0.0 && u < cfg_.think_noise) return AtomicAction::Stay;
    const WorldState& w = core.world();
    // Wait a moment for the robot to clear the way, then give way ourselves.
    bool blocked = false;
    const Movement m{blocked_ticks_ >= kPatience ? WhenBlocked::Yield : WhenBlocked::Wait, &blocked};
    const AtomicAction a = cfg_.kind != PolicyKind::Independent && core.latest_instruction()
                               ? follow_instruction(*core.latest_instruction(), w, AgentRole::Human, m)
                               : greedy_action(w, AgentRole::Human, m);
    blocked_ticks_ = blocked ? blocked_ticks_ + 1 : 0;
    return a;
}

} // namespace hrt
