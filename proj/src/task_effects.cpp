#include "hrt/task_effects.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace hrt {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Position of the earliest keyword from `words` in `s`, or npos.
std::size_t first_of(const std::string& s, std::initializer_list<std::string_view> words) {
    std::size_t best = std::string::npos;
    for (std::string_view w : words) best = std::min(best, s.find(w));
    return best;
}

ItemKind item_from_targets(const SubtaskNode& n, const Layout* layout) {
    if (!layout) return ItemKind::None;
    for (GridPos p : n.targets) {
        switch (layout->at(p)) {
        case TileKind::OnionDispenser: return ItemKind::Onion;
        case TileKind::TomatoDispenser: return ItemKind::Tomato;
        case TileKind::DishDispenser: return ItemKind::Dish;
        case TileKind::ServeWindow: return ItemKind::Soup;
        case TileKind::Pot:
            if (n.task_type == SubtaskType::Getting) return ItemKind::Soup;
            break;
        default: break;
        }
    }
    return ItemKind::None;
}

} // namespace

std::string_view to_string(EffectKind k) {
    switch (k) {
    case EffectKind::Pick: return "pick";
    case EffectKind::Put: return "put";
    case EffectKind::Cook: return "cook";
    case EffectKind::MoveTo: return "move_to";
    }
    return "?";
}

TaskEffect infer_effect(const SubtaskNode& n, const Layout* layout) {
    const std::string name = lower(n.name);
    TaskEffect e;

    constexpr auto npos = std::string::npos;
    const std::size_t move = first_of(name, {"move", "go to", "stand", "step aside", "out of"});
    const std::size_t cook = first_of(name, {"cook", "boil"});
    const std::size_t put = first_of(name, {"put", "place", "serve", "deliver", "drop", "pour", "add"});
    const std::size_t pick = first_of(name, {"pick", "get", "take", "grab", "fetch", "collect"});

    if (move != npos && move <= std::min({cook, put, pick})) {
        e.kind = EffectKind::MoveTo;
        return e;
    }
    if (cook != npos && cook < std::min(put, pick)) {
        e.kind = EffectKind::Cook;
        return e;
    }
    if (put != npos || pick != npos) {
        e.kind = put < pick ? EffectKind::Put : EffectKind::Pick;
    } else {
        switch (n.task_type) {
        case SubtaskType::Putting: e.kind = EffectKind::Put; break;
        case SubtaskType::Getting: e.kind = EffectKind::Pick; break;
        case SubtaskType::Operating: e.kind = EffectKind::Cook; return e;
        }
    }

    if (name.find("soup") != npos) e.item = ItemKind::Soup;
    else if (const std::size_t o = name.find("onion"), t = name.find("tomato"); o != npos || t != npos)
        e.item = o < t ? ItemKind::Onion : ItemKind::Tomato;
    else if (first_of(name, {"dish", "plate", "bowl"}) != npos) e.item = ItemKind::Dish;
    else e.item = item_from_targets(n, layout);
    return e;
}

std::optional<ItemKind> required_held(const TaskEffect& e) {
    switch (e.kind) {
    case EffectKind::MoveTo: return std::nullopt;
    case EffectKind::Cook: return ItemKind::None;
    case EffectKind::Pick: return e.item == ItemKind::Soup ? ItemKind::Dish : ItemKind::None;
    case EffectKind::Put: return e.item;
    }
    return std::nullopt;
}

std::optional<ItemKind> held_after(const TaskEffect& e) {
    switch (e.kind) {
    case EffectKind::MoveTo: return std::nullopt;
    case EffectKind::Cook: return ItemKind::None;
    case EffectKind::Pick: return e.item;
    case EffectKind::Put: return ItemKind::None;
    }
    return std::nullopt;
}

bool at_move_target(const SubtaskNode& n, const Layout& layout, GridPos pos) {
    for (GridPos t : n.targets) {
        if (t == pos) return true;
        // A fixture cannot be stood on; being next to it counts.
        if (layout.at(t) != TileKind::Floor && std::abs(t.x - pos.x) + std::abs(t.y - pos.y) == 1) return true;
    }
    return false;
}

bool can_start(const TaskEffect& e, const Item& held) {
    const auto need = required_held(e);
    return !need || held.kind == *need;
}

bool effect_completed(const SubtaskNode& n, const TaskEffect& e, AgentRole role, const WorldState& prev,
                      const WorldState& cur) {
    const AgentState& before = prev.agent(role);
    const AgentState& after = cur.agent(role);
    const auto targeted = [&](GridPos p) { return std::find(n.targets.begin(), n.targets.end(), p) != n.targets.end(); };

    if (e.kind == EffectKind::MoveTo) return at_move_target(n, *cur.layout, after.pos);

    // Interact-driven effects happen at the tile faced before the step.
    const GridPos tile = before.facing_cell();
    if (!targeted(tile)) return false;
    switch (e.kind) {
    case EffectKind::Pick:
        if (e.item == ItemKind::None) return before.held.empty() && !after.held.empty();
        return before.held.kind != e.item && after.held.kind == e.item;
    case EffectKind::Put:
        if (!before.held.empty() && after.held.empty()) return e.item == ItemKind::None || before.held.kind == e.item;
        return false;
    case EffectKind::Cook: {
        const PotState* p0 = prev.pot_at(tile);
        const PotState* p1 = cur.pot_at(tile);
        return p0 && p1 && p0->phase == PotPhase::Idle && p1->phase != PotPhase::Idle;
    }
    case EffectKind::MoveTo: break;
    }
    return false;
}

} // namespace hrt
