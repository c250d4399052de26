#pragma once

#include "hrt/subtask_graph.hpp"

namespace hrt {

/// What finishing a subtask does to the agent that performs it. Inferred
/// from the node, since language-model graphs only carry a name, a type and
/// target tiles.
enum class EffectKind : std::uint8_t { Pick, Put, Cook, MoveTo };

std::string_view to_string(EffectKind k);

struct TaskEffect {
    EffectKind kind = EffectKind::Pick;
    ItemKind item = ItemKind::None; // picked up (Pick) or given away (Put)

    bool operator==(const TaskEffect&) const = default;
};

/// Verb keywords in the name decide the kind (the earliest one wins), falling
/// back to the task type. Item keywords rank soup over onion/tomato over dish;
/// with none present the target tiles decide. `layout` may be null.
TaskEffect infer_effect(const SubtaskNode& n, const Layout* layout);

/// The item the agent must be holding to start the task: std::nullopt for
/// "anything" (MoveTo), ItemKind::None for empty hands.
std::optional<ItemKind> required_held(const TaskEffect& e);

/// What the agent holds once the task is done (std::nullopt: unchanged).
std::optional<ItemKind> held_after(const TaskEffect& e);

/// Standing on a floor target, or next to a fixture target.
bool at_move_target(const SubtaskNode& n, const Layout& layout, GridPos pos);

bool can_start(const TaskEffect& e, const Item& held);

/// Whether the transition prev -> cur of agent `role` completes node `n`.
/// Pick/Put/Cook need the matching held-item or pot change at a faced tile in
/// the node's targets; MoveTo completes on arrival at a target cell.
bool effect_completed(const SubtaskNode& n, const TaskEffect& e, AgentRole role, const WorldState& prev,
                      const WorldState& cur);

} // namespace hrt
