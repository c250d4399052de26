#pragma once

#include "hrt/manager_rules.hpp"
#include "hrt/team.hpp"

#include <random>

namespace hrt {

enum class PolicyKind : std::uint8_t { Compliant, Independent, Requester, Idle };

std::string_view to_string(PolicyKind k);
std::optional<PolicyKind> policy_from_string(std::string_view s);

/// A coordination message the Requester sends at a fixed game tick. The
/// dialog lasts `dialog_ticks` wall ticks, spread over its messages.
struct ScriptedRequest {
    int tick = 0;
    std::vector<std::string> messages;
    int dialog_ticks = 25;
};

struct PolicyConfig {
    PolicyKind kind = PolicyKind::Compliant;
    std::vector<ScriptedRequest> script; // Requester only
    double think_noise = 0.0;            // chance of a Stay instead of the chosen action
};

/// How a scripted agent moves: wait for the other agent to clear the way, or
/// give way itself; `blocked` reports whether the other agent was in the way.
struct Movement {
    WhenBlocked when_blocked = WhenBlocked::Wait;
    bool* blocked = nullptr;
};

/// The greedy self-planner: serve held soup, fetch a dish while soup cooks,
/// fill the pot with what the active order still lacks, start a full pot.
AtomicAction greedy_action(const WorldState& w, AgentRole role, Movement m = {});

/// Step toward carrying out an instruction; parks out of the way when it
/// names no task.
AtomicAction follow_instruction(const Instruction& ins, const WorldState& w, AgentRole role, Movement m = {});

/// Everything an action choice of the scripted human may depend on.
class HumanPolicy {
public:
    HumanPolicy(PolicyConfig cfg, std::uint64_t seed);

    AtomicAction act(const TeamCore& core);
    /// Whether to accept a suggestion offer.
    bool accepts_suggestions() const { return cfg_.kind == PolicyKind::Compliant || cfg_.kind == PolicyKind::Requester; }
    /// Requests due at this game tick.
    std::vector<ScriptedRequest> due(int tick) const;
    const PolicyConfig& config() const { return cfg_; }

private:
    PolicyConfig cfg_;
    std::mt19937_64 rng_;
    int blocked_ticks_ = 0; // consecutive ticks spent waiting on the robot
};

} // namespace hrt
