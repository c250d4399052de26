#pragma once

#include "hrt/coordinator.hpp"
#include "hrt/feedback.hpp"
#include "hrt/manager.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hrt {

enum class Phase : std::uint8_t { Lobby, Running, Paused, Finished };

std::string_view to_string(Phase p);

/// One entry of a trial's append-only log. `tick` is the game clock,
/// `wall` counts every tick including paused ones.
struct TrialEvent {
    int tick = 0;
    int wall = 0;
    std::string kind;
    json payload = json::object();

    bool operator==(const TrialEvent&) const = default;
};

json to_json(const TrialEvent& e);

struct TrialStats {
    int score = 0;
    int deliveries = 0;
    int robot_messages = 0;     // delivered to the human
    int suppressed_messages = 0;
    int human_messages = 0;
    int dialogs = 0;
    int off_script = 0;
    int graph_revisions = 0;
    int corrections = 0;
    int coerced_actions = 0;
    int fallbacks = 0;
    int unpaused_ticks = 0;
    int paused_ticks = 0;
    double mean_robot_plan_cost = 0.0;

    bool operator==(const TrialStats&) const = default;
};

json to_json(const TrialStats& s);
TrialStats stats_from_json(const json& j);

/// What the human was last told to do (delivered instructions only).
struct Instruction {
    std::optional<SubtaskId> subtask;
    std::string name;
    SubtaskType task_type = SubtaskType::Getting;
    std::vector<GridPos> targets;
    std::string text;
    int tick = 0;
};

/// A robot-authored message that passed the feedback gate.
struct OutboundMessage {
    Outbound channel = Outbound::HumanQueryReply;
    std::string text;
    int tick = 0;
    bool offer = false; // a suggestion the human can accept
};

struct TeamConfig {
    std::shared_ptr<const Layout> layout;
    RecipeBook book = RecipeBook::standard();
    FeedbackMode mode{};
    lang::BackendPtr backend;
    std::uint64_t seed = 0;
    CoordinatorConfig coordinator{};
    ManagerConfig manager{};
    WorldConfig world{};
};

/// The deterministic heart of a session: world, graph, Manager, Coordinator
/// and feedback gating, advanced one tick at a time by its owner.
class TeamCore {
public:
    explicit TeamCore(TeamConfig cfg);

    /// Lobby -> Running: builds the first graph and makes the first allocation.
    void start();

    /// One unpaused tick with the human's action. Actions with no effect are
    /// coerced to Stay and flagged.
    void tick(AtomicAction human);

    /// A wall-clock tick spent in a dialog; the game clock does not move.
    void paused_tick();

    /// Human chat: pauses the game and routes the message through the
    /// Coordinator. Returns false (and logs a notice) when chat is disabled.
    bool chat(const std::string& text);
    void end_dialog();

    /// Answers the pending suggestion offer; returns whether the graph changed.
    bool respond_to_suggestion(bool accept);
    bool suggestion_pending() const { return pending_.has_value(); }

    Phase phase() const { return phase_; }
    bool over() const { return phase_ == Phase::Finished; }
    const WorldState& world() const { return world_; }
    const SubtaskGraph& graph() const { return graph_; }
    const Manager& manager() const { return manager_; }
    const FeedbackMode& mode() const { return cfg_.mode; }
    const TeamConfig& config() const { return cfg_; }
    const lang::RequestBuilder& requests() const { return *requests_; }

    const std::vector<TrialEvent>& events() const { return events_; }
    TrialStats stats() const;
    const std::optional<Instruction>& latest_instruction() const { return instruction_; }
    const std::vector<OutboundMessage>& transcript() const { return transcript_; }
    int unpaused_ticks() const { return unpaused_; }
    int trial_ticks() const { return cfg_.layout->trial_ticks(); }

    /// Robot messages delivered since the last call.
    std::vector<OutboundMessage> drain_outbox();

private:
    void log(std::string kind, json payload = json::object());
    void emit(Outbound channel, const std::string& text, bool offer = false, const json& extra = json::object());
    void install_graph(const GraphOutcome& g, const std::string& reason);
    void run_allocation();
    void maybe_suggest();
    void next_order();

    TeamConfig cfg_;
    std::shared_ptr<const lang::RequestBuilder> requests_;
    Coordinator coordinator_;
    Manager manager_;
    WorldState world_;
    SubtaskGraph graph_;
    std::string graph_recipe_;
    Phase phase_ = Phase::Lobby;
    int unpaused_ = 0;
    int wall_ = 0;
    int paused_ticks_ = 0;
    std::vector<TrialEvent> events_;
    std::vector<OutboundMessage> transcript_;
    std::size_t drained_ = 0;
    std::optional<Instruction> instruction_;
    std::optional<Suggestion> pending_;
    TrialStats counters_{};
};

} // namespace hrt
