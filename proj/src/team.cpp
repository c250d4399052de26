#include "hrt/team.hpp"

#include "hrt/json_io.hpp"

#include <algorithm>

namespace hrt {

std::string_view to_string(Phase p) {
    switch (p) {
    case Phase::Lobby: return "lobby";
    case Phase::Running: return "running";
    case Phase::Paused: return "paused";
    case Phase::Finished: return "finished";
    }
    return "?";
}

json to_json(const TrialEvent& e) {
    json j = e.payload.is_object() ? e.payload : json::object();
    j["tick"] = e.tick;
    j["wall"] = e.wall;
    j["kind"] = e.kind;
    return j;
}

json to_json(const TrialStats& s) {
    return {{"score", s.score},
            {"deliveries", s.deliveries},
            {"robot_messages", s.robot_messages},
            {"suppressed_messages", s.suppressed_messages},
            {"human_messages", s.human_messages},
            {"dialogs", s.dialogs},
            {"off_script", s.off_script},
            {"graph_revisions", s.graph_revisions},
            {"corrections", s.corrections},
            {"coerced_actions", s.coerced_actions},
            {"fallbacks", s.fallbacks},
            {"unpaused_ticks", s.unpaused_ticks},
            {"paused_ticks", s.paused_ticks},
            {"mean_robot_plan_cost", s.mean_robot_plan_cost}};
}

TrialStats stats_from_json(const json& j) {
    TrialStats s;
    s.score = j.at("score").get<int>();
    s.deliveries = j.at("deliveries").get<int>();
    s.robot_messages = j.at("robot_messages").get<int>();
    s.suppressed_messages = j.value("suppressed_messages", 0);
    s.human_messages = j.at("human_messages").get<int>();
    s.dialogs = j.at("dialogs").get<int>();
    s.off_script = j.at("off_script").get<int>();
    s.graph_revisions = j.value("graph_revisions", 0);
    s.corrections = j.value("corrections", 0);
    s.coerced_actions = j.value("coerced_actions", 0);
    s.fallbacks = j.value("fallbacks", 0);
    s.unpaused_ticks = j.at("unpaused_ticks").get<int>();
    s.paused_ticks = j.at("paused_ticks").get<int>();
    s.mean_robot_plan_cost = j.at("mean_robot_plan_cost").get<double>();
    return s;
}

namespace {

std::shared_ptr<const lang::RequestBuilder> make_requests(const TeamConfig& cfg) {
    if (!cfg.layout) throw std::invalid_argument("team config has no layout");
    if (!cfg.backend) throw std::invalid_argument("team config has no backend");
    return std::make_shared<const lang::RequestBuilder>(cfg.layout, cfg.book, cfg.seed);
}

json ids_json(const AssignedPair& a) {
    return {{"human", a[0] ? json(*a[0]) : json(nullptr)}, {"robot", a[1] ? json(*a[1]) : json(nullptr)}};
}

} // namespace

TeamCore::TeamCore(TeamConfig cfg)
    : cfg_(std::move(cfg)),
      requests_(make_requests(cfg_)),
      coordinator_(cfg_.backend, requests_, cfg_.coordinator),
      manager_(cfg_.backend, requests_, cfg_.manager),
      world_(WorldState::initial(cfg_.layout)) {}

void TeamCore::log(std::string kind, json payload) {
    events_.push_back({world_.tick, wall_, std::move(kind), std::move(payload)});
}

void TeamCore::emit(Outbound channel, const std::string& text, bool offer, const json& extra) {
    if (text.empty()) return;
    json p = {{"channel", to_string(channel)}, {"text", text}};
    for (const auto& [k, v] : extra.items()) p[k] = v;
    if (gate_outbound(cfg_.mode, channel, world_.tick) == Gate::Suppress) {
        ++counters_.suppressed_messages;
        log("message_suppressed", std::move(p));
        return;
    }
    if (offer) p["offer"] = true;
    ++counters_.robot_messages;
    transcript_.push_back({channel, text, world_.tick, offer});
    log("robot_message", std::move(p));
}

std::vector<OutboundMessage> TeamCore::drain_outbox() {
    std::vector<OutboundMessage> out(transcript_.begin() + static_cast<std::ptrdiff_t>(drained_), transcript_.end());
    drained_ = transcript_.size();
    return out;
}

void TeamCore::install_graph(const GraphOutcome& g, const std::string& reason) {
    graph_ = g.graph;
    json p = {{"reason", reason}, {"nodes", graph_.nodes.size()}, {"edges", graph_.edges.size()},
              {"sink", graph_.sink}, {"version", graph_.version}, {"fallback", g.fallback}};
    if (g.fallback) {
        ++counters_.fallbacks;
        p["incident"] = g.incident;
    }
    log("graph", std::move(p));
}

void TeamCore::start() {
    if (phase_ != Phase::Lobby) throw std::logic_error("session already started");
    log("trial_start", {{"layout", cfg_.layout->name},
                        {"mode", cfg_.mode.name()},
                        {"interval_ticks", cfg_.mode.interval_ticks},
                        {"seed", cfg_.seed},
                        {"backend", cfg_.backend->name()},
                        {"trial_ticks", trial_ticks()}});
    if (world_.orders.empty()) throw std::logic_error("layout has no orders");
    graph_recipe_ = world_.orders.front().id;
    install_graph(coordinator_.generate_initial_graph(world_, world_.orders.front()), "initial");
    phase_ = Phase::Running;
    run_allocation();
}

void TeamCore::run_allocation() {
    const AllocationOutcome a = manager_.allocate(graph_, world_);
    counters_.corrections += static_cast<int>(a.corrections.size());
    if (!a.changed && a.corrections.empty()) return;
    json p = ids_json(a.after);
    p["instruction"] = a.instruction;
    p["changed"] = a.changed;
    if (!a.corrections.empty()) p["corrections"] = a.corrections;
    if (!a.preempted.empty()) p["preempted"] = a.preempted;
    if (a.nothing_assignable) p["nothing_assignable"] = true;
    log("allocation", std::move(p));
    if (!a.changed) return;

    const auto human = a.after[0];
    json extra = {{"subtask", human ? json(*human) : json(nullptr)}};
    const bool delivered = gate_outbound(cfg_.mode, Outbound::AllocationInstruction, world_.tick) == Gate::Deliver;
    emit(Outbound::AllocationInstruction, a.instruction, false, extra);
    if (delivered) {
        Instruction ins;
        ins.subtask = human;
        ins.text = a.instruction;
        ins.tick = world_.tick;
        if (human && graph_.contains(*human)) {
            const SubtaskNode& n = graph_.node(*human);
            ins.name = n.name;
            ins.task_type = n.task_type;
            ins.targets = n.targets;
        }
        instruction_ = std::move(ins);
    }
}

void TeamCore::maybe_suggest() {
    if (!cfg_.mode.suggestion_due(world_.tick)) return;
    Suggestion s = coordinator_.active_suggestion(graph_, world_);
    if (s.empty()) return;
    json p = {{"coordinator_suggestion", s.coordinator_suggestion},
              {"preference_suggestion", s.preference_suggestion},
              {"split_ops", s.proposed_revision.size()}};
    if (s.unreachable) p["unreachable"] = true;
    log("suggestion", p);
    const std::string text = s.coordinator_suggestion.empty() ? s.preference_suggestion
                             : s.preference_suggestion.empty()
                                 ? s.coordinator_suggestion
                                 : s.coordinator_suggestion + " " + s.preference_suggestion;
    const bool offer = !s.proposed_revision.empty();
    const bool delivered = gate_outbound(cfg_.mode, Outbound::CoordinatorSuggestion, world_.tick) == Gate::Deliver;
    emit(Outbound::CoordinatorSuggestion, text, offer);
    if (offer && delivered) pending_ = std::move(s);
}

bool TeamCore::respond_to_suggestion(bool accept) {
    if (!pending_) return false;
    Suggestion s = std::move(*pending_);
    pending_.reset();
    bool applied = false;
    std::string why;
    if (accept) {
        try {
            graph_ = coordinator_.accept(graph_, s);
            applied = true;
        } catch (const std::exception& e) {
            why = e.what();
        }
    }
    json p = {{"accept", accept}, {"applied", applied}};
    if (!why.empty()) p["error"] = why;
    log("suggestion_response", std::move(p));
    if (applied) {
        ++counters_.graph_revisions;
        std::vector<std::string> kinds;
        for (const GraphRevision& r : s.proposed_revision) kinds.emplace_back(revision_kind(r));
        log("graph_revision", {{"revision", kinds.front()}, {"kinds", kinds}, {"version", graph_.version}, {"source", "suggestion"}});
    }
    return applied;
}

void TeamCore::next_order() {
    manager_.reset();
    if (world_.orders.empty()) return;
    const Recipe& recipe = world_.orders.front();
    if (recipe.id == graph_recipe_) {
        install_graph({reset_progress(graph_), false, {}}, "next_order");
    } else {
        graph_recipe_ = recipe.id;
        install_graph(coordinator_.generate_initial_graph(world_, recipe), "next_order");
    }
}

void TeamCore::tick(AtomicAction human) {
    if (phase_ != Phase::Running) throw std::logic_error("tick() needs a running session (phase " + std::string(to_string(phase_)) + ")");
    const WorldState prev = world_;
    const AtomicAction robot = manager_.robot_action(graph_, world_);

    json step_p = {{"human", to_string(human)}, {"robot", to_string(robot)}};
    if (!has_effect(world_, index_of(AgentRole::Human), human)) {
        if (human != AtomicAction::Stay) {
            step_p["coerced"] = to_string(human);
            ++counters_.coerced_actions;
        }
        human = AtomicAction::Stay;
        step_p["human"] = to_string(human);
    }
    StepResult r = step(world_, human, robot, cfg_.world);
    world_ = std::move(r.world);
    ++wall_;
    ++unpaused_;
    json evs = json::array();
    for (const WorldEvent& e : r.events)
        if (e.kind != EventKind::Moved) evs.push_back(to_json(e));
    if (!evs.empty()) step_p["events"] = std::move(evs);
    log("step", std::move(step_p));

    const std::array<bool, kAgentCount> interacted{human == AtomicAction::Interact, robot == AtomicAction::Interact};
    const JudgeVerdict v = manager_.judge(graph_, prev, world_, interacted);
    if (!v.finished_subtask_ids.empty()) {
        log("judge", {{"finished", v.finished_subtask_ids}, {"off_script", v.off_script}, {"version", graph_.version}});
        if (v.off_script) ++counters_.off_script;
    }
    if (v.sink_done) next_order();

    const std::vector<SubtaskId> released = manager_.maintain(graph_, world_);
    if (!released.empty()) log("released", {{"ids", released}});

    if (unpaused_ >= trial_ticks()) {
        phase_ = Phase::Finished;
        pending_.reset();
        log("trial_over", {{"stats", to_json(stats())}});
        return;
    }
    run_allocation();
    maybe_suggest();
}

void TeamCore::paused_tick() {
    if (phase_ != Phase::Paused) throw std::logic_error("paused_tick() outside a dialog");
    ++wall_;
    ++paused_ticks_;
}

bool TeamCore::chat(const std::string& text) {
    if (phase_ != Phase::Running && phase_ != Phase::Paused) return false;
    if (!cfg_.mode.chat_enabled()) {
        log("notice", {{"text", "Chat is turned off in IFA mode; the robot works without language."}});
        return false;
    }
    ++counters_.human_messages;
    if (phase_ == Phase::Running) {
        phase_ = Phase::Paused;
        world_.paused = true;
        ++counters_.dialogs;
        log("paused");
    }
    log("human_chat", {{"text", text}});
    const std::uint64_t before = graph_.version;
    QueryOutcome q = coordinator_.handle_message(text, graph_, world_);
    log("query", {{"query_type", static_cast<int>(q.kind)}, {"query", to_string(q.kind)}, {"changed", q.changed}, {"rejected", q.rejected}});
    if (q.changed) {
        graph_ = std::move(q.graph);
        ++counters_.graph_revisions;
        log("graph_revision", {{"revision", q.revision_kinds.front()},
                               {"kinds", q.revision_kinds},
                               {"version", graph_.version},
                               {"previous_version", before},
                               {"source", "chat"}});
    }
    emit(Outbound::HumanQueryReply, q.reply);
    return true;
}

void TeamCore::end_dialog() {
    if (phase_ != Phase::Paused) return;
    phase_ = Phase::Running;
    world_.paused = false;
    log("resumed");
    run_allocation(); // the graph may have changed during the dialog
}

TrialStats TeamCore::stats() const {
    TrialStats s = counters_;
    s.score = world_.score;
    s.deliveries = world_.deliveries;
    s.unpaused_ticks = unpaused_;
    s.paused_ticks = paused_ticks_;
    s.mean_robot_plan_cost = manager_.mean_robot_plan_cost();
    return s;
}

} // namespace hrt
