#include "hrt/service/session.hpp"

#include "hrt/json_io.hpp"

namespace hrt::service {

Session::Session(std::string id, SessionConfig cfg) : id_(std::move(id)), cfg_(std::move(cfg)) {
    if (!cfg_.layout) throw std::invalid_argument("session config has no layout");
    if (cfg_.tick_hz <= 0) throw std::invalid_argument("tick_hz must be positive");
}

Phase Session::phase() const {
    if (finished_) return Phase::Finished;
    return core_ ? core_->phase() : Phase::Lobby;
}

void Session::push(ServerKind kind, json body) {
    ServerMessage m;
    m.kind = kind;
    m.session = id_;
    m.seq = ++seq_;
    m.body = std::move(body);
    out_.push_back(std::move(m));
}

std::vector<ServerMessage> Session::drain() {
    std::vector<ServerMessage> out(out_.begin(), out_.end());
    out_.clear();
    return out;
}

json Session::snapshot_body() const {
    json body = {{"phase", to_string(phase())},
                 {"connected", connected_},
                 {"mode", mode_ ? json(mode_->name()) : json(nullptr)},
                 {"layout", cfg_.layout->name},
                 {"grid", cfg_.layout->rows()}};
    const int trial_ticks = cfg_.layout->trial_ticks();
    if (!core_) {
        body["world"] = hrt::to_json(WorldState::initial(cfg_.layout));
        body["score"] = 0;
        body["clock"] = {{"tick", 0}, {"trial_ticks", trial_ticks}, {"remaining_ticks", trial_ticks},
                         {"remaining_seconds", static_cast<double>(trial_ticks) / cfg_.layout->tick_hz}};
        body["graph"] = {{"version", 0}, {"summary", ""}, {"nodes", json::array()}};
        body["assignments"] = {{"human", nullptr}, {"robot", nullptr}};
        return body;
    }
    const WorldState& w = core_->world();
    const SubtaskGraph& g = core_->graph();
    body["world"] = hrt::to_json(w);
    body["score"] = w.score;
    const int remaining = std::max(0, trial_ticks - core_->unpaused_ticks());
    body["clock"] = {{"tick", w.tick},
                     {"trial_ticks", trial_ticks},
                     {"remaining_ticks", remaining},
                     {"remaining_seconds", static_cast<double>(remaining) / cfg_.layout->tick_hz}};
    json nodes = json::array();
    for (const auto& [id, n] : g.nodes)
        nodes.push_back({{"id", id},
                         {"name", n.name},
                         {"status", to_string(n.status)},
                         {"color", status_color(n.status)},
                         {"priority", n.priority},
                         {"parents", n.parents},
                         {"temporary", n.temporary}});
    body["graph"] = {{"version", g.version}, {"summary", graph_summary_line(g)}, {"nodes", nodes}};
    const auto& a = core_->manager().assigned();
    body["assignments"] = {{"human", a[0] ? json(*a[0]) : json(nullptr)}, {"robot", a[1] ? json(*a[1]) : json(nullptr)}};
    if (const auto& ins = core_->latest_instruction()) body["instruction"] = ins->text;
    body["suggestion_pending"] = core_->suggestion_pending();
    return body;
}

void Session::push_snapshot() { push(ServerKind::Snapshot, snapshot_body()); }

void Session::forward_outbox() {
    for (const OutboundMessage& m : core_->drain_outbox()) {
        json body = {{"text", m.text}, {"channel", to_string(m.channel)}, {"tick", m.tick}};
        push(ServerKind::RobotChat, body);
        if (m.offer) push(ServerKind::SuggestionOffer, {{"text", m.text}, {"tick", m.tick}});
    }
}

void Session::finish() {
    if (finished_) return;
    finished_ = true;
    const TrialStats stats = core_ ? core_->stats() : TrialStats{};
    push_snapshot();
    push(ServerKind::TrialOver, {{"stats", hrt::to_json(stats)}});
}

void Session::handle_frame(std::string_view frame) {
    try {
        handle(parse_client_message(frame));
    } catch (const ProtocolError& e) {
        push(ServerKind::Error, {{"error", e.what()}});
    }
}

void Session::handle(const ClientMessage& m) {
    if (finished_) {
        push(ServerKind::Error, {{"error", "session is finished"}, {"request", type_name(m)}});
        return;
    }
    if (const auto* j = std::get_if<Join>(&m)) {
        if (connected_) {
            push(ServerKind::Error, {{"error", "a client is already bound to this session"}});
            return;
        }
        if (!j->session_token.empty() && j->session_token != id_) {
            push(ServerKind::Error, {{"error", "unknown session token"}});
            return;
        }
        joined_ = connected_ = true;
        parked_ticks_ = 0;
        push_snapshot();
        return;
    }
    if (!joined_ || !connected_) {
        push(ServerKind::Error, {{"error", "Join first"}, {"request", type_name(m)}});
        return;
    }
    if (const auto* s = std::get_if<SelectMode>(&m)) {
        if (core_) {
            push(ServerKind::Error, {{"error", "mode is fixed once the trial has started"}});
            return;
        }
        mode_ = FeedbackMode{s->mode, 20 * cfg_.layout->tick_hz};
        TeamConfig tc;
        tc.layout = cfg_.layout;
        tc.book = cfg_.book;
        tc.mode = *mode_;
        tc.backend = make_backend(cfg_.backend);
        tc.seed = cfg_.seed;
        core_.emplace(std::move(tc));

        TrialConfig header;
        header.layout = cfg_.layout;
        header.book = cfg_.book;
        header.mode = *mode_;
        header.seed = cfg_.seed;
        header.backend = cfg_.backend;
        header_ = header.to_json();
        header_["policy"] = "interactive";
        header_.erase("script");
        header_.erase("think_noise");
        header_["session"] = id_;

        core_->start();
        forward_outbox();
        push_snapshot();
        return;
    }
    if (!core_) {
        push(ServerKind::Error, {{"error", "select a mode first"}, {"request", type_name(m)}});
        return;
    }
    if (const auto* a = std::get_if<Action>(&m)) {
        buffered_ = a->action; // latest wins
        return;
    }
    if (const auto* c = std::get_if<Chat>(&m)) {
        const bool was_running = core_->phase() == Phase::Running;
        if (!core_->chat(c->text)) {
            push(ServerKind::Notice, {{"text", core_->events().back().payload.value("text", "Chat is unavailable.")}});
            return;
        }
        if (was_running) {
            buffered_.reset();
            push(ServerKind::Paused, {{"tick", core_->world().tick}});
        }
        forward_outbox();
        push_snapshot();
        return;
    }
    if (std::holds_alternative<EndDialog>(m)) {
        if (core_->phase() != Phase::Paused) return;
        core_->end_dialog();
        push(ServerKind::Resumed, {{"tick", core_->world().tick}});
        forward_outbox();
        push_snapshot();
        return;
    }
    if (const auto* s = std::get_if<AcceptSuggestion>(&m)) {
        if (!core_->suggestion_pending()) {
            push(ServerKind::Notice, {{"text", "There is no suggestion to answer."}});
            return;
        }
        core_->respond_to_suggestion(s->accept);
        push_snapshot();
        return;
    }
}

void Session::disconnect() {
    connected_ = false;
    parked_ticks_ = 0;
}

void Session::tick() {
    if (finished_) return;
    if (!connected_) {
        // Parked: the game clock waits for the client to come back.
        if (joined_ && ++parked_ticks_ >= cfg_.reconnect_window_ticks) finish();
        return;
    }
    if (!core_) return;
    if (core_->phase() == Phase::Paused) {
        core_->paused_tick();
        push_snapshot();
        return;
    }
    const AtomicAction a = buffered_.value_or(AtomicAction::Stay);
    buffered_.reset();
    core_->tick(a);
    forward_outbox();
    if (core_->over()) {
        finish();
        return;
    }
    push_snapshot();
}

TrialRecord Session::record() const {
    TrialRecord r;
    r.header = header_;
    if (core_) {
        r.events = core_->events();
        r.stats = core_->stats();
    }
    return r;
}

} // namespace hrt::service
