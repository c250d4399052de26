#pragma once

#include "hrt/harness.hpp"
#include "hrt/service/wire.hpp"

#include <deque>

namespace hrt::service {

struct SessionConfig {
    std::shared_ptr<const Layout> layout;
    RecipeBook book = RecipeBook::standard();
    BackendSpec backend{};
    std::uint64_t seed = 0;
    int tick_hz = 5;                // real-time loop rate
    int reconnect_window_ticks = 300; // 60 s at 5 Hz
};

/// One interactive trial, driven by its owner: frames in through handle(),
/// one call to tick() per loop period, frames out through drain(). Not
/// thread-safe; the server keeps each session on its own strand.
class Session {
public:
    Session(std::string id, SessionConfig cfg);

    const std::string& id() const { return id_; }

    /// A decoded client frame. Replies and state changes are queued.
    void handle(const ClientMessage& m);
    /// A raw frame; protocol errors become Error messages instead of throwing.
    void handle_frame(std::string_view frame);

    /// One loop period: a game tick while running (consuming the latest
    /// buffered action, Stay if none), a wall tick while paused or parked.
    void tick();

    void disconnect();
    bool connected() const { return connected_; }
    bool finished() const { return finished_; }
    Phase phase() const;

    /// Queued frames in seq order.
    std::vector<ServerMessage> drain();
    /// The current Snapshot body (not queued, no seq), for the poll endpoint.
    json snapshot_body() const;
    /// What the trial has logged so far.
    TrialRecord record() const;

    std::optional<AtomicAction> buffered_action() const { return buffered_; }
    const TeamCore* core() const { return core_ ? &*core_ : nullptr; }

private:
    void push(ServerKind kind, json body = json::object());
    void push_snapshot();
    void forward_outbox();
    void finish();

    std::string id_;
    SessionConfig cfg_;
    std::optional<TeamCore> core_;
    std::optional<FeedbackMode> mode_;
    json header_;
    bool joined_ = false;
    bool connected_ = false;
    bool finished_ = false;
    int parked_ticks_ = 0;
    std::optional<AtomicAction> buffered_;
    std::uint64_t seq_ = 0;
    std::deque<ServerMessage> out_;
};

} // namespace hrt::service
