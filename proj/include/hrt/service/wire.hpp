#pragma once

#include "hrt/feedback.hpp"
#include "hrt/graph_wire.hpp"
#include "hrt/world.hpp"

#include <variant>

namespace hrt::service {

// Client -> server. Every frame is a JSON object {"type": ..., "session": id,
// "seq": n, ...}; the client's own seq is echoed back in errors but not
// otherwise checked.

struct Join {
    std::string session_token;
};
struct SelectMode {
    FeedbackKind mode = FeedbackKind::IFA;
};
struct Action {
    AtomicAction action = AtomicAction::Stay;
};
struct Chat {
    std::string text;
};
struct EndDialog {};
struct AcceptSuggestion {
    bool accept = false;
};

using ClientMessage = std::variant<Join, SelectMode, Action, Chat, EndDialog, AcceptSuggestion>;

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses one client frame; throws ProtocolError with a readable reason.
ClientMessage parse_client_message(std::string_view frame);
json to_json(const ClientMessage& m);
std::string_view type_name(const ClientMessage& m);

// Server -> client.

enum class ServerKind : std::uint8_t { Snapshot, RobotChat, SuggestionOffer, Paused, Resumed, TrialOver, Notice, Error };

std::string_view to_string(ServerKind k);
std::optional<ServerKind> server_kind_from_string(std::string_view s);

/// `body` holds the type-specific fields; session and seq are stamped by
/// the owning session when the message is queued.
struct ServerMessage {
    ServerKind kind = ServerKind::Notice;
    std::string session;
    std::uint64_t seq = 0;
    json body = json::object();

    json to_json() const;
    std::string frame() const { return to_json().dump(); }
    static ServerMessage from_json(const json& j);
};

/// Panel colour class per node status: blue for ready work, yellow for
/// blocked work, red for emergencies, grey once done.
std::string_view status_color(SubtaskStatus s);

} // namespace hrt::service
