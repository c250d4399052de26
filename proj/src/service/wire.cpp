#include "hrt/service/wire.hpp"

namespace hrt::service {

namespace {

std::string string_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw ProtocolError(std::string("expected string field \"") + key + "\"");
    return it->get<std::string>();
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

ClientMessage parse_client_message(std::string_view frame) {
    const json j = json::parse(frame, nullptr, false);
    if (j.is_discarded()) throw ProtocolError("frame is not JSON");
    if (!j.is_object()) throw ProtocolError("frame must be a JSON object");
    const std::string type = string_field(j, "type");
    if (type == "Join") {
        // The token may also travel in the envelope's session field.
        if (j.contains("session_token")) return Join{string_field(j, "session_token")};
        return Join{string_field(j, "session")};
    }
    if (type == "SelectMode") {
        const std::string m = string_field(j, "mode");
        const auto k = feedback_kind_from_string(m);
        if (!k) throw ProtocolError("unknown mode \"" + m + "\"");
        return SelectMode{*k};
    }
    if (type == "Action") {
        const std::string a = string_field(j, "action");
        const auto act = action_from_string(a);
        if (!act) throw ProtocolError("unknown action \"" + a + "\"");
        return Action{*act};
    }
    if (type == "Chat") return Chat{string_field(j, "text")};
    if (type == "EndDialog") return EndDialog{};
    if (type == "AcceptSuggestion") {
        auto it = j.find("accept");
        if (it == j.end() || !it->is_boolean()) throw ProtocolError("expected boolean field \"accept\"");
        return AcceptSuggestion{it->get<bool>()};
    }
    throw ProtocolError("unknown message type \"" + type + "\"");
}

json to_json(const ClientMessage& m) {
    return std::visit(overloaded{
                          [](const Join& x) { return json{{"type", "Join"}, {"session_token", x.session_token}}; },
                          [](const SelectMode& x) { return json{{"type", "SelectMode"}, {"mode", to_string(x.mode)}}; },
                          [](const Action& x) { return json{{"type", "Action"}, {"action", to_string(x.action)}}; },
                          [](const Chat& x) { return json{{"type", "Chat"}, {"text", x.text}}; },
                          [](const EndDialog&) { return json{{"type", "EndDialog"}}; },
                          [](const AcceptSuggestion& x) { return json{{"type", "AcceptSuggestion"}, {"accept", x.accept}}; },
                      },
                      m);
}

std::string_view type_name(const ClientMessage& m) {
    static constexpr std::string_view names[] = {"Join", "SelectMode", "Action", "Chat", "EndDialog", "AcceptSuggestion"};
    return names[m.index()];
}

std::string_view to_string(ServerKind k) {
    switch (k) {
    case ServerKind::Snapshot: return "Snapshot";
    case ServerKind::RobotChat: return "RobotChat";
    case ServerKind::SuggestionOffer: return "SuggestionOffer";
    case ServerKind::Paused: return "Paused";
    case ServerKind::Resumed: return "Resumed";
    case ServerKind::TrialOver: return "TrialOver";
    case ServerKind::Notice: return "Notice";
    case ServerKind::Error: return "Error";
    }
    return "?";
}

std::optional<ServerKind> server_kind_from_string(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(ServerKind::Error); ++i)
        if (to_string(static_cast<ServerKind>(i)) == s) return static_cast<ServerKind>(i);
    return std::nullopt;
}

json ServerMessage::to_json() const {
    json j = body;
    j["type"] = to_string(kind);
    j["session"] = session;
    j["seq"] = seq;
    return j;
}

ServerMessage ServerMessage::from_json(const json& j) {
    ServerMessage m;
    const auto k = server_kind_from_string(j.at("type").get<std::string>());
    if (!k) throw ProtocolError("unknown server message type");
    m.kind = *k;
    m.session = j.at("session").get<std::string>();
    m.seq = j.at("seq").get<std::uint64_t>();
    m.body = j;
    for (const char* key : {"type", "session", "seq"}) m.body.erase(key);
    return m;
}

std::string_view status_color(SubtaskStatus s) {
    switch (s) {
    case SubtaskStatus::ReadyToExecute:
    case SubtaskStatus::Executing: return "blue";
    case SubtaskStatus::Unknown:
    case SubtaskStatus::NotReady:
    case SubtaskStatus::Failure: return "yellow";
    case SubtaskStatus::Emergency: return "red";
    case SubtaskStatus::Success: return "grey";
    }
    return "yellow";
}

} // namespace hrt::service
