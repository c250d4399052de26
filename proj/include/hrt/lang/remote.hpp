#pragma once

#include "hrt/lang/backend.hpp"

#include <chrono>
#include <deque>
#include <filesystem>
#include <mutex>

namespace hrt::lang {

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Timeout : TransportError {
    using TransportError::TransportError;
};
struct AuthError : TransportError {
    using TransportError::TransportError;
};

struct ChatMessage {
    std::string role; // "system" | "user" | "assistant"
    std::string content;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    std::uint64_t seed = 0;
    std::string schema;
};

/// Hex FNV-1a key over everything but the model name, used by fixture files.
std::string fixture_key(const ChatRequest& r);

/// One chat-completion round trip; returns the assistant text.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual std::string send(const ChatRequest& r, std::chrono::milliseconds timeout) = 0;
};

/// OpenAI-style POST {model, messages, temperature, seed} to `url`,
/// reading choices[0].message.content.
class HttpTransport final : public ChatTransport {
public:
    HttpTransport(std::string url, std::string api_key);
    std::string send(const ChatRequest& r, std::chrono::milliseconds timeout) override;

private:
    std::string url_;
    std::string key_;
};

/// Replays recorded responses from a JSON object file {key: text}.
class FixtureTransport final : public ChatTransport {
public:
    explicit FixtureTransport(std::map<std::string, std::string> responses) : responses_(std::move(responses)) {}
    static FixtureTransport load(const std::filesystem::path& path);
    std::string send(const ChatRequest& r, std::chrono::milliseconds timeout) override;

private:
    std::map<std::string, std::string> responses_;
};

/// Forwards to another transport and keeps every exchange for save().
class RecordingTransport final : public ChatTransport {
public:
    explicit RecordingTransport(std::shared_ptr<ChatTransport> inner) : inner_(std::move(inner)) {}
    std::string send(const ChatRequest& r, std::chrono::milliseconds timeout) override;
    void save(const std::filesystem::path& path) const;

private:
    std::shared_ptr<ChatTransport> inner_;
    mutable std::mutex mu_;
    std::map<std::string, std::string> recorded_;
};

/// Hands out queued replies in order; an entry starting with "!timeout",
/// "!auth" or "!down" raises the matching error instead. Test double.
class ScriptedTransport final : public ChatTransport {
public:
    explicit ScriptedTransport(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}
    std::string send(const ChatRequest& r, std::chrono::milliseconds timeout) override;
    const std::vector<ChatRequest>& seen() const { return seen_; }

private:
    std::mutex mu_;
    std::deque<std::string> replies_;
    std::vector<ChatRequest> seen_;
};

struct RemoteConfig {
    std::string url = "http://127.0.0.1:8000/v1/chat/completions";
    std::string model = "gpt-4o";
    std::chrono::milliseconds timeout{30000};
    int max_reprompts = 2;
};

/// Chat-completion backend: re-prompts with the validation error up to
/// `max_reprompts` times, then reports a malformed response. Transport
/// failures propagate as TransportError / Timeout / AuthError.
class RemoteBackend final : public Backend {
public:
    RemoteBackend(RemoteConfig cfg, std::shared_ptr<ChatTransport> transport);

    BackendResponse complete(const BackendRequest& request) override;
    std::string name() const override { return "remote:" + cfg_.model; }
    bool deterministic() const override { return false; }

private:
    RemoteConfig cfg_;
    std::shared_ptr<ChatTransport> transport_;
};

/// Reads HRT_LLM_KEY; empty when unset.
std::string api_key_from_env();

/// Tries `primary`; on a transport failure or malformed reply answers with
/// `fallback` instead and counts the incident.
class WatchdogBackend final : public Backend {
public:
    WatchdogBackend(BackendPtr primary, BackendPtr fallback) : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

    BackendResponse complete(const BackendRequest& request) override;
    std::string name() const override { return primary_->name() + "|" + fallback_->name(); }
    bool deterministic() const override { return primary_->deterministic() && fallback_->deterministic(); }
    int incidents() const { return incidents_; }
    const std::vector<std::string>& incident_log() const { return log_; }

private:
    BackendPtr primary_;
    BackendPtr fallback_;
    mutable std::mutex mu_;
    int incidents_ = 0;
    std::vector<std::string> log_;
};

} // namespace hrt::lang
