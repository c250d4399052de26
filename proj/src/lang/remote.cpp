#include "hrt/lang/remote.hpp"

#include <httplib.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>

namespace hrt::lang {

std::string fixture_key(const ChatRequest& r) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    for (const ChatMessage& m : r.messages) {
        mix(m.role);
        mix(m.content);
    }
    mix(r.schema);
    mix(std::to_string(r.temperature));
    mix(std::to_string(r.seed));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

HttpTransport::HttpTransport(std::string url, std::string api_key) : url_(std::move(url)), key_(std::move(api_key)) {}

std::string HttpTransport::send(const ChatRequest& r, std::chrono::milliseconds timeout) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url_, m, url_re)) throw TransportError("bad endpoint url: " + url_);
    const std::string origin = m[1].str();
    const std::string path = m[2].matched ? m[2].str() : "/";

    httplib::Client client(origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    json body = {{"model", r.model}, {"temperature", r.temperature}, {"seed", r.seed}, {"messages", json::array()}};
    for (const ChatMessage& msg : r.messages) body["messages"].push_back({{"role", msg.role}, {"content", msg.content}});
    body["response_format"] = {{"type", "json_object"}};

    httplib::Headers headers;
    if (!key_.empty()) headers.emplace("Authorization", "Bearer " + key_);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        if (res.error() == httplib::Error::Read || res.error() == httplib::Error::ConnectionTimeout)
            throw Timeout("chat completion timed out after " + std::to_string(timeout.count()) + " ms");
        throw TransportError("chat completion failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 401 || res->status == 403) throw AuthError("endpoint refused the key (HTTP " + std::to_string(res->status) + ")");
    if (res->status < 200 || res->status >= 300) throw TransportError("endpoint returned HTTP " + std::to_string(res->status));
    const json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) throw TransportError("endpoint returned non-JSON body");
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw TransportError("endpoint reply has no choices[0].message.content");
    }
}

FixtureTransport FixtureTransport::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TransportError("cannot open fixture file " + path.string());
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw TransportError("fixture file is not a JSON object: " + path.string());
    std::map<std::string, std::string> responses;
    for (const auto& [k, v] : j.items()) responses[k] = v.get<std::string>();
    return FixtureTransport(std::move(responses));
}

std::string FixtureTransport::send(const ChatRequest& r, std::chrono::milliseconds) {
    const std::string key = fixture_key(r);
    auto it = responses_.find(key);
    if (it == responses_.end()) throw TransportError("no fixture recorded for request " + key);
    return it->second;
}

std::string RecordingTransport::send(const ChatRequest& r, std::chrono::milliseconds timeout) {
    std::string text = inner_->send(r, timeout);
    std::lock_guard<std::mutex> lock(mu_);
    recorded_[fixture_key(r)] = text;
    return text;
}

void RecordingTransport::save(const std::filesystem::path& path) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::ofstream out(path);
    out << json(recorded_).dump(2) << "\n";
}

std::string ScriptedTransport::send(const ChatRequest& r, std::chrono::milliseconds) {
    std::lock_guard<std::mutex> lock(mu_);
    seen_.push_back(r);
    if (replies_.empty()) throw TransportError("scripted transport exhausted");
    std::string next = std::move(replies_.front());
    replies_.pop_front();
    if (next == "!timeout") throw Timeout("scripted timeout");
    if (next == "!auth") throw AuthError("scripted auth failure");
    if (next == "!down") throw TransportError("scripted connection refused");
    return next;
}

RemoteBackend::RemoteBackend(RemoteConfig cfg, std::shared_ptr<ChatTransport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {
    if (!transport_) throw std::invalid_argument("remote backend needs a transport");
}

BackendResponse RemoteBackend::complete(const BackendRequest& request) {
    const auto start = std::chrono::steady_clock::now();
    ChatRequest chat{cfg_.model, {{"system", request.system}, {"user", request.user}}, request.temperature,
                     request.seed, std::string(schema_name(request.schema))};
    BackendResponse out;
    out.backend = name();
    out.attempts = 0;
    for (int attempt = 0; attempt <= cfg_.max_reprompts; ++attempt) {
        ++out.attempts;
        for (const ChatMessage& m : chat.messages) out.prompt_chars += m.content.size();
        out.raw = transport_->send(chat, cfg_.timeout);
        out.completion_chars += out.raw.size();
        std::string why;
        if (auto p = payload_from_text(request.schema, out.raw, &why)) {
            out.payload = std::move(p);
            out.error.clear();
            break;
        }
        out.error = why;
        chat.messages.push_back({"assistant", out.raw});
        chat.messages.push_back({"user", "That reply was invalid (" + why + "). " + schema_directive(request.schema)});
    }
    out.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string api_key_from_env() {
    const char* k = std::getenv("HRT_LLM_KEY");
    return k ? k : "";
}

BackendResponse WatchdogBackend::complete(const BackendRequest& request) {
    std::string why;
    try {
        BackendResponse r = primary_->complete(request);
        if (!r.malformed()) return r;
        why = "malformed after " + std::to_string(r.attempts) + " attempts: " + r.error;
    } catch (const std::exception& e) {
        why = e.what();
    }
    {
        std::lock_guard<std::mutex> lock(mu_);
        ++incidents_;
        log_.push_back(std::string(template_name(request.template_id)) + ": " + why);
    }
    BackendResponse r = fallback_->complete(request);
    r.error = "fallback after primary failure: " + why;
    return r;
}

} // namespace hrt::lang
