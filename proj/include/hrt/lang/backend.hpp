#pragma once

#include "hrt/graph_wire.hpp"
#include "hrt/lang/prompts.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hrt::lang {

/// Expected response shape.
enum class SchemaId : std::uint8_t { InitialGraph, GraphRevision, Suggestion, Assignment, Judge };

std::string_view schema_name(SchemaId s);
SchemaId schema_for(TemplateId t);

/// The user-turn instruction that pins the JSON shape for a schema.
std::string schema_directive(SchemaId s);

/// nullopt when `payload` has the shape `s` expects, otherwise the reason.
std::optional<std::string> validate_payload(SchemaId s, const json& payload);

struct BackendRequest {
    TemplateId template_id = TemplateId::InitialGraph;
    SchemaId schema = SchemaId::InitialGraph;
    std::string system; // rendered template
    std::string user;   // schema directive plus any extra context
    double temperature = 0.0;
    std::uint64_t seed = 0;
    /// Structured facts behind the prompt. Model-free backends read this;
    /// remote backends never send it.
    json context = json::object();

    /// FNV-1a over everything a remote endpoint would see.
    std::uint64_t fingerprint() const;
};

struct BackendResponse {
    std::string backend;
    std::string raw;
    std::optional<json> payload; // schema-valid, or absent when malformed
    std::string error;           // why the payload is absent
    int attempts = 1;
    double latency_ms = 0.0;
    std::size_t prompt_chars = 0;
    std::size_t completion_chars = 0;

    bool malformed() const { return !payload.has_value(); }
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual BackendResponse complete(const BackendRequest& request) = 0;
    virtual std::string name() const = 0;
    virtual bool deterministic() const = 0;
};

using BackendPtr = std::shared_ptr<Backend>;

struct UnknownSchema : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raw model text to a validated payload: extract the first JSON block and
/// check it against the schema. A bare array is accepted for InitialGraph.
std::optional<json> payload_from_text(SchemaId s, std::string_view text, std::string* error);

// Typed views of validated payloads.

struct AssignmentReply {
    std::optional<SubtaskId> robot;
    std::optional<SubtaskId> human;
    std::string message_to_human;
};
AssignmentReply assignment_from_payload(const json& j);

struct JudgeReply {
    std::vector<SubtaskId> finished;
};
JudgeReply judge_from_payload(const json& j);

struct RevisionReply {
    int query_type = 0;
    std::string message;
    std::vector<json> revisions; // graph revision ops plus "add_temporary"
    std::optional<json> graph;   // optional full replacement graph (wire nodes)
};
RevisionReply revision_from_payload(const json& j);

struct SuggestionReply {
    std::string coordinator_suggestion;
    std::string preference_suggestion;
    std::vector<json> split; // split_node ops
    bool unreachable = false;
};
SuggestionReply suggestion_from_payload(const json& j);

} // namespace hrt::lang
