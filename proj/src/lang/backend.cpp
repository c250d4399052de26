#include "hrt/lang/backend.hpp"

namespace hrt::lang {

std::string_view schema_name(SchemaId s) {
    switch (s) {
    case SchemaId::InitialGraph: return "initial_graph";
    case SchemaId::GraphRevision: return "graph_revision";
    case SchemaId::Suggestion: return "suggestion";
    case SchemaId::Assignment: return "assignment";
    case SchemaId::Judge: return "judge";
    }
    return "?";
}

SchemaId schema_for(TemplateId t) {
    switch (t) {
    case TemplateId::InitialGraph: return SchemaId::InitialGraph;
    case TemplateId::GraphRevision: return SchemaId::GraphRevision;
    case TemplateId::ActiveSuggestion: return SchemaId::Suggestion;
    case TemplateId::SubtaskAssignment: return SchemaId::Assignment;
    case TemplateId::StatusJudge: return SchemaId::Judge;
    }
    return SchemaId::InitialGraph;
}

std::string schema_directive(SchemaId s) {
    switch (s) {
    case SchemaId::InitialGraph:
        return "Reply with JSON only: {\"subtasks\": [ {\"id\": int, \"name\": string, \"target_position_id\": [int], "
               "\"task_type\": int, \"task_status\": int, \"notes\": string, \"parent_subtask\": [int]} ]}";
    case SchemaId::GraphRevision:
        return "Reply with JSON only: {\"query_type\": 0|1|2|3, \"message\": string, \"revisions\": [ops]}. Ops: "
               "{\"op\": \"split_node\", \"node_id\": int, \"handoff_position_id\": int, \"parent\": int?}, "
               "{\"op\": \"set_attribute\", \"id\": int, \"notes\"?: string, \"name\"?: string, \"task_type\"?: int, "
               "\"target_position_id\"?: [int]}, {\"op\": \"add_node\", \"node\": subtask}, {\"op\": \"remove_node\", "
               "\"id\": int}, {\"op\": \"add_edge\"|\"remove_edge\", \"parent\": int, \"child\": int}, "
               "{\"op\": \"add_temporary\", \"name\": string, \"target_position_id\": [int], \"notes\": string}.";
    case SchemaId::Suggestion:
        return "Reply with JSON only: {\"coordinator_suggestion\": string, \"preference_suggestion\": string, "
               "\"split\": [{\"op\": \"split_node\", \"node_id\": int, \"handoff_position_id\": int, \"parent\": int}]}";
    case SchemaId::Assignment:
        return "Reply with JSON only: {\"robot_subtask_id\": int|null, \"human_subtask_id\": int|null, "
               "\"message_to_human\": string}";
    case SchemaId::Judge:
        return "Reply with JSON only: {\"finished_subtask_ids\": [int]}";
    }
    return {};
}

namespace {

bool opt_int(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() || it->is_null() || it->is_number_integer();
}

bool list_of_objects(const json& j, const char* key, bool required) {
    auto it = j.find(key);
    if (it == j.end()) return !required;
    if (!it->is_array()) return false;
    for (const json& e : *it)
        if (!e.is_object()) return false;
    return true;
}

} // namespace

std::optional<std::string> validate_payload(SchemaId s, const json& j) {
    switch (s) {
    case SchemaId::InitialGraph: {
        const json* list = &j;
        if (j.is_object()) {
            auto it = j.find("subtasks");
            if (it == j.end()) return "missing \"subtasks\"";
            list = &*it;
        }
        if (!list->is_array() || list->empty()) return "\"subtasks\" must be a non-empty array";
        for (const json& n : *list) {
            if (!n.is_object()) return "subtask is not an object";
            for (const char* k : {"id", "task_type", "task_status"})
                if (!n.contains(k) || !n[k].is_number_integer()) return std::string("subtask field \"") + k + "\" must be an integer";
            if (!n.contains("name") || !n["name"].is_string()) return "subtask field \"name\" must be a string";
            if (!n.contains("target_position_id")) return "subtask missing \"target_position_id\"";
            if (!n.contains("parent_subtask")) return "subtask missing \"parent_subtask\"";
            const int t = n["task_type"].get<int>();
            if (t < 0 || t > 2) return "unknown task type code " + std::to_string(t);
            const int st = n["task_status"].get<int>();
            if (st < 0 || st > 5) return "unknown status code " + std::to_string(st);
        }
        return std::nullopt;
    }
    case SchemaId::GraphRevision: {
        if (!j.is_object()) return "expected an object";
        if (!j.contains("query_type") || !j["query_type"].is_number_integer()) return "\"query_type\" must be an integer";
        const int q = j["query_type"].get<int>();
        if (q < 0 || q > 3) return "\"query_type\" must be 0, 1, 2 or 3";
        if (!j.contains("message") || !j["message"].is_string()) return "\"message\" must be a string";
        if (!list_of_objects(j, "revisions", false)) return "\"revisions\" must be a list of objects";
        for (const json& op : j.value("revisions", json::array()))
            if (!op.contains("op") || !op["op"].is_string()) return "every revision needs a string \"op\"";
        return std::nullopt;
    }
    case SchemaId::Suggestion: {
        if (!j.is_object()) return "expected an object";
        for (const char* k : {"coordinator_suggestion", "preference_suggestion"})
            if (!j.contains(k) || !j[k].is_string()) return std::string("\"") + k + "\" must be a string";
        if (j["coordinator_suggestion"].get<std::string>().empty() && j["preference_suggestion"].get<std::string>().empty())
            return "both suggestions are empty";
        if (!list_of_objects(j, "split", false)) return "\"split\" must be a list of objects";
        return std::nullopt;
    }
    case SchemaId::Assignment: {
        if (!j.is_object()) return "expected an object";
        if (!j.contains("robot_subtask_id") || !j.contains("human_subtask_id")) return "missing subtask ids";
        if (!opt_int(j, "robot_subtask_id") || !opt_int(j, "human_subtask_id")) return "subtask ids must be integers or null";
        if (!j.contains("message_to_human") || !j["message_to_human"].is_string()) return "\"message_to_human\" must be a string";
        return std::nullopt;
    }
    case SchemaId::Judge: {
        if (!j.is_object() || !j.contains("finished_subtask_ids") || !j["finished_subtask_ids"].is_array())
            return "\"finished_subtask_ids\" must be a list";
        for (const json& id : j["finished_subtask_ids"])
            if (!id.is_number_integer()) return "finished ids must be integers";
        return std::nullopt;
    }
    }
    return "unknown schema";
}

std::uint64_t BackendRequest::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    mix(template_name(template_id));
    mix(schema_name(schema));
    mix(system);
    mix(user);
    mix(std::to_string(temperature));
    mix(std::to_string(seed));
    return h;
}

std::optional<json> payload_from_text(SchemaId s, std::string_view text, std::string* error) {
    auto block = extract_json_block(text);
    if (!block) {
        if (error) *error = "no JSON block found";
        return std::nullopt;
    }
    if (auto why = validate_payload(s, *block)) {
        if (error) *error = *why;
        return std::nullopt;
    }
    return block;
}

namespace {

std::optional<SubtaskId> id_or_null(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<int>();
}

} // namespace

AssignmentReply assignment_from_payload(const json& j) {
    return {id_or_null(j, "robot_subtask_id"), id_or_null(j, "human_subtask_id"), j.value("message_to_human", "")};
}

JudgeReply judge_from_payload(const json& j) {
    JudgeReply r;
    for (const json& id : j.at("finished_subtask_ids")) r.finished.push_back(id.get<int>());
    return r;
}

RevisionReply revision_from_payload(const json& j) {
    RevisionReply r;
    r.query_type = j.at("query_type").get<int>();
    r.message = j.at("message").get<std::string>();
    for (const json& op : j.value("revisions", json::array())) r.revisions.push_back(op);
    if (j.contains("graph") && !j["graph"].is_null()) r.graph = j["graph"];
    return r;
}

SuggestionReply suggestion_from_payload(const json& j) {
    SuggestionReply r;
    r.coordinator_suggestion = j.at("coordinator_suggestion").get<std::string>();
    r.preference_suggestion = j.at("preference_suggestion").get<std::string>();
    for (const json& op : j.value("split", json::array())) r.split.push_back(op);
    r.unreachable = j.value("unreachable", false);
    return r;
}

} // namespace hrt::lang
