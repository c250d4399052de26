#include "hrt/lang/prompts.hpp"

#include "hrt/prompt_data.inc"

#include <algorithm>
#include <cctype>

namespace hrt::lang {

namespace {

std::string_view bytes(const unsigned char* p, std::size_t n) { return {reinterpret_cast<const char*>(p), n}; }

bool slot_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool slot_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Calls on_text for literal runs and on_slot for each `{name}` match.
template <typename Text, typename Slot>
void scan(std::string_view text, Text&& on_text, Slot&& on_slot) {
    std::size_t i = 0, literal = 0;
    while (i < text.size()) {
        if (text[i] == '{' && i + 1 < text.size() && slot_start(text[i + 1])) {
            std::size_t j = i + 1;
            while (j < text.size() && slot_char(text[j])) ++j;
            if (j < text.size() && text[j] == '}') {
                on_text(text.substr(literal, i - literal));
                on_slot(text.substr(i + 1, j - i - 1));
                i = literal = j + 1;
                continue;
            }
        }
        ++i;
    }
    on_text(text.substr(literal));
}

} // namespace

std::string_view template_name(TemplateId t) {
    switch (t) {
    case TemplateId::InitialGraph: return "initial_graph";
    case TemplateId::GraphRevision: return "graph_revision";
    case TemplateId::ActiveSuggestion: return "active_suggestion";
    case TemplateId::SubtaskAssignment: return "subtask_assignment";
    case TemplateId::StatusJudge: return "status_judge";
    }
    return "?";
}

std::string_view template_text(TemplateId t) {
    using namespace prompt_data;
    switch (t) {
    case TemplateId::InitialGraph: return bytes(initial_graph, initial_graph_size);
    case TemplateId::GraphRevision: return bytes(graph_revision, graph_revision_size);
    case TemplateId::ActiveSuggestion: return bytes(active_suggestion, active_suggestion_size);
    case TemplateId::SubtaskAssignment: return bytes(subtask_assignment, subtask_assignment_size);
    case TemplateId::StatusJudge: return bytes(status_judge, status_judge_size);
    }
    return {};
}

std::vector<std::string> template_slots(TemplateId t) {
    std::vector<std::string> out;
    scan(
        template_text(t), [](std::string_view) {},
        [&](std::string_view name) {
            if (std::find(out.begin(), out.end(), name) == out.end()) out.emplace_back(name);
        });
    return out;
}

std::string render_text(std::string_view text, const Bindings& bindings) {
    std::string out;
    out.reserve(text.size());
    scan(
        text, [&](std::string_view lit) { out.append(lit); },
        [&](std::string_view name) {
            auto it = bindings.find(std::string(name));
            if (it == bindings.end()) throw MissingSlot(std::string(name));
            out.append(it->second);
        });
    return out;
}

std::string render_template(TemplateId t, const Bindings& bindings) {
    if (t != TemplateId::GraphRevision) return render_text(template_text(t), bindings);
    Bindings b = bindings;
    for (std::string_view s : kSelfBoundSlots) b.emplace(std::string(s), "{" + std::string(s) + "}");
    return render_text(template_text(t), b);
}

} // namespace hrt::lang
