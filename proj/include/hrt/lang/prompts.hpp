#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hrt::lang {

enum class TemplateId : std::uint8_t { InitialGraph, GraphRevision, ActiveSuggestion, SubtaskAssignment, StatusJudge };

inline constexpr TemplateId kTemplates[] = {TemplateId::InitialGraph, TemplateId::GraphRevision,
                                            TemplateId::ActiveSuggestion, TemplateId::SubtaskAssignment,
                                            TemplateId::StatusJudge};

/// File stem under prompts/, e.g. "initial_graph".
std::string_view template_name(TemplateId t);

/// The template exactly as shipped.
std::string_view template_text(TemplateId t);

/// Distinct `{slot}` names in order of first appearance.
std::vector<std::string> template_slots(TemplateId t);

/// Slots that the graph-revision template uses as answer placeholders in its
/// few-shot block. They render as themselves unless bound explicitly.
inline constexpr std::string_view kSelfBoundSlots[] = {"query_type", "Node_graph"};

struct MissingSlot : std::runtime_error {
    explicit MissingSlot(std::string name) : std::runtime_error("missing binding for {" + name + "}"), slot(std::move(name)) {}
    std::string slot;
};

using Bindings = std::map<std::string, std::string>;

/// Substitutes every `{slot}` occurrence. Text outside slots is copied byte
/// for byte; bound values are inserted verbatim. Throws MissingSlot.
std::string render_template(TemplateId t, const Bindings& bindings);

/// Same substitution over arbitrary text (used for golden checks).
std::string render_text(std::string_view text, const Bindings& bindings);

} // namespace hrt::lang
