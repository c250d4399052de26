#include "hrt/feedback.hpp"

#include <stdexcept>

namespace hrt {

std::string_view to_string(FeedbackKind k) {
    switch (k) {
    case FeedbackKind::IFA: return "IFA";
    case FeedbackKind::PFA: return "PFA";
    case FeedbackKind::AFA: return "AFA";
    case FeedbackKind::SFA: return "SFA";
    }
    return "?";
}

std::optional<FeedbackKind> feedback_kind_from_string(std::string_view s) {
    for (FeedbackKind k : {FeedbackKind::IFA, FeedbackKind::PFA, FeedbackKind::AFA, FeedbackKind::SFA})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

FeedbackMode FeedbackMode::parse(std::string_view s, int tick_hz) {
    const auto k = feedback_kind_from_string(s);
    if (!k) throw std::invalid_argument("unknown feedback mode '" + std::string(s) + "' (expected IFA, PFA, AFA or SFA)");
    if (tick_hz <= 0) throw std::invalid_argument("tick_hz must be positive");
    return {*k, 20 * tick_hz};
}

bool FeedbackMode::suggestion_due(int tick) const {
    if (kind != FeedbackKind::AFA && kind != FeedbackKind::SFA) return false;
    return interval_ticks > 0 && tick > 0 && tick % interval_ticks == 0;
}

std::string_view to_string(Outbound o) {
    switch (o) {
    case Outbound::AllocationInstruction: return "instruction";
    case Outbound::CoordinatorSuggestion: return "suggestion";
    case Outbound::HumanQueryReply: return "reply";
    }
    return "?";
}

Gate gate_outbound(const FeedbackMode& mode, Outbound event, int tick) {
    switch (mode.kind) {
    case FeedbackKind::IFA: return Gate::Suppress;
    case FeedbackKind::PFA: return event == Outbound::HumanQueryReply ? Gate::Deliver : Gate::Suppress;
    case FeedbackKind::AFA:
        if (event == Outbound::HumanQueryReply) return Gate::Deliver;
        if (event == Outbound::CoordinatorSuggestion && mode.interval_ticks > 0 && tick % mode.interval_ticks == 0)
            return Gate::Deliver;
        return Gate::Suppress;
    case FeedbackKind::SFA: return Gate::Deliver;
    }
    return Gate::Suppress;
}

FeedbackKind recommend_mode(const CapabilityProfile& p) {
    for (int v : {p.task_complexity, p.human_capability, p.llm_capability})
        if (v < 0 || v > 10) throw std::out_of_range("capability ordinals must be within 0-10");
    const int t = p.task_complexity;
    if (p.human_capability == t || p.llm_capability == t) return FeedbackKind::AFA;
    const bool human_strong = p.human_capability > t;
    const bool llm_strong = p.llm_capability > t;
    if (human_strong && llm_strong) return FeedbackKind::AFA;
    if (!human_strong && llm_strong) return FeedbackKind::SFA;
    return FeedbackKind::PFA;
}

} // namespace hrt
