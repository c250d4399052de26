#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hrt {

enum class FeedbackKind : std::uint8_t { IFA, PFA, AFA, SFA };

std::string_view to_string(FeedbackKind k);
std::optional<FeedbackKind> feedback_kind_from_string(std::string_view s);

struct FeedbackMode {
    FeedbackKind kind = FeedbackKind::IFA;
    int interval_ticks = 100; // suggestion cadence (AFA, and SFA alongside its instructions)

    /// "IFA" | "PFA" | "AFA" | "SFA"; the interval defaults to 20 s of game clock.
    static FeedbackMode parse(std::string_view s, int tick_hz = 5);
    std::string name() const { return std::string(to_string(kind)); }
    bool chat_enabled() const { return kind != FeedbackKind::IFA; }
    /// Whether a strategy suggestion is raised at game tick `tick`.
    bool suggestion_due(int tick) const;

    bool operator==(const FeedbackMode&) const = default;
};

enum class Outbound : std::uint8_t { AllocationInstruction, CoordinatorSuggestion, HumanQueryReply };
enum class Gate : std::uint8_t { Deliver, Suppress };

std::string_view to_string(Outbound o);

/// Which robot-authored messages reach the human. IFA: none. PFA: replies to
/// the human's own messages. AFA: replies, plus suggestions on interval
/// ticks. SFA: everything.
Gate gate_outbound(const FeedbackMode& mode, Outbound event, int tick);

/// Ordinal self-reports, 0-10 each.
struct CapabilityProfile {
    int task_complexity = 0; // T
    int human_capability = 0; // C_h
    int llm_capability = 0;   // C_l
};

/// The capability quadrant table; any tie with T falls back to AFA.
/// Throws std::out_of_range outside 0-10.
FeedbackKind recommend_mode(const CapabilityProfile& p);

} // namespace hrt
