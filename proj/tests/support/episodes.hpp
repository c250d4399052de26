#pragma once

// The scripted episode the feedback-mode checks run over, and the checks
// themselves. Each check returns an empty string on success.

#include "hrt/harness.hpp"

#include "fixtures.hpp"

#include <string>

namespace hrt::testing {

inline TrialConfig gating_episode(FeedbackKind mode) {
    TrialConfig c;
    c.layout = sample_layout();
    c.mode = FeedbackMode{mode, 100};
    c.policy.kind = PolicyKind::Requester;
    c.policy.script = {{35, {"I'll take care of the onions, you handle the dish and serving."}, 15},
                       {150, {"What should I do next?"}, 10},
                       {230, {"Can you get the dish?"}, 10}};
    c.seed = 42;
    return c;
}

inline std::string check_gating(const TrialRecord& r, FeedbackKind mode) {
    bool in_dialog = false, chatted = false;
    int allocations = 0, instructions = 0;
    bool expect_instruction = false;
    for (const TrialEvent& e : r.events) {
        const std::string at = " at wall tick " + std::to_string(e.wall);
        if (e.kind == "paused") in_dialog = true, chatted = false;
        if (e.kind == "resumed") in_dialog = false;
        if (e.kind == "human_chat") chatted = true;
        if (expect_instruction) {
            expect_instruction = false;
            const bool ok = e.kind == "robot_message" && e.payload.value("channel", "") == "instruction";
            if (!ok) return "allocation not followed by its instruction" + at;
        }
        if (e.kind == "allocation" && e.payload.value("changed", false)) {
            ++allocations;
            expect_instruction = mode == FeedbackKind::SFA;
        }
        if (e.kind != "robot_message") continue;
        const std::string channel = e.payload.value("channel", "");
        if (channel == "instruction") ++instructions;
        switch (mode) {
        case FeedbackKind::IFA: return "robot message in IFA" + at;
        case FeedbackKind::PFA:
            if (!in_dialog || !chatted || channel != "reply") return "unprompted PFA message" + at;
            break;
        case FeedbackKind::AFA:
            if (channel == "instruction") return "AFA delivered an instruction" + at;
            if (channel == "suggestion" && (e.tick == 0 || e.tick % 100 != 0))
                return "AFA suggestion off the 100-tick grid" + at;
            if (channel == "reply" && !(in_dialog && chatted)) return "AFA reply outside a dialog" + at;
            break;
        case FeedbackKind::SFA: break;
        }
    }
    if (mode == FeedbackKind::SFA && instructions != allocations)
        return std::to_string(instructions) + " instructions for " + std::to_string(allocations) + " allocation events";
    return {};
}

} // namespace hrt::testing
