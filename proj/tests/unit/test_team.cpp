#include "hrt/lang/rule_backend.hpp"
#include "hrt/team.hpp"

#include "../support/episodes.hpp"
#include "../support/fixtures.hpp"

#include <doctest.h>

using namespace hrt;
using hrt::testing::sample_layout;

namespace {

TeamConfig team(FeedbackKind mode) {
    TeamConfig c;
    c.layout = sample_layout();
    c.mode = FeedbackMode{mode, 100};
    c.backend = std::make_shared<lang::RuleBackend>();
    return c;
}

int delivered(const TrialRecord& r, std::string_view channel) {
    int n = 0;
    for (const TrialEvent& e : r.events) n += e.kind == "robot_message" && e.payload.value("channel", "") == channel;
    return n;
}

} // namespace

TEST_CASE("session phases") {
    TeamCore core(team(FeedbackKind::SFA));
    CHECK(core.phase() == Phase::Lobby);
    CHECK_THROWS(core.tick(AtomicAction::Stay));
    core.start();
    CHECK(core.phase() == Phase::Running);
    CHECK_THROWS(core.start());
    CHECK(!core.graph().nodes.empty());
    CHECK(core.latest_instruction().has_value());
    for (int i = 0; i < core.trial_ticks(); ++i) core.tick(AtomicAction::Stay);
    CHECK(core.over());
    CHECK(core.unpaused_ticks() == 300);
    CHECK(core.events().back().kind == "trial_over");
    CHECK_THROWS(core.tick(AtomicAction::Stay));
}

TEST_CASE("chat pauses the clock until the dialog ends") {
    TeamCore core(team(FeedbackKind::PFA));
    core.start();
    for (int i = 0; i < 10; ++i) core.tick(AtomicAction::Stay);
    CHECK(core.chat("What should I do?"));
    CHECK(core.phase() == Phase::Paused);
    CHECK(core.world().paused);
    const int clock = core.world().tick;
    for (int i = 0; i < 5; ++i) core.paused_tick();
    CHECK(core.world().tick == clock);
    CHECK_THROWS(core.tick(AtomicAction::Stay));
    const auto out = core.drain_outbox();
    REQUIRE(out.size() == 1);
    CHECK(out[0].channel == Outbound::HumanQueryReply);
    core.end_dialog();
    CHECK(core.phase() == Phase::Running);
    core.tick(AtomicAction::Stay);
    CHECK(core.world().tick == clock + 1);
    CHECK(core.stats().paused_ticks == 5);
    CHECK(core.stats().dialogs == 1);
}

TEST_CASE("chat is refused in IFA") {
    TeamCore core(team(FeedbackKind::IFA));
    core.start();
    CHECK(!core.chat("hello"));
    CHECK(core.phase() == Phase::Running);
    CHECK(core.events().back().kind == "notice");
    CHECK(core.stats().human_messages == 0);
}

TEST_CASE("useless human actions are coerced to Stay") {
    TeamCore core(team(FeedbackKind::IFA));
    core.start();
    // The human starts at (1,1) facing the wall above it.
    core.tick(AtomicAction::Up);
    const TrialEvent& step = [&]() -> const TrialEvent& {
        for (auto it = core.events().rbegin(); it != core.events().rend(); ++it)
            if (it->kind == "step") return *it;
        throw std::logic_error("no step");
    }();
    CHECK(step.payload.at("human") == "stay");
    CHECK(step.payload.at("coerced") == "up");
    CHECK(core.stats().coerced_actions == 1);
}

TEST_CASE("each mode gates the scripted episode") {
    for (FeedbackKind mode : {FeedbackKind::IFA, FeedbackKind::PFA, FeedbackKind::AFA, FeedbackKind::SFA}) {
        CAPTURE(to_string(mode));
        const TrialRecord r = run_trial(hrt::testing::gating_episode(mode));
        CHECK(hrt::testing::check_gating(r, mode) == "");
        CHECK(r.stats.unpaused_ticks == 300);
        switch (mode) {
        case FeedbackKind::IFA: CHECK(r.stats.robot_messages == 0); break;
        case FeedbackKind::PFA: CHECK(delivered(r, "reply") >= 1); break;
        case FeedbackKind::AFA: CHECK(delivered(r, "suggestion") >= 1); break;
        case FeedbackKind::SFA: CHECK(delivered(r, "instruction") >= 2); break;
        }
    }
}

TEST_CASE("a silent human sees the same episode under PFA and IFA") {
    auto events = [](FeedbackKind mode) {
        TrialConfig c;
        c.layout = sample_layout();
        c.mode = FeedbackMode{mode, 100};
        c.policy.kind = PolicyKind::Compliant;
        c.seed = 9;
        std::vector<TrialEvent> out = run_trial(c).events;
        out.front().payload.erase("mode");
        return out;
    };
    CHECK(events(FeedbackKind::PFA) == events(FeedbackKind::IFA));
}
