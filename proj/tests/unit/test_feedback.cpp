#include "hrt/feedback.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace hrt;

TEST_CASE("modes parse with a 20 second suggestion interval") {
    CHECK(FeedbackMode::parse("AFA") == FeedbackMode{FeedbackKind::AFA, 100});
    CHECK(FeedbackMode::parse("SFA", 10).interval_ticks == 200);
    CHECK_THROWS_AS(FeedbackMode::parse("afa"), std::invalid_argument);
    CHECK(FeedbackMode::parse("IFA").name() == "IFA");
    CHECK(!FeedbackMode::parse("IFA").chat_enabled());
    CHECK(FeedbackMode::parse("PFA").chat_enabled());
}

TEST_CASE("outbound gating per mode") {
    const FeedbackMode ifa{FeedbackKind::IFA, 100}, pfa{FeedbackKind::PFA, 100}, afa{FeedbackKind::AFA, 100},
        sfa{FeedbackKind::SFA, 100};
    for (Outbound o : {Outbound::AllocationInstruction, Outbound::CoordinatorSuggestion, Outbound::HumanQueryReply})
        for (int t : {0, 100, 137}) {
            CHECK(gate_outbound(ifa, o, t) == Gate::Suppress);
            CHECK(gate_outbound(sfa, o, t) == Gate::Deliver);
        }
    CHECK(gate_outbound(pfa, Outbound::AllocationInstruction, 10) == Gate::Suppress);
    CHECK(gate_outbound(pfa, Outbound::CoordinatorSuggestion, 100) == Gate::Suppress);
    CHECK(gate_outbound(pfa, Outbound::HumanQueryReply, 10) == Gate::Deliver);
    CHECK(gate_outbound(afa, Outbound::CoordinatorSuggestion, 200) == Gate::Deliver);
    CHECK(gate_outbound(afa, Outbound::CoordinatorSuggestion, 230) == Gate::Suppress);
    CHECK(gate_outbound(afa, Outbound::AllocationInstruction, 200) == Gate::Suppress);
    CHECK(gate_outbound(afa, Outbound::HumanQueryReply, 231) == Gate::Deliver);
}

TEST_CASE("suggestions fall due on the interval") {
    const FeedbackMode afa{FeedbackKind::AFA, 100};
    CHECK(!afa.suggestion_due(0));
    CHECK(afa.suggestion_due(100));
    CHECK(!afa.suggestion_due(150));
    CHECK(FeedbackMode{FeedbackKind::SFA, 100}.suggestion_due(300));
    CHECK(!FeedbackMode{FeedbackKind::PFA, 100}.suggestion_due(100));
}

TEST_CASE("recommend_mode examples") {
    CHECK(recommend_mode({5, 8, 3}) == FeedbackKind::PFA);
    CHECK(recommend_mode({8, 3, 9}) == FeedbackKind::SFA);
    CHECK(recommend_mode({5, 5, 5}) == FeedbackKind::AFA);
    CHECK(recommend_mode({2, 7, 9}) == FeedbackKind::AFA);
    CHECK(recommend_mode({9, 1, 2}) == FeedbackKind::PFA);
    CHECK_THROWS_AS(recommend_mode({11, 0, 0}), std::out_of_range);
    CHECK_THROWS_AS(recommend_mode({0, -1, 0}), std::out_of_range);
}

TEST_CASE("recommend_mode matches the quadrant table everywhere") {
    int mismatches = 0;
    for (int t = 0; t <= 10; ++t)
        for (int h = 0; h <= 10; ++h)
            for (int l = 0; l <= 10; ++l) mismatches += recommend_mode({t, h, l}) != hrt::testing::quadrant_oracle(t, h, l);
    CHECK(mismatches == 0);
}
