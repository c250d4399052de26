#pragma once

#include "hrt/coordinator_rules.hpp"
#include "hrt/lang/requests.hpp"

namespace hrt {

struct CoordinatorConfig {
    double split_threshold = 0.25;
    int max_clarifications = 2;
};

struct GraphOutcome {
    SubtaskGraph graph;
    bool fallback = false;   // the backend's graph was unusable
    std::string incident;    // why, when fallback
};

struct QueryOutcome {
    QueryKind kind = QueryKind::Unclear;
    SubtaskGraph graph;
    std::string reply;
    bool changed = false;
    bool rejected = false;               // revision refused; graph unchanged
    std::vector<std::string> revision_kinds; // one per applied op
    std::optional<SubtaskId> temporary;  // id of an added emergency task
};

struct Suggestion {
    std::string coordinator_suggestion;
    std::string preference_suggestion;
    std::vector<GraphRevision> proposed_revision; // empty: nothing to accept
    bool unreachable = false;

    bool empty() const { return coordinator_suggestion.empty() && preference_suggestion.empty(); }
};

/// Strategy-level language pipeline: builds the initial graph, routes the
/// human's messages through the coordination decision tree, and proposes
/// handoff strategies. Only runs while the game is paused or between ticks.
class Coordinator {
public:
    Coordinator(lang::BackendPtr backend, std::shared_ptr<const lang::RequestBuilder> requests, CoordinatorConfig cfg = {});

    /// Never leaves the caller without a graph: unusable backend output falls
    /// back to the rule backend's canonical graph.
    GraphOutcome generate_initial_graph(const WorldState& w, const Recipe& recipe);

    /// classify_query + handle_query. Kind 0 asks for clarification (at most
    /// max_clarifications times in a row, then apologises and drops it).
    QueryOutcome handle_message(const std::string& message, const SubtaskGraph& g, const WorldState& w);

    Suggestion active_suggestion(const SubtaskGraph& g, const WorldState& w);

    /// Applies an accepted suggestion's revision; throws RevisionRejected.
    SubtaskGraph accept(const SubtaskGraph& g, const Suggestion& s) const;

    int clarification_rounds() const { return clarifications_; }

private:
    lang::BackendPtr backend_;
    std::shared_ptr<const lang::RequestBuilder> requests_;
    CoordinatorConfig cfg_;
    int clarifications_ = 0;
};

/// Full cost + priority pass; throws NoPathToSink / RevisionRejected when the
/// graph is unusable.
SubtaskGraph prepare_graph(SubtaskGraph g, const Layout& layout);

} // namespace hrt
