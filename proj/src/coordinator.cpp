#include "hrt/coordinator.hpp"

#include "hrt/canonical_dag.hpp"
#include "hrt/errors.hpp"
#include "hrt/json_io.hpp"

namespace hrt {

SubtaskGraph prepare_graph(SubtaskGraph g, const Layout& layout) {
    refresh_readiness(g);
    if (auto vs = validate(g); !vs.empty()) throw RevisionRejected(vs);
    return recost(std::move(g), layout);
}

Coordinator::Coordinator(lang::BackendPtr backend, std::shared_ptr<const lang::RequestBuilder> requests,
                         CoordinatorConfig cfg)
    : backend_(std::move(backend)), requests_(std::move(requests)), cfg_(cfg) {
    if (!backend_ || !requests_) throw std::invalid_argument("coordinator needs a backend and a request builder");
}

GraphOutcome Coordinator::generate_initial_graph(const WorldState& w, const Recipe& recipe) {
    const Layout& layout = requests_->layout();
    GraphOutcome out;
    std::string why;
    try {
        const lang::BackendResponse r = backend_->complete(requests_->initial_graph(w, recipe));
        if (!r.payload) {
            why = "malformed initial graph: " + r.error;
        } else {
            auto parsed = nodes_from_wire(*r.payload, requests_->locations());
            if (const auto* bad = std::get_if<Malformed>(&parsed)) {
                why = "malformed initial graph: " + bad->reason;
            } else {
                out.graph = prepare_graph(make_graph(std::get<std::vector<SubtaskNode>>(std::move(parsed))), layout);
                return out;
            }
        }
    } catch (const std::exception& e) {
        why = std::string("initial graph rejected: ") + e.what();
    }
    out.fallback = true;
    out.incident = why;
    out.graph = prepare_graph(canonical_dag(recipe, layout), layout);
    return out;
}

QueryOutcome Coordinator::handle_message(const std::string& message, const SubtaskGraph& g, const WorldState& w) {
    const Layout& layout = requests_->layout();
    const LocationTable& loc = requests_->locations();
    QueryOutcome out;
    out.graph = g;

    const lang::BackendResponse r = backend_->complete(requests_->revision(w, g, message));
    if (!r.payload) {
        out.reply = "Sorry, I could not work out a response to that; the plan is unchanged.";
        out.rejected = true;
        return out;
    }
    const lang::RevisionReply reply = lang::revision_from_payload(*r.payload);
    out.kind = static_cast<QueryKind>(reply.query_type);

    if (out.kind == QueryKind::Unclear) {
        ++clarifications_;
        if (clarifications_ > cfg_.max_clarifications) {
            clarifications_ = 0;
            out.reply = "Sorry, I still cannot tell what you need, so I will keep to the current plan.";
        } else {
            out.reply = reply.message.empty() ? clarification_text() : reply.message;
        }
        return out;
    }
    clarifications_ = 0;

    try {
        SubtaskGraph next = g;
        std::vector<GraphRevision> revisions;
        for (const json& op : reply.revisions) {
            if (op.value("op", "") == "add_temporary") {
                std::vector<GridPos> targets;
                const json ids = op.value("target_position_id", json::array());
                for (const json& t : ids.is_array() ? ids : json::array({ids})) {
                    if (t.is_number_integer()) {
                        if (auto p = loc.position(t.get<int>())) targets.push_back(*p);
                        else throw ParseError("unknown target_position_id " + t.dump());
                    } else {
                        targets.push_back(pos_from_json(t));
                    }
                }
                for (GridPos p : targets)
                    if (!layout.in_bounds(p)) throw ParseError("target outside the kitchen");
                auto [with_temp, id] = add_temporary(next, op.value("name", std::string("move")), targets,
                                                     op.value("notes", std::string("robot should execute")));
                next = with_priorities(std::move(with_temp));
                out.temporary = id;
                out.revision_kinds.push_back("AddTemporary");
                continue;
            }
            revisions.push_back(revision_from_json(op, loc));
        }
        if (!revisions.empty()) next = apply_revisions(next, revisions, &layout);
        for (const GraphRevision& rv : revisions) out.revision_kinds.emplace_back(revision_kind(rv));
        if (auto vs = validate(next); !vs.empty()) throw RevisionRejected(vs);
        out.changed = !out.revision_kinds.empty();
        out.graph = std::move(next);
        out.reply = reply.message.empty() ? "Done; the plan is updated." : reply.message;
    } catch (const std::exception& e) {
        out.graph = g;
        out.changed = false;
        out.rejected = true;
        out.temporary.reset();
        out.revision_kinds.clear();
        out.reply = std::string("Sorry, I cannot make that change (") + e.what() + "). The plan is unchanged.";
    }
    return out;
}

Suggestion Coordinator::active_suggestion(const SubtaskGraph& g, const WorldState& w) {
    Suggestion s;
    const lang::BackendResponse r = backend_->complete(requests_->suggestion(w, g, cfg_.split_threshold));
    if (!r.payload) return s;
    const lang::SuggestionReply reply = lang::suggestion_from_payload(*r.payload);
    s.coordinator_suggestion = reply.coordinator_suggestion;
    s.preference_suggestion = reply.preference_suggestion;
    s.unreachable = reply.unreachable;
    try {
        for (const json& op : reply.split) s.proposed_revision.push_back(revision_from_json(op, requests_->locations()));
    } catch (const ParseError&) {
        s.proposed_revision.clear();
    }
    return s;
}

SubtaskGraph Coordinator::accept(const SubtaskGraph& g, const Suggestion& s) const {
    if (s.proposed_revision.empty()) return g;
    return apply_revisions(g, s.proposed_revision, &requests_->layout());
}

} // namespace hrt
