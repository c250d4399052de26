#include "hrt/lang/rule_backend.hpp"

#include "hrt/canonical_dag.hpp"
#include "hrt/coordinator_rules.hpp"
#include "hrt/json_io.hpp"
#include "hrt/manager_rules.hpp"

#include <chrono>

namespace hrt::lang {

json base_context(const Layout& layout, const RecipeBook& book) {
    return {{"layout", layout.to_text()}, {"recipe_book", recipe_book_json(book)}};
}

std::shared_ptr<const Layout> RuleBackend::layout_for(const json& context) {
    if (!context.contains("layout") || !context["layout"].is_string())
        throw std::invalid_argument("rule backend: request context has no layout");
    const std::string text = context["layout"].get<std::string>();
    const std::string book_text = context.value("recipe_book", "");
    const std::string key = text + '\0' + book_text;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = layouts_.find(key);
    if (it != layouts_.end()) return it->second;
    const RecipeBook book = book_text.empty() ? RecipeBook::standard() : parse_recipe_book(book_text);
    auto layout = std::make_shared<const Layout>(load_layout(text, book));
    layouts_.emplace(key, layout);
    return layout;
}

namespace {

AssignedPair assigned_from(const json& j) {
    AssignedPair out{};
    if (!j.is_array()) return out;
    for (std::size_t i = 0; i < out.size() && i < j.size(); ++i)
        if (j[i].is_number_integer()) out[i] = j[i].get<int>();
    return out;
}

const json& need(const json& ctx, const char* key) {
    auto it = ctx.find(key);
    if (it == ctx.end()) throw std::invalid_argument(std::string("rule backend: request context has no ") + key);
    return *it;
}

json id_or_null(const std::optional<SubtaskId>& id) { return id ? json(*id) : json(nullptr); }

} // namespace

json RuleBackend::payload(const BackendRequest& r) {
    const json& ctx = r.context;
    const auto layout = layout_for(ctx);
    const LocationTable loc(*layout);
    switch (r.schema) {
    case SchemaId::InitialGraph: {
        const std::string recipe_id = ctx.value("recipe", layout->orders.empty() ? "" : layout->orders.front().id);
        const std::string book_text = ctx.value("recipe_book", "");
        const RecipeBook book = book_text.empty() ? RecipeBook::standard() : parse_recipe_book(book_text);
        const Recipe& recipe = book.at(recipe_id);
        return {{"subtasks", graph_to_wire(canonical_dag(recipe, *layout), loc)}};
    }
    case SchemaId::GraphRevision: {
        const SubtaskGraph g = graph_from_state_json(need(ctx, "graph"), loc);
        return rule_revision(need(ctx, "message").get<std::string>(), g, *layout, loc);
    }
    case SchemaId::Suggestion: {
        const SubtaskGraph g = graph_from_state_json(need(ctx, "graph"), loc);
        const WorldState w = world_from_json(need(ctx, "world"), layout);
        return rule_suggestion(g, w, loc, ctx.value("threshold", 0.25));
    }
    case SchemaId::Assignment: {
        const SubtaskGraph g = graph_from_state_json(need(ctx, "graph"), loc);
        const WorldState w = world_from_json(need(ctx, "world"), layout);
        Exclusions excluded;
        for (const json& e : ctx.value("excluded", json::array())) excluded.insert({e.at(0).get<int>(), e.at(1).get<int>()});
        const RuleAllocation a = rule_allocate(g, w, assigned_from(ctx.value("current", json::array())), excluded);
        return {{"robot_subtask_id", id_or_null(a.picks[static_cast<std::size_t>(index_of(AgentRole::Robot))])},
                {"human_subtask_id", id_or_null(a.picks[static_cast<std::size_t>(index_of(AgentRole::Human))])},
                {"message_to_human", instruction_text(g, a.picks)}};
    }
    case SchemaId::Judge: {
        const SubtaskGraph g = graph_from_state_json(need(ctx, "graph"), loc);
        const WorldState prev = world_from_json(need(ctx, "prev_world"), layout);
        const WorldState cur = world_from_json(need(ctx, "world"), layout);
        std::array<bool, kAgentCount> interacted{true, true};
        if (ctx.contains("interacted"))
            for (std::size_t i = 0; i < interacted.size(); ++i) interacted[i] = ctx["interacted"].at(i).get<bool>();
        const RuleVerdict v = rule_judge(g, prev, cur, assigned_from(ctx.value("current", json::array())), interacted);
        return {{"finished_subtask_ids", v.finished}};
    }
    }
    throw UnknownSchema("rule backend: unknown schema");
}

BackendResponse RuleBackend::complete(const BackendRequest& request) {
    const auto start = std::chrono::steady_clock::now();
    BackendResponse out;
    out.backend = name();
    out.prompt_chars = request.system.size() + request.user.size();
    json p = payload(request);
    out.raw = p.dump();
    out.completion_chars = out.raw.size();
    if (auto why = validate_payload(request.schema, p)) out.error = *why;
    else out.payload = std::move(p);
    out.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace hrt::lang
