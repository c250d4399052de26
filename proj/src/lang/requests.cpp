#include "hrt/lang/requests.hpp"

#include "hrt/json_io.hpp"
#include "hrt/lang/render.hpp"
#include "hrt/lang/rule_backend.hpp"

namespace hrt::lang {

namespace {

json pair_json(const AssignedPair& a) {
    json out = json::array();
    for (const auto& id : a) out.push_back(id ? json(*id) : json(nullptr));
    return out;
}

} // namespace

RequestBuilder::RequestBuilder(std::shared_ptr<const Layout> layout, RecipeBook book, std::uint64_t seed)
    : layout_(std::move(layout)), book_(std::move(book)), loc_(*layout_), seed_(seed), base_(base_context(*layout_, book_)) {}

BackendRequest RequestBuilder::make(TemplateId t, const Bindings& b, const std::string& extra, json context) const {
    BackendRequest r;
    r.template_id = t;
    r.schema = schema_for(t);
    r.system = render_template(t, b);
    r.user = extra.empty() ? schema_directive(r.schema) : extra + "\n\n" + schema_directive(r.schema);
    r.temperature = 0.0;
    r.seed = seed_;
    r.context = base_;
    for (auto& [k, v] : context.items()) r.context[k] = std::move(v);
    return r;
}

BackendRequest RequestBuilder::initial_graph(const WorldState& w, const Recipe& recipe) const {
    const Bindings b{{"recipe_book", render_recipe_book({recipe})}, {"kitchen_items", render_kitchen_items(w, loc_)}};
    return make(TemplateId::InitialGraph, b, "Make the subtasks for one " + recipe.id + ".", {{"recipe", recipe.id}});
}

BackendRequest RequestBuilder::revision(const WorldState& w, const SubtaskGraph& g, const std::string& message) const {
    const Bindings b{{"subtasks_example", subtasks_example()}, {"Human_message", message}};
    const std::string extra =
        "Current subtask graph:\n" + render_graph(g, loc_) + "\n\nKitchen:\n" + render_kitchen_items(w, loc_);
    return make(TemplateId::GraphRevision, b, extra, {{"graph", graph_state_json(g, loc_)}, {"message", message}});
}

BackendRequest RequestBuilder::suggestion(const WorldState& w, const SubtaskGraph& g, double threshold) const {
    const Bindings b{{"recipe_book", render_recipe_book(w.orders)},
                     {"kitchen_items", render_kitchen_items(w, loc_)},
                     {"current_graph", render_graph(g, loc_)}};
    const std::string extra = "Robot: " + render_agent_state(w.agent(AgentRole::Robot)) +
                              "\nHuman: " + render_agent_state(w.agent(AgentRole::Human));
    return make(TemplateId::ActiveSuggestion, b, extra,
                {{"graph", graph_state_json(g, loc_)}, {"world", to_json(w)}, {"threshold", threshold}});
}

BackendRequest RequestBuilder::assignment(const WorldState& w, const SubtaskGraph& g, const AssignedPair& current,
                                          const Exclusions& excluded) const {
    const auto& robot = current[static_cast<std::size_t>(index_of(AgentRole::Robot))];
    const auto& human = current[static_cast<std::size_t>(index_of(AgentRole::Human))];
    const Bindings b{
        {"robot_state", render_agent_state(w.agent(AgentRole::Robot)) + "; current task: " + render_task(g, robot, loc_)},
        {"human_state", render_agent_state(w.agent(AgentRole::Human)) + "; current task: " + render_task(g, human, loc_)},
        {"graph_state", render_graph(g, loc_) + "\nReady subtasks:\n" + render_ready_tasks(g, loc_)},
    };
    json ex = json::array();
    for (const auto& [agent, id] : excluded) ex.push_back({agent, id});
    std::string extra;
    if (!excluded.empty()) {
        extra = "Do not give these (agent, subtask) pairs again yet, the agent got stuck on them:";
        for (const auto& [agent, id] : excluded) extra += " (" + std::string(to_string(static_cast<AgentRole>(agent))) + ", " + std::to_string(id) + ")";
    }
    return make(TemplateId::SubtaskAssignment, b, extra,
                {{"graph", graph_state_json(g, loc_)}, {"world", to_json(w)}, {"current", pair_json(current)}, {"excluded", ex}});
}

BackendRequest RequestBuilder::judge(const WorldState& prev, const WorldState& cur, const SubtaskGraph& g,
                                     const AssignedPair& current, const std::array<bool, kAgentCount>& interacted) const {
    const auto& robot = current[static_cast<std::size_t>(index_of(AgentRole::Robot))];
    const auto& human = current[static_cast<std::size_t>(index_of(AgentRole::Human))];
    std::vector<SubtaskId> exclude;
    for (const auto& id : current)
        if (id) exclude.push_back(*id);
    const Bindings b{
        {"robot_prev_state", render_agent_state(prev.agent(AgentRole::Robot))},
        {"robot_state", render_agent_state(cur.agent(AgentRole::Robot))},
        {"human_prev_state", render_agent_state(prev.agent(AgentRole::Human))},
        {"human_state", render_agent_state(cur.agent(AgentRole::Human))},
        {"robot_task", render_task(g, robot, loc_)},
        {"human_task", render_task(g, human, loc_)},
        {"all_possible_tasks", render_open_tasks(g, exclude, loc_)},
    };
    const std::string extra = "Kitchen before:\n" + render_kitchen_items(prev, loc_) + "\nKitchen now:\n" +
                              render_kitchen_items(cur, loc_);
    return make(TemplateId::StatusJudge, b, extra,
                {{"graph", graph_state_json(g, loc_)},
                 {"prev_world", to_json(prev)},
                 {"world", to_json(cur)},
                 {"current", pair_json(current)},
                 {"interacted", {interacted[0], interacted[1]}}});
}

} // namespace hrt::lang
