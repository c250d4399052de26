#include "hrt/coordinator_rules.hpp"

#include "hrt/json_io.hpp"
#include "hrt/manager_rules.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

namespace hrt {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool has_any(const std::string& s, std::initializer_list<std::string_view> words) {
    return std::any_of(words.begin(), words.end(), [&](std::string_view w) { return s.find(w) != std::string::npos; });
}

std::size_t first_of(const std::string& s, std::initializer_list<std::string_view> words) {
    std::size_t best = std::string::npos;
    for (std::string_view w : words) best = std::min(best, s.find(w));
    return best;
}

const std::initializer_list<std::string_view> kMoveWords = {"move", "go to", "out of my way", "out of the way",
                                                            "step aside", "get out", "stand at", "wait at"};
const std::initializer_list<std::string_view> kHandoffWords = {"put", "place", "counter", "handoff", "hand off",
                                                               "hand over", "leave", "drop"};
const std::initializer_list<std::string_view> kHumanWords = {"i'll", "i will", "let me", "i prefer", "i want",
                                                             "i'd like", "i can", "i take", "i'm going to"};
const std::initializer_list<std::string_view> kRobotWords = {"you handle", "you take", "you do", "you should",
                                                             "you can", "you get", "you pick", "robot"};
const std::initializer_list<std::string_view> kTaskWords = {"onion", "tomato", "dish", "plate", "soup",
                                                            "cook", "serve", "deliver", "pot"};

std::string pos_text(GridPos p) { return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")"; }

std::string join_names(const SubtaskGraph& g, const std::vector<SubtaskId>& ids) {
    std::vector<std::string> names;
    for (SubtaskId id : ids) {
        const std::string& n = g.node(id).name;
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    }
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += i + 1 == names.size() ? " and " : ", ";
        out += names[i];
    }
    return out;
}

bool pending(const SubtaskNode& n) {
    return !n.temporary && (n.status == SubtaskStatus::Unknown || n.status == SubtaskStatus::NotReady ||
                            n.status == SubtaskStatus::ReadyToExecute);
}

} // namespace

std::string_view to_string(QueryKind k) {
    switch (k) {
    case QueryKind::Unclear: return "unclear";
    case QueryKind::StructureChange: return "structure_change";
    case QueryKind::AttributeChange: return "attribute_change";
    case QueryKind::TemporaryTask: return "temporary_task";
    }
    return "?";
}

std::vector<GridPos> coordinates_in(std::string_view message) {
    static const std::regex re(R"((\d+)\s*,\s*(\d+))");
    std::vector<GridPos> out;
    const std::string s(message);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it)
        out.push_back({std::stoi((*it)[1].str()), std::stoi((*it)[2].str())});
    return out;
}

QueryKind classify_rule(std::string_view message) {
    const std::string s = lower(message);
    const bool coord = !coordinates_in(s).empty();
    if (coord && has_any(s, kMoveWords)) {
        // "put onions on counter (5,2)" mentions no movement verb; "move the
        // onion to (5,2)" is still a handoff when an item is named.
        if (!has_any(s, {"onion", "tomato", "dish", "plate", "soup"})) return QueryKind::TemporaryTask;
    }
    if (coord && has_any(s, kHandoffWords)) return QueryKind::StructureChange;
    if (coord && has_any(s, kMoveWords)) return QueryKind::TemporaryTask;
    if ((has_any(s, kHumanWords) || has_any(s, kRobotWords)) && has_any(s, kTaskWords)) return QueryKind::AttributeChange;
    return QueryKind::Unclear;
}

std::vector<SubtaskId> nodes_mentioned(const SubtaskGraph& g, const Layout& layout, std::string_view message) {
    const std::string s = lower(message);
    std::vector<ItemKind> items;
    if (s.find("onion") != std::string::npos) items.push_back(ItemKind::Onion);
    if (s.find("tomato") != std::string::npos) items.push_back(ItemKind::Tomato);
    if (has_any(s, {"dish", "plate", "bowl"})) items.push_back(ItemKind::Dish);
    if (has_any(s, {"soup", "serve", "deliver"})) items.push_back(ItemKind::Soup);

    std::vector<EffectKind> verbs;
    if (has_any(s, {"pick", "get", "grab", "take", "fetch", "collect"})) verbs.push_back(EffectKind::Pick);
    if (has_any(s, {"put", "place", "add", "drop", "serve", "deliver", "fill"})) verbs.push_back(EffectKind::Put);
    if (has_any(s, {"cook", "start"})) verbs.push_back(EffectKind::Cook);
    const bool pot_only = items.empty() && verbs.empty() && s.find("pot") != std::string::npos;

    std::vector<SubtaskId> out;
    for (const auto& [id, n] : g.nodes) {
        if (!pending(n)) continue;
        const TaskEffect e = infer_effect(n, &layout);
        if (e.kind == EffectKind::MoveTo) continue;
        if (pot_only) {
            if (std::any_of(n.targets.begin(), n.targets.end(), [&](GridPos p) { return layout.at(p) == TileKind::Pot; }))
                out.push_back(id);
            continue;
        }
        if (e.kind == EffectKind::Cook) {
            if (std::find(verbs.begin(), verbs.end(), EffectKind::Cook) != verbs.end()) out.push_back(id);
            continue;
        }
        const bool item_ok = items.empty() ? !verbs.empty() : std::find(items.begin(), items.end(), e.item) != items.end();
        const bool verb_ok = verbs.empty() || std::find(verbs.begin(), verbs.end(), e.kind) != verbs.end();
        if (item_ok && verb_ok) out.push_back(id);
    }
    return out;
}

std::string clarification_text() {
    return "Sorry, I am not sure what you mean. Do you want to change how we split the work, tell me which tasks "
           "you prefer, or send me somewhere, for example \"move to (4, 1)\"?";
}

json rule_revision(std::string_view message, const SubtaskGraph& g, const Layout& layout, const LocationTable& loc) {
    const QueryKind kind = classify_rule(message);
    json out = {{"query_type", static_cast<int>(kind)}, {"message", ""}, {"revisions", json::array()}};
    const std::vector<GridPos> coords = coordinates_in(message);
    auto loc_id = [&](GridPos p) -> json {
        if (auto id = loc.id_of(p)) return *id;
        return json::array({p.x, p.y});
    };

    switch (kind) {
    case QueryKind::Unclear: out["message"] = clarification_text(); break;
    case QueryKind::TemporaryTask: {
        const GridPos p = coords.front();
        out["revisions"].push_back({{"op", "add_temporary"},
                                    {"name", "move to " + pos_text(p)},
                                    {"target_position_id", json::array({loc_id(p)})},
                                    {"notes", "robot should execute"}});
        out["message"] = "OK, moving to " + pos_text(p) + " now.";
        break;
    }
    case QueryKind::StructureChange: {
        const GridPos k = coords.front();
        // Split every open node that consumes the item named in the message
        // (any ingredient when none is named).
        std::vector<SubtaskId> targets;
        for (SubtaskId id : nodes_mentioned(g, layout, message)) {
            const TaskEffect e = infer_effect(g.node(id), &layout);
            const auto need = required_held(e);
            if (need && *need != ItemKind::None) targets.push_back(id);
        }
        if (targets.empty()) {
            for (const auto& [id, n] : g.nodes) {
                if (!pending(n)) continue;
                const auto need = required_held(infer_effect(n, &layout));
                if (need && (*need == ItemKind::Onion || *need == ItemKind::Tomato)) targets.push_back(id);
            }
        }
        for (SubtaskId id : targets)
            out["revisions"].push_back({{"op", "split_node"}, {"node_id", id}, {"handoff_position_id", loc_id(k)}});
        out["message"] = targets.empty()
                             ? "I could not find a remaining step to route through " + pos_text(k) + "."
                             : "OK, I will use the counter at " + pos_text(k) + " as a handoff for " +
                                   join_names(g, targets) + ".";
        break;
    }
    case QueryKind::AttributeChange: {
        const std::string s = lower(message);
        const std::size_t h = first_of(s, kHumanWords);
        const std::size_t r = first_of(s, kRobotWords);
        const bool human = h < r;
        const std::vector<SubtaskId> ids = nodes_mentioned(g, layout, message);
        const std::string notes =
            std::string(human ? "human prefers to do this task: " : "robot should do this task: ") + std::string(message);
        for (SubtaskId id : ids) out["revisions"].push_back({{"op", "set_attribute"}, {"id", id}, {"notes", notes}});
        if (ids.empty()) out["message"] = "I could not match that to any remaining step; the plan is unchanged.";
        else if (human) out["message"] = "Got it: you will " + join_names(g, ids) + ". I will take the rest.";
        else out["message"] = "Got it: I will " + join_names(g, ids) + ".";
        break;
    }
    }
    return out;
}

std::optional<SplitOption> best_split(const SubtaskGraph& g, const Layout& layout, const SubtaskEdge& edge) {
    const std::vector<GridPos> counters = layout.cells_of(TileKind::Counter);
    std::optional<SplitOption> best;
    const std::set<GridPos> from(g.node(edge.parent).targets.begin(), g.node(edge.parent).targets.end());
    const std::set<GridPos> to(g.node(edge.child).targets.begin(), g.node(edge.child).targets.end());
    bool structurally_ok = false;
    for (GridPos k : counters) {
        if (layout.adjacent_floor(k).empty()) continue;
        if (!structurally_ok) {
            try {
                (void)apply_revision(g, rev::SplitNode{edge.child, k, edge.parent});
                structurally_ok = true;
            } catch (const RevisionRejected&) {
                return std::nullopt;
            }
        }
        SplitOption o{edge, k, path_cost(layout, from, {k}), path_cost(layout, {k}, to)};
        if (o.max_leg() >= kUnreachable) continue;
        if (!best || o.max_leg() < best->max_leg()) best = o; // counters come in position order
    }
    return best;
}

SplitAnalysis analyze_splits(const SubtaskGraph& g, const Layout& layout, double threshold) {
    SplitAnalysis a;
    std::vector<SubtaskEdge> open;
    for (const SubtaskEdge& e : g.edges)
        if (g.node(e.child).status != SubtaskStatus::Success) open.push_back(e);
    if (open.empty()) return a;
    a.all_unreachable = std::all_of(open.begin(), open.end(), [](const SubtaskEdge& e) { return e.cost >= kUnreachable; });
    for (const SubtaskEdge& e : open)
        if (e.cost < kUnreachable) a.max_edge_cost = std::max(a.max_edge_cost, e.cost);
    for (const SubtaskEdge& e : open)
        if (e.cost == a.max_edge_cost) a.max_edges.push_back(e);
    if (a.all_unreachable || a.max_edge_cost <= 0) return a;

    std::vector<SplitOption> proposal;
    for (const SubtaskEdge& e : a.max_edges) {
        const auto o = best_split(g, layout, e);
        if (!o) return a;
        const double reduction = 1.0 - static_cast<double>(o->max_leg()) / static_cast<double>(e.cost);
        if (reduction + 1e-12 < threshold) return a;
        proposal.push_back(*o);
    }
    a.proposal = std::move(proposal);
    return a;
}

json rule_suggestion(const SubtaskGraph& g, const WorldState& w, const LocationTable& loc, double threshold) {
    const Layout& layout = *w.layout;
    const SplitAnalysis a = analyze_splits(g, layout, threshold);
    json out = {{"coordinator_suggestion", ""}, {"preference_suggestion", ""}, {"split", json::array()}};
    if (a.all_unreachable) {
        out["unreachable"] = true;
        out["coordinator_suggestion"] =
            "Some remaining subtasks cannot be reached on this layout, so the current plan cannot finish the order.";
        return out;
    }
    if (!a.proposal.empty()) {
        for (const SplitOption& o : a.proposal) {
            json op = {{"op", "split_node"}, {"node_id", o.edge.child}, {"parent", o.edge.parent}};
            if (auto id = loc.id_of(o.counter)) op["handoff_position_id"] = *id;
            else op["handoff_position_id"] = json::array({o.counter.x, o.counter.y});
            out["split"].push_back(op);
        }
        const SplitOption& o = a.proposal.front();
        std::vector<SubtaskId> children;
        for (const SplitOption& p : a.proposal) children.push_back(p.edge.child);
        std::ostringstream text;
        text << "I can hand items over on the counter at " << pos_text(o.counter) << " for " << join_names(g, children)
             << ": the longest trip drops from " << a.max_edge_cost << " to " << o.max_leg() << " moves.";
        out["coordinator_suggestion"] = text.str();
        return out;
    }

    // No worthwhile split: suggest who should do what by proximity.
    std::vector<SubtaskId> mine, yours;
    for (const auto& [id, n] : g.nodes) {
        if (!pending(n)) continue;
        const std::set<GridPos> to(n.targets.begin(), n.targets.end());
        const Cost r = path_cost(layout, {w.agent(AgentRole::Robot).pos}, to);
        const Cost h = path_cost(layout, {w.agent(AgentRole::Human).pos}, to);
        (r <= h ? mine : yours).push_back(id);
    }
    std::string text;
    if (!mine.empty()) text += "I will focus on " + join_names(g, mine) + " since I am closer";
    if (!yours.empty()) text += std::string(text.empty() ? "You" : ", and you") + " could take " + join_names(g, yours);
    out["preference_suggestion"] = text.empty() ? "Everything left is under way; keep going." : text + ".";
    return out;
}

} // namespace hrt
