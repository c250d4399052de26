#include "hrt/subtask_graph.hpp"
#include "hrt/errors.hpp"
#include "hrt/task_effects.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hrt {

std::string_view to_string(SubtaskType t) {
    switch (t) {
    case SubtaskType::Putting: return "PUTTING";
    case SubtaskType::Getting: return "GETTING";
    case SubtaskType::Operating: return "COOKING";
    }
    return "?";
}

std::string_view to_string(SubtaskStatus s) {
    switch (s) {
    case SubtaskStatus::Unknown: return "UNKNOWN";
    case SubtaskStatus::NotReady: return "NOT READY";
    case SubtaskStatus::ReadyToExecute: return "READY_TO_EXECUTE";
    case SubtaskStatus::Executing: return "EXECUTING";
    case SubtaskStatus::Success: return "SUCCESS";
    case SubtaskStatus::Failure: return "FAIL";
    case SubtaskStatus::Emergency: return "EMERGENCY";
    }
    return "?";
}

int wire_code(SubtaskType t) { return static_cast<int>(t); }

std::optional<SubtaskType> subtask_type_from_wire(int code) {
    if (code < 0 || code > 2) return std::nullopt;
    return static_cast<SubtaskType>(code);
}

int wire_code(SubtaskStatus s) {
    switch (s) {
    case SubtaskStatus::Unknown: return 0;
    case SubtaskStatus::ReadyToExecute: return 1;
    case SubtaskStatus::Emergency: return 1;
    case SubtaskStatus::Success: return 2;
    case SubtaskStatus::Failure: return 3;
    case SubtaskStatus::NotReady: return 4;
    case SubtaskStatus::Executing: return 5;
    }
    return 0;
}

std::optional<SubtaskStatus> subtask_status_from_wire(int code, bool temporary) {
    switch (code) {
    case 0: return SubtaskStatus::Unknown;
    case 1: return temporary ? SubtaskStatus::Emergency : SubtaskStatus::ReadyToExecute;
    case 2: return SubtaskStatus::Success;
    case 3: return SubtaskStatus::Failure;
    case 4: return SubtaskStatus::NotReady;
    case 5: return SubtaskStatus::Executing;
    default: return std::nullopt;
    }
}

std::string_view to_string(ViolationKind k) {
    switch (k) {
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::Consistency: return "consistency";
    case ViolationKind::DanglingParent: return "dangling_parent";
    case ViolationKind::DuplicateEdge: return "duplicate_edge";
    case ViolationKind::EmptyTargets: return "empty_targets";
    case ViolationKind::NoSink: return "no_sink";
    case ViolationKind::NoPathToSink: return "no_path_to_sink";
    case ViolationKind::BadTemporary: return "bad_temporary";
    case ViolationKind::RunningTime: return "running_time";
    }
    return "?";
}

std::string describe(const std::vector<Violation>& vs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out << "; ";
        out << to_string(vs[i].kind);
        if (!vs[i].nodes.empty()) {
            out << " [";
            for (std::size_t j = 0; j < vs[i].nodes.size(); ++j) out << (j ? "," : "") << vs[i].nodes[j];
            out << "]";
        }
        if (!vs[i].detail.empty()) out << ": " << vs[i].detail;
    }
    return out.str();
}

IllegalTransition::IllegalTransition(SubtaskId id_, SubtaskStatus from_, SubtaskStatus to_)
    : std::logic_error("subtask " + std::to_string(id_) + ": illegal transition " + std::string(to_string(from_)) +
                       " -> " + std::string(to_string(to_))),
      id(id_), from(from_), to(to_) {}

RevisionRejected::RevisionRejected(std::vector<Violation> vs)
    : std::runtime_error("revision rejected: " + describe(vs)), violations(std::move(vs)) {}

RevisionRejected::RevisionRejected(const std::string& why) : std::runtime_error("revision rejected: " + why) {}

NoPathToSink::NoPathToSink(std::vector<SubtaskId> ids) : std::runtime_error("no path to sink from some subtasks"),
                                                         stranded(std::move(ids)) {}

const SubtaskNode& SubtaskGraph::node(SubtaskId id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw UnknownSubtask(id);
    return it->second;
}

SubtaskNode& SubtaskGraph::node(SubtaskId id) {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw UnknownSubtask(id);
    return it->second;
}

std::vector<SubtaskId> SubtaskGraph::children(SubtaskId id) const {
    std::vector<SubtaskId> out;
    for (const SubtaskEdge& e : edges)
        if (e.parent == id) out.push_back(e.child);
    return out;
}

const SubtaskEdge* SubtaskGraph::edge(SubtaskId parent, SubtaskId child) const {
    for (const SubtaskEdge& e : edges)
        if (e.parent == parent && e.child == child) return &e;
    return nullptr;
}

namespace {

// Re-derives the edge list from the parents lists, keeping known costs.
void rebuild_edges(SubtaskGraph& g) {
    std::map<std::pair<SubtaskId, SubtaskId>, Cost> known;
    for (const SubtaskEdge& e : g.edges) known.emplace(std::pair{e.parent, e.child}, e.cost);
    g.edges.clear();
    for (const auto& [id, n] : g.nodes)
        for (SubtaskId p : n.parents) {
            auto it = known.find({p, id});
            g.edges.push_back({p, id, it == known.end() ? 0 : it->second});
        }
    std::sort(g.edges.begin(), g.edges.end(),
              [](const SubtaskEdge& a, const SubtaskEdge& b) { return std::pair{a.parent, a.child} < std::pair{b.parent, b.child}; });
}

bool is_serve(const SubtaskNode& n) {
    return n.name.find("serve") != std::string::npos || n.name.find("Serve") != std::string::npos ||
           n.name.find("deliver") != std::string::npos;
}

void resolve_sink(SubtaskGraph& g) {
    std::set<SubtaskId> has_children;
    for (const SubtaskEdge& e : g.edges) has_children.insert(e.parent);
    std::vector<SubtaskId> leaves;
    for (const auto& [id, n] : g.nodes)
        if (!n.temporary && !has_children.count(id)) leaves.push_back(id);
    if (leaves.empty()) {
        g.sink = -1;
        return;
    }
    if (std::find(leaves.begin(), leaves.end(), g.sink) != leaves.end()) return;
    for (SubtaskId id : leaves)
        if (is_serve(g.nodes.at(id))) {
            g.sink = id;
            return;
        }
    g.sink = leaves.back();
}

bool parents_done(const SubtaskGraph& g, const SubtaskNode& n) {
    for (SubtaskId p : n.parents) {
        auto it = g.nodes.find(p);
        if (it == g.nodes.end() || it->second.status != SubtaskStatus::Success) return false;
    }
    return true;
}

bool pending(SubtaskStatus s) {
    return s == SubtaskStatus::Unknown || s == SubtaskStatus::NotReady || s == SubtaskStatus::ReadyToExecute;
}

// Finds one directed cycle (as a node sequence) if any exists.
std::optional<std::vector<SubtaskId>> find_cycle(const SubtaskGraph& g) {
    std::map<SubtaskId, std::vector<SubtaskId>> adj;
    for (const auto& [id, n] : g.nodes)
        for (SubtaskId p : n.parents)
            if (g.nodes.count(p)) adj[p].push_back(id);
    for (const SubtaskEdge& e : g.edges)
        if (g.nodes.count(e.parent) && g.nodes.count(e.child)) adj[e.parent].push_back(e.child);

    std::map<SubtaskId, int> color; // 0 white, 1 on stack, 2 done
    std::vector<SubtaskId> stack;
    std::optional<std::vector<SubtaskId>> found;

    std::function<bool(SubtaskId)> dfs = [&](SubtaskId u) {
        color[u] = 1;
        stack.push_back(u);
        for (SubtaskId v : adj[u]) {
            if (color[v] == 1) {
                auto it = std::find(stack.begin(), stack.end(), v);
                found = std::vector<SubtaskId>(it, stack.end());
                return true;
            }
            if (color[v] == 0 && dfs(v)) return true;
        }
        stack.pop_back();
        color[u] = 2;
        return false;
    };
    for (const auto& [id, _] : g.nodes)
        if (color[id] == 0 && dfs(id)) return found;
    return std::nullopt;
}

} // namespace

SubtaskGraph make_graph(std::vector<SubtaskNode> nodes) {
    SubtaskGraph g;
    for (SubtaskNode& n : nodes) {
        const SubtaskId id = n.id;
        if (!g.nodes.emplace(id, std::move(n)).second)
            throw ValidationError("duplicate subtask id " + std::to_string(id));
    }
    rebuild_edges(g);
    resolve_sink(g);
    return g;
}

std::vector<Violation> validate(const SubtaskGraph& g) {
    std::vector<Violation> out;

    for (const auto& [id, n] : g.nodes) {
        for (SubtaskId p : n.parents)
            if (!g.nodes.count(p))
                out.push_back({ViolationKind::DanglingParent, {id, p}, "parent " + std::to_string(p) + " does not exist"});
        if (n.targets.empty()) out.push_back({ViolationKind::EmptyTargets, {id}, "no target positions"});
        if (n.running_time > 0 && n.status != SubtaskStatus::Executing)
            out.push_back({ViolationKind::RunningTime, {id}, "running_time set on a node that is not executing"});
        if (n.temporary) {
            if (!n.parents.empty() || !g.children(id).empty())
                out.push_back({ViolationKind::BadTemporary, {id}, "temporary nodes stand alone"});
            if (n.status == SubtaskStatus::NotReady || n.status == SubtaskStatus::ReadyToExecute)
                out.push_back({ViolationKind::BadTemporary, {id}, "temporary node with a dependency status"});
        } else if (n.status == SubtaskStatus::Emergency) {
            out.push_back({ViolationKind::BadTemporary, {id}, "emergency status on a regular node"});
        }
    }

    std::set<std::pair<SubtaskId, SubtaskId>> seen;
    for (const SubtaskEdge& e : g.edges) {
        if (!seen.insert({e.parent, e.child}).second)
            out.push_back({ViolationKind::DuplicateEdge, {e.parent, e.child}, "edge listed twice"});
        auto it = g.nodes.find(e.child);
        if (it == g.nodes.end() || std::find(it->second.parents.begin(), it->second.parents.end(), e.parent) ==
                                       it->second.parents.end())
            out.push_back({ViolationKind::Consistency, {e.parent, e.child}, "edge missing from the child's parents"});
        if (e.cost < 0) out.push_back({ViolationKind::Consistency, {e.parent, e.child}, "negative edge cost"});
    }
    for (const auto& [id, n] : g.nodes) {
        std::set<SubtaskId> listed;
        for (SubtaskId p : n.parents) {
            if (!listed.insert(p).second)
                out.push_back({ViolationKind::DuplicateEdge, {p, id}, "parent listed twice"});
            if (!seen.count({p, id}))
                out.push_back({ViolationKind::Consistency, {p, id}, "parent has no matching edge"});
        }
    }

    const auto cycle = find_cycle(g);
    if (cycle) out.push_back({ViolationKind::Cycle, *cycle, "dependency cycle"});

    // A cycle makes every sink question moot; report it alone.
    if (cycle) return out;
    const auto sink_it = g.nodes.find(g.sink);
    if (sink_it == g.nodes.end() || sink_it->second.temporary || !g.children(g.sink).empty()) {
        out.push_back({ViolationKind::NoSink, {}, "graph has no terminal serve node"});
    } else {
        std::set<SubtaskId> reach{g.sink};
        std::vector<SubtaskId> frontier{g.sink};
        while (!frontier.empty()) {
            SubtaskId c = frontier.back();
            frontier.pop_back();
            for (SubtaskId p : g.nodes.at(c).parents)
                if (g.nodes.count(p) && reach.insert(p).second) frontier.push_back(p);
        }
        std::vector<SubtaskId> stranded;
        for (const auto& [id, n] : g.nodes)
            if (!n.temporary && !reach.count(id)) stranded.push_back(id);
        if (!stranded.empty()) out.push_back({ViolationKind::NoPathToSink, stranded, "cannot reach the sink"});
    }
    return out;
}

SubtaskGraph compute_edge_costs(SubtaskGraph g, const Layout& layout, const CostFn& cost_fn,
                                std::vector<std::string>* warnings) {
    const CostFn fn = cost_fn ? cost_fn : CostFn([&layout](const std::set<GridPos>& a, const std::set<GridPos>& b) {
        return path_cost(layout, a, b);
    });
    for (SubtaskEdge& e : g.edges) {
        const auto& from = g.node(e.parent).targets;
        const auto& to = g.node(e.child).targets;
        Cost best = kUnreachable;
        for (GridPos p : from)
            for (GridPos c : to) best = std::min(best, fn({p}, {c}));
        e.cost = best;
        if (best >= kUnreachable && warnings)
            warnings->push_back("unreachable edge " + std::to_string(e.parent) + " -> " + std::to_string(e.child));
    }
    ++g.version;
    return g;
}

std::map<SubtaskId, Cost> compute_priorities(const SubtaskGraph& g, PriorityRule rule) {
    std::map<SubtaskId, std::vector<const SubtaskEdge*>> out_edges;
    for (const SubtaskEdge& e : g.edges) out_edges[e.parent].push_back(&e);

    std::map<SubtaskId, std::optional<Cost>> memo;
    std::set<SubtaskId> active;
    std::function<std::optional<Cost>(SubtaskId)> solve = [&](SubtaskId id) -> std::optional<Cost> {
        if (id == g.sink) return Cost{0};
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        if (!active.insert(id).second) throw std::logic_error("compute_priorities: graph has a cycle");
        std::optional<Cost> best;
        for (const SubtaskEdge* e : out_edges[id]) {
            const auto rest = solve(e->child);
            if (!rest) continue;
            const Cost total = add_cost(e->cost, *rest);
            if (!best || (rule == PriorityRule::CriticalPath ? total > *best : total < *best)) best = total;
        }
        active.erase(id);
        memo[id] = best;
        return best;
    };

    std::map<SubtaskId, Cost> out;
    std::vector<SubtaskId> stranded;
    Cost top = 0;
    for (const auto& [id, n] : g.nodes) {
        if (n.temporary) continue;
        const auto p = solve(id);
        if (!p) {
            stranded.push_back(id);
            continue;
        }
        out[id] = *p;
        top = std::max(top, *p);
    }
    if (!stranded.empty()) throw NoPathToSink(stranded);
    for (const auto& [id, n] : g.nodes)
        if (n.temporary) out[id] = add_cost(top, 1);
    return out;
}

SubtaskGraph with_priorities(SubtaskGraph g, PriorityRule rule) {
    for (const auto& [id, p] : compute_priorities(g, rule)) g.nodes.at(id).priority = p;
    ++g.version;
    return g;
}

std::vector<SubtaskId> ready_set(const SubtaskGraph& g) {
    std::vector<const SubtaskNode*> ready;
    for (const auto& [id, n] : g.nodes)
        if (n.status == SubtaskStatus::Emergency || (n.status == SubtaskStatus::ReadyToExecute && parents_done(g, n)))
            ready.push_back(&n);
    std::sort(ready.begin(), ready.end(), [](const SubtaskNode* a, const SubtaskNode* b) {
        const bool ea = a->status == SubtaskStatus::Emergency, eb = b->status == SubtaskStatus::Emergency;
        if (ea != eb) return ea;
        if (a->priority != b->priority) return a->priority > b->priority;
        return a->id < b->id;
    });
    std::vector<SubtaskId> out;
    for (const SubtaskNode* n : ready) out.push_back(n->id);
    return out;
}

bool transition_allowed(SubtaskStatus from, SubtaskStatus to, bool temporary) {
    using S = SubtaskStatus;
    if (from == to) return false;
    if (temporary) {
        switch (from) {
        case S::Unknown: return to == S::Emergency;
        case S::Emergency: return to == S::Executing || to == S::Success || to == S::Failure;
        case S::Executing: return to == S::Success || to == S::Failure || to == S::Emergency;
        case S::Failure: return to == S::Emergency;
        default: return false;
        }
    }
    switch (from) {
    case S::Unknown: return to != S::Emergency;
    case S::NotReady: return to == S::ReadyToExecute;
    case S::ReadyToExecute: return to == S::Executing;
    case S::Executing: return to == S::Success || to == S::Failure || to == S::ReadyToExecute;
    case S::Failure: return to == S::ReadyToExecute;
    default: return false;
    }
}

void refresh_readiness(SubtaskGraph& g) {
    for (auto& [id, n] : g.nodes) {
        if (n.temporary) {
            if (n.status == SubtaskStatus::Unknown) n.status = SubtaskStatus::Emergency;
            continue;
        }
        if (!pending(n.status)) continue;
        n.status = parents_done(g, n) ? SubtaskStatus::ReadyToExecute : SubtaskStatus::NotReady;
    }
}

SubtaskGraph set_status(SubtaskGraph g, SubtaskId id, SubtaskStatus to) {
    SubtaskNode& n = g.node(id);
    const SubtaskStatus from = n.status;
    if (!transition_allowed(from, to, n.temporary)) throw IllegalTransition(id, from, to);
    if (to == SubtaskStatus::ReadyToExecute && !parents_done(g, n)) throw IllegalTransition(id, from, to);
    n.status = to;
    if (from == SubtaskStatus::Executing) {
        n.running_time = 0;
        n.stalled = false;
    }
    refresh_readiness(g);
    ++g.version;
    return g;
}

std::pair<SubtaskGraph, SubtaskId> add_temporary(SubtaskGraph g, std::string name, std::vector<GridPos> targets,
                                                 std::string notes, SubtaskType type) {
    if (targets.empty()) throw std::invalid_argument("add_temporary: no target positions");
    SubtaskNode n;
    n.id = g.next_id();
    n.name = std::move(name);
    n.task_type = type;
    n.status = SubtaskStatus::Emergency;
    n.targets = std::move(targets);
    n.notes = std::move(notes);
    n.temporary = true;
    Cost top = 0;
    for (const auto& [_, m] : g.nodes)
        if (!m.temporary) top = std::max(top, m.priority);
    n.priority = add_cost(top, 1);
    const SubtaskId id = n.id;
    g.nodes.emplace(id, std::move(n));
    ++g.version;
    return {std::move(g), id};
}

SubtaskGraph remove_temporary(SubtaskGraph g, SubtaskId id) {
    if (!g.node(id).temporary) throw std::invalid_argument("remove_temporary: subtask " + std::to_string(id) + " is not temporary");
    g.nodes.erase(id);
    ++g.version;
    return g;
}

SubtaskGraph reset_progress(SubtaskGraph g) {
    for (auto it = g.nodes.begin(); it != g.nodes.end();) {
        if (it->second.temporary) it = g.nodes.erase(it);
        else ++it;
    }
    for (auto& [_, n] : g.nodes) {
        n.status = SubtaskStatus::Unknown;
        n.running_time = 0;
        n.stalled = false;
        n.stall_estimate.reset();
    }
    refresh_readiness(g);
    ++g.version;
    return g;
}

std::string_view revision_kind(const GraphRevision& r) {
    struct V {
        std::string_view operator()(const rev::AddNode&) const { return "AddNode"; }
        std::string_view operator()(const rev::RemoveNode&) const { return "RemoveNode"; }
        std::string_view operator()(const rev::AddEdge&) const { return "AddEdge"; }
        std::string_view operator()(const rev::RemoveEdge&) const { return "RemoveEdge"; }
        std::string_view operator()(const rev::SplitNode&) const { return "SplitNode"; }
        std::string_view operator()(const rev::SetAttribute&) const { return "SetAttribute"; }
    };
    return std::visit(V{}, r);
}

std::string describe(const GraphRevision& r) {
    std::ostringstream out;
    out << revision_kind(r) << "(";
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, rev::AddNode>) out << v.node.id << " '" << v.node.name << "'";
            else if constexpr (std::is_same_v<T, rev::RemoveNode>) out << v.id;
            else if constexpr (std::is_same_v<T, rev::AddEdge> || std::is_same_v<T, rev::RemoveEdge>)
                out << v.parent << " -> " << v.child;
            else if constexpr (std::is_same_v<T, rev::SplitNode>) {
                out << v.node_id << " via " << to_string(v.handoff);
                if (v.parent) out << " from " << *v.parent;
            } else {
                out << v.id;
                if (v.notes) out << " notes='" << *v.notes << "'";
                if (v.name) out << " name='" << *v.name << "'";
                if (v.task_type) out << " type=" << to_string(*v.task_type);
                if (v.targets) out << " targets=" << v.targets->size();
            }
        },
        r);
    out << ")";
    return out.str();
}

namespace {

void remove_parent(SubtaskNode& n, SubtaskId p) {
    n.parents.erase(std::remove(n.parents.begin(), n.parents.end(), p), n.parents.end());
}

void split_node(SubtaskGraph& g, const rev::SplitNode& s, const Layout* layout) {
    if (!g.contains(s.node_id)) throw RevisionRejected("SplitNode: unknown subtask " + std::to_string(s.node_id));
    if (layout && layout->at(s.handoff) != TileKind::Counter)
        throw RevisionRejected("SplitNode: " + to_string(s.handoff) + " is not a counter");
    SubtaskNode& target = g.node(s.node_id);
    if (target.temporary) throw RevisionRejected("SplitNode: temporary subtasks cannot be split");
    if (!pending(target.status)) throw RevisionRejected("SplitNode: subtask already started");

    const TaskEffect effect = infer_effect(target, layout);
    const auto need = required_held(effect);
    if (!need || *need == ItemKind::None)
        throw RevisionRejected("SplitNode: '" + target.name + "' needs no item to be handed over");

    std::vector<SubtaskId> feeders;
    if (s.parent) {
        if (std::find(target.parents.begin(), target.parents.end(), *s.parent) == target.parents.end())
            throw RevisionRejected("SplitNode: " + std::to_string(*s.parent) + " is not a parent of " +
                                   std::to_string(s.node_id));
        feeders.push_back(*s.parent);
    } else {
        for (SubtaskId p : target.parents) {
            const auto out = held_after(infer_effect(g.node(p), layout));
            if (out && *out == *need) feeders.push_back(p);
        }
    }
    if (feeders.empty()) throw RevisionRejected("SplitNode: no parent of '" + target.name + "' produces the item");

    const std::string item(to_string(*need));
    SubtaskNode put;
    put.id = g.next_id();
    put.name = "put " + item + " on counter " + to_string(s.handoff);
    put.task_type = SubtaskType::Putting;
    put.status = SubtaskStatus::NotReady;
    put.targets = {s.handoff};
    put.notes = "robot should execute";
    put.parents = feeders;

    SubtaskNode get;
    get.id = put.id + 1;
    get.name = "get " + item + " from counter " + to_string(s.handoff);
    get.task_type = SubtaskType::Getting;
    get.status = SubtaskStatus::NotReady;
    get.targets = {s.handoff};
    get.notes = "human should execute";
    get.parents = {put.id};

    for (SubtaskId f : feeders) {
        remove_parent(target, f);
        SubtaskNode& fn = g.node(f);
        if (fn.notes.empty()) fn.notes = "robot should execute";
    }
    target.parents.push_back(get.id);
    if (target.notes.empty()) target.notes = "human should execute";
    g.nodes.emplace(put.id, std::move(put));
    g.nodes.emplace(get.id, std::move(get));
}

void apply_one(SubtaskGraph& g, const GraphRevision& r, const Layout* layout) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, rev::AddNode>) {
                if (g.contains(v.node.id)) throw RevisionRejected("AddNode: id " + std::to_string(v.node.id) + " exists");
                if (v.node.id < 0) throw RevisionRejected("AddNode: negative id");
                g.nodes.emplace(v.node.id, v.node);
            } else if constexpr (std::is_same_v<T, rev::RemoveNode>) {
                if (!g.contains(v.id)) throw RevisionRejected("RemoveNode: unknown subtask " + std::to_string(v.id));
                g.nodes.erase(v.id);
                for (auto& [_, n] : g.nodes) remove_parent(n, v.id);
            } else if constexpr (std::is_same_v<T, rev::AddEdge>) {
                if (!g.contains(v.parent) || !g.contains(v.child)) throw RevisionRejected("AddEdge: unknown endpoint");
                auto& ps = g.node(v.child).parents;
                if (std::find(ps.begin(), ps.end(), v.parent) != ps.end()) throw RevisionRejected("AddEdge: edge exists");
                ps.push_back(v.parent);
            } else if constexpr (std::is_same_v<T, rev::RemoveEdge>) {
                if (!g.contains(v.child) || !g.edge(v.parent, v.child)) throw RevisionRejected("RemoveEdge: no such edge");
                remove_parent(g.node(v.child), v.parent);
            } else if constexpr (std::is_same_v<T, rev::SplitNode>) {
                split_node(g, v, layout);
            } else {
                if (!g.contains(v.id)) throw RevisionRejected("SetAttribute: unknown subtask " + std::to_string(v.id));
                SubtaskNode& n = g.node(v.id);
                if (v.notes) n.notes = *v.notes;
                if (v.name) n.name = *v.name;
                if (v.task_type) n.task_type = *v.task_type;
                if (v.targets) {
                    if (v.targets->empty()) throw RevisionRejected("SetAttribute: empty target list");
                    if (layout)
                        for (GridPos p : *v.targets)
                            if (!layout->in_bounds(p)) throw RevisionRejected("SetAttribute: target outside the layout");
                    n.targets = *v.targets;
                }
            }
        },
        r);
}

} // namespace

SubtaskGraph apply_revisions(const SubtaskGraph& g, const std::vector<GraphRevision>& rs, const Layout* layout) {
    SubtaskGraph out = g;
    for (const GraphRevision& r : rs) apply_one(out, r, layout);
    rebuild_edges(out);
    resolve_sink(out);
    refresh_readiness(out);
    auto violations = validate(out);
    if (!violations.empty()) throw RevisionRejected(std::move(violations));
    if (layout) out = recost(std::move(out), *layout);
    out.version = g.version + 1;
    return out;
}

SubtaskGraph apply_revision(const SubtaskGraph& g, const GraphRevision& r, const Layout* layout) {
    return apply_revisions(g, {r}, layout);
}

Cost stall_estimate(const SubtaskGraph& g, SubtaskId id, const StallConfig& cfg) {
    const SubtaskNode& n = g.node(id);
    if (n.stall_estimate) return *n.stall_estimate;
    std::optional<Cost> in, out;
    for (const SubtaskEdge& e : g.edges) {
        if (e.cost >= kUnreachable) continue;
        if (e.child == id) in = in ? std::min(*in, e.cost) : e.cost;
        if (e.parent == id) out = out ? std::min(*out, e.cost) : e.cost;
    }
    if (in) return *in;
    if (out) return *out;
    return cfg.fallback_estimate;
}

SubtaskGraph tick_running_time(SubtaskGraph g, const std::vector<SubtaskId>& executing, const StallConfig& cfg) {
    for (SubtaskId id : executing) {
        auto it = g.nodes.find(id);
        if (it == g.nodes.end() || it->second.status != SubtaskStatus::Executing) continue;
        SubtaskNode& n = it->second;
        ++n.running_time;
        if (n.running_time > cfg.timeout_factor * stall_estimate(g, id, cfg)) n.stalled = true;
    }
    return g;
}

SubtaskGraph recost(SubtaskGraph g, const Layout& layout, PriorityRule rule, std::vector<std::string>* warnings) {
    g = compute_edge_costs(std::move(g), layout, {}, warnings);
    return with_priorities(std::move(g), rule);
}

} // namespace hrt
