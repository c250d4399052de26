#include "hrt/planner.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace hrt {

namespace {

struct SearchSpace {
    const Layout& layout;
    std::optional<GridPos> blocked;

    int size() const { return layout.width * layout.height * 4; }
    int encode(GridPos p, Direction f) const { return (p.y * layout.width + p.x) * 4 + static_cast<int>(f); }
    GridPos cell(int s) const {
        const int c = s / 4;
        return {c % layout.width, c / layout.width};
    }
    Direction facing(int s) const { return static_cast<Direction>(s % 4); }

    int successor(int s, Direction d) const {
        const GridPos p = cell(s);
        const GridPos n = neighbor(p, d);
        const bool free = layout.is_floor(n) && !(blocked && *blocked == n);
        return free ? encode(n, d) : encode(p, d);
    }
};

// Walks parent links back from `s`, producing the move actions in order.
std::vector<AtomicAction> unwind(const std::vector<int>& parent, const std::vector<signed char>& via, int s) {
    std::vector<AtomicAction> out;
    while (parent[static_cast<std::size_t>(s)] >= 0) {
        out.push_back(move_action(static_cast<Direction>(via[static_cast<std::size_t>(s)])));
        s = parent[static_cast<std::size_t>(s)];
    }
    std::reverse(out.begin(), out.end());
    return out;
}

template <typename GoalFn>
std::optional<Plan> search(const SearchSpace& space, const AgentState& self, GoalFn&& goal_of, bool append_interact) {
    const int n = space.size();
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::vector<signed char> via(static_cast<std::size_t>(n), -1);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);

    const int start = space.encode(self.pos, self.facing);
    seen[static_cast<std::size_t>(start)] = 1;
    std::vector<int> layer{start};

    while (!layer.empty()) {
        std::optional<GridPos> best_goal;
        int best_state = -1;
        for (int s : layer) {
            const auto g = goal_of(s);
            if (g && (!best_goal || *g < *best_goal)) {
                best_goal = g;
                best_state = s;
            }
        }
        if (best_goal) {
            Plan p;
            p.actions = unwind(parent, via, best_state);
            if (append_interact) p.actions.push_back(AtomicAction::Interact);
            p.goal = *best_goal;
            return p;
        }
        std::vector<int> next;
        for (int s : layer) {
            for (Direction d : kDirections) {
                const int t = space.successor(s, d);
                if (seen[static_cast<std::size_t>(t)]) continue;
                seen[static_cast<std::size_t>(t)] = 1;
                parent[static_cast<std::size_t>(t)] = s;
                via[static_cast<std::size_t>(t)] = static_cast<signed char>(d);
                next.push_back(t);
            }
        }
        layer = std::move(next);
    }
    return std::nullopt;
}

} // namespace

std::optional<Plan> plan(const PlanQuery& q) {
    if (!q.layout) throw std::invalid_argument("plan: query has no layout");
    const Layout& layout = *q.layout;
    if (q.goals.empty()) throw std::invalid_argument("plan: empty goal set");
    for (GridPos g : q.goals)
        if (!layout.in_bounds(g) || layout.at(g) == TileKind::Floor)
            throw std::invalid_argument("plan: goal " + to_string(g) + " is not an interaction tile");

    SearchSpace space{layout, std::nullopt};
    if (q.other && q.treat_other_as == OtherAgent::Obstacle) space.blocked = q.other->pos;

    auto goal_of = [&](int s) -> std::optional<GridPos> {
        const GridPos f = neighbor(space.cell(s), space.facing(s));
        if (q.goals.count(f)) return f;
        return std::nullopt;
    };
    return search(space, q.self, goal_of, true);
}

std::optional<Plan> plan_to_cell(const Layout& layout, const AgentState& self, const std::optional<AgentState>& other,
                                 GridPos cell, OtherAgent treat_other_as) {
    if (!layout.is_floor(cell)) return std::nullopt;
    SearchSpace space{layout, std::nullopt};
    if (other && treat_other_as == OtherAgent::Obstacle) {
        if (other->pos == cell) return std::nullopt;
        space.blocked = other->pos;
    }
    auto goal_of = [&](int s) -> std::optional<GridPos> {
        if (space.cell(s) == cell) return cell;
        return std::nullopt;
    };
    return search(space, self, goal_of, false);
}

Cost path_cost(const Layout& layout, const std::set<GridPos>& from, const std::set<GridPos>& to) {
    if (from.empty() || to.empty()) throw std::invalid_argument("path_cost: empty position set");
    SearchSpace space{layout, std::nullopt};
    const int n = space.size();
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::deque<int> frontier;

    auto seed = [&](GridPos c) {
        for (Direction f : kDirections) {
            const int s = space.encode(c, f);
            if (dist[static_cast<std::size_t>(s)] >= 0) continue;
            dist[static_cast<std::size_t>(s)] = 0;
            frontier.push_back(s);
        }
    };
    for (GridPos p : from) {
        if (!layout.in_bounds(p)) continue;
        if (layout.at(p) == TileKind::Floor) {
            seed(p);
        } else {
            for (GridPos c : layout.adjacent_floor(p)) seed(c);
        }
    }

    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        const GridPos facing = neighbor(space.cell(s), space.facing(s));
        if (to.count(facing) && layout.in_bounds(facing) && layout.at(facing) != TileKind::Floor)
            return dist[static_cast<std::size_t>(s)] + 1;
        for (Direction d : kDirections) {
            const int t = space.successor(s, d);
            if (dist[static_cast<std::size_t>(t)] >= 0) continue;
            dist[static_cast<std::size_t>(t)] = dist[static_cast<std::size_t>(s)] + 1;
            frontier.push_back(t);
        }
    }
    return kUnreachable;
}

} // namespace hrt
