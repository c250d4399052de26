#pragma once

// Reference implementations the production code is checked against. They are
// written for obviousness, not speed, and share no code with src/.

#include "hrt/feedback.hpp"
#include "hrt/layout.hpp"

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

namespace hrt::testing {

/// Fewest atomic actions for an agent at (pos, facing) to end up facing one of
/// `goals` and press Interact. A move into open floor walks and turns; a move
/// toward anything else only turns. `blocked`, when set, is an occupied cell.
inline std::optional<long long> bfs_oracle_cost(const Layout& l, GridPos pos, int facing,
                                                const std::set<GridPos>& goals,
                                                std::optional<GridPos> blocked = std::nullopt) {
    static const int dx[4] = {0, 0, -1, 1};
    static const int dy[4] = {-1, 1, 0, 0};
    using S = std::tuple<int, int, int>;
    std::map<S, long long> dist;
    std::queue<S> q;
    dist[{pos.x, pos.y, facing}] = 0;
    q.push({pos.x, pos.y, facing});
    while (!q.empty()) {
        auto [x, y, f] = q.front();
        q.pop();
        const long long d = dist[{x, y, f}];
        if (goals.count(GridPos{x + dx[f], y + dy[f]})) return d + 1;
        for (int m = 0; m < 4; ++m) {
            int nx = x + dx[m], ny = y + dy[m];
            bool open = nx >= 0 && ny >= 0 && nx < l.width && ny < l.height &&
                        l.tiles[static_cast<std::size_t>(ny * l.width + nx)] == TileKind::Floor &&
                        !(blocked && blocked->x == nx && blocked->y == ny);
            S next = open ? S{nx, ny, m} : S{x, y, m};
            if (dist.count(next)) continue;
            dist[next] = d + 1;
            q.push(next);
        }
    }
    return std::nullopt;
}

/// Interaction tiles reachable from floor cell `from` when `removed` (if any)
/// is impassable.
inline std::set<GridPos> reachable_interaction_tiles(const Layout& l, GridPos from,
                                                     std::optional<GridPos> removed) {
    std::set<GridPos> seen{from}, tiles;
    std::vector<GridPos> stack{from};
    while (!stack.empty()) {
        GridPos p = stack.back();
        stack.pop_back();
        for (Direction d : kDirections) {
            GridPos n = neighbor(p, d);
            if (!l.in_bounds(n)) continue;
            if (removed && n == *removed) continue;
            TileKind k = l.at(n);
            if (k == TileKind::Floor) {
                if (seen.insert(n).second) stack.push_back(n);
            } else if (is_interaction_tile(k)) {
                tiles.insert(n);
            }
        }
    }
    return tiles;
}

/// Brute-force critical cells: remove each floor cell in turn and look for any
/// other floor cell that lost access to an interaction tile.
inline std::set<GridPos> critical_cells_oracle(const Layout& l) {
    std::set<GridPos> out;
    const auto floor = l.floor_cells();
    std::map<GridPos, std::set<GridPos>> base;
    for (GridPos f : floor) base[f] = reachable_interaction_tiles(l, f, std::nullopt);
    for (GridPos c : floor) {
        for (GridPos f : floor) {
            if (f == c) continue;
            if (reachable_interaction_tiles(l, f, c) != base[f]) {
                out.insert(c);
                break;
            }
        }
    }
    return out;
}

/// Sum along the heaviest path from every node to `sink`, by enumerating all
/// paths. `children[i]` lists (child, cost). Nodes with no path get nullopt.
inline std::map<int, std::optional<long long>> enumerate_priorities(
    const std::map<int, std::vector<std::pair<int, long long>>>& children, int sink) {
    std::map<int, std::optional<long long>> out;
    for (const auto& [start, _] : children) {
        std::optional<long long> best;
        std::vector<std::pair<int, long long>> stack{{start, 0}};
        while (!stack.empty()) {
            auto [n, acc] = stack.back();
            stack.pop_back();
            if (n == sink) {
                if (!best || acc > *best) best = acc;
                continue;
            }
            auto it = children.find(n);
            if (it == children.end()) continue;
            for (auto [c, w] : it->second) stack.push_back({c, acc + w});
        }
        out[start] = best;
    }
    return out;
}

/// The capability quadrants as a lookup on the signs of (C_h - T, C_l - T).
inline FeedbackKind quadrant_oracle(int t, int ch, int cl) {
    const int h = (ch > t) - (ch < t), l = (cl > t) - (cl < t);
    if (h == 0 || l == 0) return FeedbackKind::AFA;
    static const FeedbackKind table[2][2] = {
        // l < 0              l > 0
        {FeedbackKind::PFA, FeedbackKind::SFA}, // h < 0
        {FeedbackKind::PFA, FeedbackKind::AFA}, // h > 0
    };
    return table[h > 0][l > 0];
}

} // namespace hrt::testing
