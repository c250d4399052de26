#include "hrt/metrics.hpp"

#include <map>
#include <vector>

namespace hrt {

namespace {

// Connected floor components with `removed` impassable; -1 marks non-floor
// cells and the removed one.
std::vector<int> label(const Layout& l, std::optional<GridPos> removed, int& count) {
    std::vector<int> comp(static_cast<std::size_t>(l.width * l.height), -1);
    auto idx = [&](GridPos p) { return static_cast<std::size_t>(p.y * l.width + p.x); };
    count = 0;
    for (GridPos start : l.floor_cells()) {
        if (start == removed || comp[idx(start)] >= 0) continue;
        std::vector<GridPos> stack{start};
        comp[idx(start)] = count;
        while (!stack.empty()) {
            const GridPos p = stack.back();
            stack.pop_back();
            for (Direction d : kDirections) {
                const GridPos n = neighbor(p, d);
                if (!l.is_floor(n) || n == removed || comp[idx(n)] >= 0) continue;
                comp[idx(n)] = count;
                stack.push_back(n);
            }
        }
        ++count;
    }
    return comp;
}

// Interaction tiles touched by each component.
std::vector<std::set<GridPos>> tiles_per_component(const Layout& l, const std::vector<int>& comp, int count) {
    std::vector<std::set<GridPos>> out(static_cast<std::size_t>(count));
    for (GridPos f : l.floor_cells()) {
        const int c = comp[static_cast<std::size_t>(f.y * l.width + f.x)];
        if (c < 0) continue;
        for (Direction d : kDirections) {
            const GridPos n = neighbor(f, d);
            if (l.in_bounds(n) && is_interaction_tile(l.at(n))) out[static_cast<std::size_t>(c)].insert(n);
        }
    }
    return out;
}

} // namespace

std::set<GridPos> critical_cells(const Layout& layout) {
    int base_count = 0;
    const auto base = label(layout, std::nullopt, base_count);
    const auto base_tiles = tiles_per_component(layout, base, base_count);
    auto at = [&](const std::vector<int>& v, GridPos p) { return v[static_cast<std::size_t>(p.y * layout.width + p.x)]; };

    std::set<GridPos> out;
    for (GridPos c : layout.floor_cells()) {
        int count = 0;
        const auto comp = label(layout, c, count);
        const auto tiles = tiles_per_component(layout, comp, count);
        // Every piece of c's old component must still see all of its tiles.
        const auto& before = base_tiles[static_cast<std::size_t>(at(base, c))];
        for (GridPos f : layout.floor_cells()) {
            if (f == c || at(base, f) != at(base, c)) continue;
            if (tiles[static_cast<std::size_t>(at(comp, f))] != before) {
                out.insert(c);
                break;
            }
        }
    }
    return out;
}

FluencyReport teaming_fluency(const Layout& layout) {
    FluencyReport r;
    r.free_cells = static_cast<int>(layout.floor_cells().size());
    r.critical = critical_cells(layout);
    if (r.free_cells > 0)
        r.fluency = 100.0 * static_cast<double>(r.free_cells - static_cast<int>(r.critical.size())) / r.free_cells;
    return r;
}

nlohmann::json FluencyReport::to_json() const {
    nlohmann::json cells = nlohmann::json::array();
    for (GridPos p : critical) cells.push_back({p.x, p.y});
    return {{"free_cells", free_cells}, {"critical_cells", cells}, {"critical_count", critical.size()}, {"fluency", fluency}};
}

std::string render_critical(const Layout& layout, const FluencyReport& report) {
    std::vector<std::string> rows = layout.rows();
    for (GridPos p : report.critical) rows[static_cast<std::size_t>(p.y)][static_cast<std::size_t>(p.x)] = 'x';
    std::string out;
    for (const std::string& r : rows) out += r + '\n';
    return out;
}

} // namespace hrt
