#include "hrt/canonical_dag.hpp"

namespace hrt {

namespace {

std::vector<GridPos> tiles(const Layout& l, TileKind k) { return l.cells_of(k); }

TileKind dispenser_for(Ingredient i) {
    return i == Ingredient::Onion ? TileKind::OnionDispenser : TileKind::TomatoDispenser;
}

} // namespace

std::vector<SubtaskNode> canonical_nodes(const Recipe& recipe, const Layout& layout) {
    std::vector<SubtaskNode> out;
    auto add = [&](std::string name, SubtaskType type, std::vector<GridPos> targets, std::vector<SubtaskId> parents) {
        SubtaskNode n;
        n.id = static_cast<SubtaskId>(out.size());
        n.name = std::move(name);
        n.task_type = type;
        n.targets = std::move(targets);
        n.parents = std::move(parents);
        out.push_back(std::move(n));
        return out.back().id;
    };

    const auto pots = tiles(layout, TileKind::Pot);
    std::vector<SubtaskId> puts;
    for (Ingredient ing : kIngredients) {
        const std::string item(to_string(ing));
        for (int k = 0; k < recipe.required.count(ing); ++k) {
            const SubtaskId pick = add("pick " + item, SubtaskType::Getting, tiles(layout, dispenser_for(ing)), {});
            puts.push_back(add("put " + item + " in pot", SubtaskType::Putting, pots, {pick}));
        }
    }
    const SubtaskId cook = add("start cooking", SubtaskType::Operating, pots, puts);
    const SubtaskId dish = add("pick dish", SubtaskType::Getting, tiles(layout, TileKind::DishDispenser), {});
    const SubtaskId soup = add("pick soup", SubtaskType::Getting, pots, {cook, dish});
    add("serve soup", SubtaskType::Putting, tiles(layout, TileKind::ServeWindow), {soup});
    return out;
}

SubtaskGraph canonical_dag(const Recipe& recipe, const Layout& layout) {
    SubtaskGraph g = make_graph(canonical_nodes(recipe, layout));
    refresh_readiness(g);
    return g;
}

} // namespace hrt
