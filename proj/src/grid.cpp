#include "hrt/grid.hpp"
#include "hrt/items.hpp"

#include <algorithm>
#include <sstream>

namespace hrt {

std::string to_string(GridPos p) {
    return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    }
    return "?";
}

std::optional<Direction> direction_from_string(std::string_view s) {
    for (Direction d : kDirections)
        if (to_string(d) == s) return d;
    return std::nullopt;
}

std::string_view to_string(TileKind k) {
    switch (k) {
    case TileKind::Floor: return "floor";
    case TileKind::Counter: return "counter";
    case TileKind::OnionDispenser: return "onion_dispenser";
    case TileKind::TomatoDispenser: return "tomato_dispenser";
    case TileKind::DishDispenser: return "dish_dispenser";
    case TileKind::Pot: return "pot";
    case TileKind::ServeWindow: return "serve_window";
    }
    return "?";
}

char glyph(TileKind k) {
    switch (k) {
    case TileKind::Floor: return ' ';
    case TileKind::Counter: return 'X';
    case TileKind::OnionDispenser: return 'O';
    case TileKind::TomatoDispenser: return 'T';
    case TileKind::DishDispenser: return 'D';
    case TileKind::Pot: return 'P';
    case TileKind::ServeWindow: return 'S';
    }
    return '?';
}

std::optional<TileKind> tile_from_glyph(char c) {
    switch (c) {
    case ' ': return TileKind::Floor;
    case 'X': return TileKind::Counter;
    case 'O': return TileKind::OnionDispenser;
    case 'T': return TileKind::TomatoDispenser;
    case 'D': return TileKind::DishDispenser;
    case 'P': return TileKind::Pot;
    case 'S': return TileKind::ServeWindow;
    default: return std::nullopt;
    }
}

std::string_view to_string(Ingredient i) {
    return i == Ingredient::Onion ? "onion" : "tomato";
}

std::optional<Ingredient> ingredient_from_string(std::string_view s) {
    if (s == "onion" || s == "onions") return Ingredient::Onion;
    if (s == "tomato" || s == "tomatoes") return Ingredient::Tomato;
    return std::nullopt;
}

int Ingredients::overlap(const Ingredients& other) const {
    int m = 0;
    for (Ingredient i : kIngredients) m += std::min(count(i), other.count(i));
    return m;
}

std::string Ingredients::describe() const {
    if (empty()) return "empty";
    std::ostringstream out;
    bool first = true;
    for (Ingredient i : kIngredients) {
        if (count(i) == 0) continue;
        if (!first) out << ", ";
        out << to_string(i) << " x" << count(i);
        first = false;
    }
    return out.str();
}

std::string_view to_string(ItemKind k) {
    switch (k) {
    case ItemKind::None: return "none";
    case ItemKind::Onion: return "onion";
    case ItemKind::Tomato: return "tomato";
    case ItemKind::Dish: return "dish";
    case ItemKind::Soup: return "soup";
    }
    return "?";
}

std::optional<ItemKind> item_kind_from_string(std::string_view s) {
    for (ItemKind k : {ItemKind::None, ItemKind::Onion, ItemKind::Tomato, ItemKind::Dish, ItemKind::Soup})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::string Item::describe() const {
    if (kind == ItemKind::Soup) return "soup(" + contents.describe() + ")";
    return std::string(to_string(kind));
}

} // namespace hrt
