#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hrt {

struct GridPos {
    int x = 0; // column
    int y = 0; // row

    auto operator<=>(const GridPos&) const = default;
};

std::string to_string(GridPos p);

enum class Direction : std::uint8_t { Up, Down, Left, Right };

inline constexpr std::array<Direction, 4> kDirections{Direction::Up, Direction::Down, Direction::Left,
                                                      Direction::Right};

constexpr GridPos offset(Direction d) {
    switch (d) {
    case Direction::Up: return {0, -1};
    case Direction::Down: return {0, 1};
    case Direction::Left: return {-1, 0};
    case Direction::Right: return {1, 0};
    }
    return {0, 0};
}

constexpr GridPos neighbor(GridPos p, Direction d) {
    const GridPos o = offset(d);
    return {p.x + o.x, p.y + o.y};
}

std::string_view to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view s);

enum class TileKind : std::uint8_t {
    Floor,
    Counter,
    OnionDispenser,
    TomatoDispenser,
    DishDispenser,
    Pot,
    ServeWindow,
};

std::string_view to_string(TileKind k);

/// Layout glyph for a tile kind ('X', 'O', 'T', 'D', 'P', 'S', ' ').
char glyph(TileKind k);
std::optional<TileKind> tile_from_glyph(char c);

constexpr bool is_dispenser(TileKind k) {
    return k == TileKind::OnionDispenser || k == TileKind::TomatoDispenser || k == TileKind::DishDispenser;
}

/// Tiles an agent can do useful work at (everything except plain counters and floor).
constexpr bool is_interaction_tile(TileKind k) {
    return is_dispenser(k) || k == TileKind::Pot || k == TileKind::ServeWindow;
}

} // namespace hrt
