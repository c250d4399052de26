#pragma once

#include "hrt/grid.hpp"
#include "hrt/items.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hrt {

enum class AgentRole : std::uint8_t { Human = 0, Robot = 1 };

inline constexpr int kAgentCount = 2;

constexpr int index_of(AgentRole r) { return static_cast<int>(r); }
constexpr AgentRole other(AgentRole r) { return r == AgentRole::Human ? AgentRole::Robot : AgentRole::Human; }
std::string_view to_string(AgentRole r);

struct Recipe {
    std::string id;
    Ingredients required;
    int cook_ticks = 20;
    int points = 53;

    bool operator==(const Recipe&) const = default;
};

/// Recipes keyed by id, in file order.
class RecipeBook {
public:
    RecipeBook() = default;
    explicit RecipeBook(std::vector<Recipe> recipes);

    /// The built-in book: onion_soup (onion x3), tomato_soup (tomato x3) and
    /// onion_tomato_soup (onion x2, tomato x1); 20 cook ticks, 53 points each.
    static RecipeBook standard();

    const std::vector<Recipe>& recipes() const { return recipes_; }
    const Recipe* find(std::string_view id) const;
    const Recipe& at(std::string_view id) const;

private:
    std::vector<Recipe> recipes_;
};

/// Parses a recipe book from JSON: a list of
/// `{"id", "ingredients": [{"name", "count"}], "cook_ticks", "points"}`.
RecipeBook parse_recipe_book(std::string_view json_text);
RecipeBook load_recipe_book(const std::filesystem::path& path);
std::string recipe_book_json(const RecipeBook& book);

struct LayoutConfig {
    int tick_hz = 5;
    int trial_seconds = 60;
    int pot_capacity = 3;
};

class Layout {
public:
    std::string name;
    int width = 0;
    int height = 0;
    std::vector<TileKind> tiles; // row-major
    std::array<GridPos, kAgentCount> starts{};
    int tick_hz = 5;
    int trial_seconds = 60;
    int pot_capacity = 3;
    std::vector<Recipe> orders; // order rotation, resolved against a recipe book

    bool in_bounds(GridPos p) const { return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height; }
    /// Out-of-bounds cells read as Counter so callers can treat them as walls.
    TileKind at(GridPos p) const;
    bool is_floor(GridPos p) const { return in_bounds(p) && at(p) == TileKind::Floor; }

    int trial_ticks() const { return tick_hz * trial_seconds; }
    std::vector<GridPos> cells_of(TileKind k) const;
    std::vector<GridPos> floor_cells() const;
    /// Every non-Floor tile in row-major order.
    std::vector<GridPos> fixtures() const;
    /// Floor cells orthogonally adjacent to `p`.
    std::vector<GridPos> adjacent_floor(GridPos p) const;

    /// Grid rows as glyph strings; starts are drawn as '1' and '2'.
    std::vector<std::string> rows() const;
    /// Round-trips through load_layout().
    std::string to_text() const;
};

/// Parses a layout file. Header lines are `key: value` (name, tick_hz,
/// trial_seconds, pot_capacity, recipes); the remaining lines are the grid.
/// Throws ParseError on malformed text and ValidationError when the layout is
/// not playable.
/// The five-by-five onion-soup kitchen used when no layout is given.
std::string_view sample_layout_text();

Layout load_layout(std::string_view text, const RecipeBook& book = RecipeBook::standard());
Layout load_layout_file(const std::filesystem::path& path, const RecipeBook& book = RecipeBook::standard());

/// Structural checks shared by load_layout and generated layouts; throws ValidationError.
void validate_layout(const Layout& layout);

} // namespace hrt
