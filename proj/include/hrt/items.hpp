#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hrt {

enum class Ingredient : std::uint8_t { Onion, Tomato };

inline constexpr std::array<Ingredient, 2> kIngredients{Ingredient::Onion, Ingredient::Tomato};

std::string_view to_string(Ingredient i);
std::optional<Ingredient> ingredient_from_string(std::string_view s);

/// Ingredient multiset. Ordering and equality are element-wise on the counts.
class Ingredients {
public:
    Ingredients() = default;
    Ingredients(int onions, int tomatoes) : counts_{onions, tomatoes} {}

    int count(Ingredient i) const { return counts_[static_cast<std::size_t>(i)]; }
    void add(Ingredient i, int n = 1) { counts_[static_cast<std::size_t>(i)] += n; }
    int size() const { return counts_[0] + counts_[1]; }
    bool empty() const { return size() == 0; }

    /// Size of the multiset intersection with `other`.
    int overlap(const Ingredients& other) const;

    /// e.g. "onion x3" or "onion x2, tomato x1"; "empty" for the empty set.
    std::string describe() const;

    auto operator<=>(const Ingredients&) const = default;

private:
    std::array<int, 2> counts_{0, 0};
};

enum class ItemKind : std::uint8_t { None, Onion, Tomato, Dish, Soup };

std::string_view to_string(ItemKind k);
std::optional<ItemKind> item_kind_from_string(std::string_view s);

constexpr ItemKind item_of(Ingredient i) {
    return i == Ingredient::Onion ? ItemKind::Onion : ItemKind::Tomato;
}

constexpr std::optional<Ingredient> ingredient_of(ItemKind k) {
    if (k == ItemKind::Onion) return Ingredient::Onion;
    if (k == ItemKind::Tomato) return Ingredient::Tomato;
    return std::nullopt;
}

/// What an agent or counter holds. `contents` is only meaningful for soups.
struct Item {
    ItemKind kind = ItemKind::None;
    Ingredients contents{};

    static Item none() { return {}; }
    static Item of(ItemKind k) { return {k, {}}; }
    static Item soup(Ingredients c) { return {ItemKind::Soup, c}; }

    bool empty() const { return kind == ItemKind::None; }
    std::string describe() const;

    auto operator<=>(const Item&) const = default;
};

} // namespace hrt
