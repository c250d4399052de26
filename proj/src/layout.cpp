#include "hrt/layout.hpp"
#include "hrt/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

namespace hrt {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

int parse_positive(std::string_view key, std::string_view value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || out <= 0)
        throw ParseError("header '" + std::string(key) + "' needs a positive integer, got '" + std::string(value) + "'");
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string_view to_string(AgentRole r) {
    return r == AgentRole::Human ? "human" : "robot";
}

RecipeBook::RecipeBook(std::vector<Recipe> recipes) : recipes_(std::move(recipes)) {
    for (std::size_t i = 0; i < recipes_.size(); ++i) {
        const Recipe& r = recipes_[i];
        if (r.id.empty()) throw ValidationError("recipe with empty id");
        if (r.required.empty()) throw ValidationError("recipe '" + r.id + "' has no ingredients");
        if (r.points <= 0) throw ValidationError("recipe '" + r.id + "' must award positive points");
        if (r.cook_ticks <= 0) throw ValidationError("recipe '" + r.id + "' needs positive cook_ticks");
        for (std::size_t j = 0; j < i; ++j)
            if (recipes_[j].id == r.id) throw ValidationError("duplicate recipe id '" + r.id + "'");
    }
}

RecipeBook RecipeBook::standard() {
    return RecipeBook({
        Recipe{"onion_soup", Ingredients(3, 0), 20, 53},
        Recipe{"tomato_soup", Ingredients(0, 3), 20, 53},
        Recipe{"onion_tomato_soup", Ingredients(2, 1), 20, 53},
    });
}

const Recipe* RecipeBook::find(std::string_view id) const {
    for (const Recipe& r : recipes_)
        if (r.id == id) return &r;
    return nullptr;
}

const Recipe& RecipeBook::at(std::string_view id) const {
    if (const Recipe* r = find(id)) return *r;
    throw ValidationError("unknown recipe '" + std::string(id) + "'");
}

RecipeBook parse_recipe_book(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("recipe book: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("recipe book must be a JSON list");
    std::vector<Recipe> recipes;
    try {
        for (const auto& rec : doc) {
            Recipe r;
            r.id = rec.at("id").get<std::string>();
            for (const auto& ing : rec.at("ingredients")) {
                const auto name = ing.at("name").get<std::string>();
                const auto kind = ingredient_from_string(name);
                if (!kind) throw ParseError("recipe '" + r.id + "': unknown ingredient '" + name + "'");
                r.required.add(*kind, ing.at("count").get<int>());
            }
            r.cook_ticks = rec.value("cook_ticks", 20);
            r.points = rec.value("points", 53);
            recipes.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("recipe book: ") + e.what());
    }
    return RecipeBook(std::move(recipes));
}

RecipeBook load_recipe_book(const std::filesystem::path& path) {
    return parse_recipe_book(read_file(path));
}

std::string recipe_book_json(const RecipeBook& book) {
    nlohmann::json out = nlohmann::json::array();
    for (const Recipe& r : book.recipes()) {
        nlohmann::json ings = nlohmann::json::array();
        for (Ingredient i : kIngredients)
            if (r.required.count(i) > 0) ings.push_back({{"name", to_string(i)}, {"count", r.required.count(i)}});
        out.push_back({{"id", r.id}, {"ingredients", ings}, {"cook_ticks", r.cook_ticks}, {"points", r.points}});
    }
    return out.dump();
}

TileKind Layout::at(GridPos p) const {
    if (!in_bounds(p)) return TileKind::Counter;
    return tiles[static_cast<std::size_t>(p.y * width + p.x)];
}

std::vector<GridPos> Layout::cells_of(TileKind k) const {
    std::vector<GridPos> out;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (at({x, y}) == k) out.push_back({x, y});
    return out;
}

std::vector<GridPos> Layout::floor_cells() const {
    return cells_of(TileKind::Floor);
}

std::vector<GridPos> Layout::fixtures() const {
    std::vector<GridPos> out;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (at({x, y}) != TileKind::Floor) out.push_back({x, y});
    return out;
}

std::vector<GridPos> Layout::adjacent_floor(GridPos p) const {
    std::vector<GridPos> out;
    for (Direction d : kDirections) {
        const GridPos n = neighbor(p, d);
        if (is_floor(n)) out.push_back(n);
    }
    return out;
}

std::vector<std::string> Layout::rows() const {
    std::vector<std::string> out(static_cast<std::size_t>(height), std::string(static_cast<std::size_t>(width), ' '));
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) out[y][x] = glyph(at({x, y}));
    for (int i = 0; i < kAgentCount; ++i) {
        const GridPos s = starts[static_cast<std::size_t>(i)];
        if (in_bounds(s)) out[s.y][s.x] = static_cast<char>('1' + i);
    }
    return out;
}

std::string Layout::to_text() const {
    std::ostringstream out;
    out << "name: " << name << '\n'
        << "tick_hz: " << tick_hz << '\n'
        << "trial_seconds: " << trial_seconds << '\n'
        << "pot_capacity: " << pot_capacity << '\n';
    if (!orders.empty()) {
        out << "recipes: ";
        for (std::size_t i = 0; i < orders.size(); ++i) out << (i ? "," : "") << orders[i].id;
        out << '\n';
    }
    for (const std::string& row : rows()) out << row << '\n';
    return out.str();
}

std::string_view sample_layout_text() {
    return "name: sample\n"
           "tick_hz: 5\n"
           "trial_seconds: 60\n"
           "recipes: onion_soup\n"
           "\n"
           "XXOXX\n"
           "X1  X\n"
           "P  2S\n"
           "X   X\n"
           "XXDXX\n";
}

Layout load_layout(std::string_view text, const RecipeBook& book) {
    if (trim(text).empty()) throw ParseError("empty layout text");

    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos <= text.size();) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }

    Layout layout;
    layout.name = "unnamed";
    std::vector<std::string> order_ids;

    std::size_t i = 0;
    for (; i < lines.size() && lines[i].find(':') != std::string_view::npos; ++i) {
        const std::string_view line = lines[i];
        const std::size_t colon = line.find(':');
        const std::string_view key = trim(line.substr(0, colon));
        const std::string_view value = trim(line.substr(colon + 1));
        if (key == "name") {
            layout.name = std::string(value);
        } else if (key == "tick_hz") {
            layout.tick_hz = parse_positive(key, value);
        } else if (key == "trial_seconds") {
            layout.trial_seconds = parse_positive(key, value);
        } else if (key == "pot_capacity") {
            layout.pot_capacity = parse_positive(key, value);
        } else if (key == "recipes") {
            std::string_view rest = value;
            while (!rest.empty()) {
                const std::size_t comma = rest.find(',');
                const std::string_view id = trim(rest.substr(0, comma));
                if (!id.empty()) order_ids.emplace_back(id);
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
        } else {
            throw ParseError("unknown header key '" + std::string(key) + "'");
        }
    }
    // A blank separator between header and grid is allowed.
    while (i < lines.size() && lines[i].empty()) ++i;

    std::size_t end = lines.size();
    while (end > i && lines[end - 1].empty()) --end;
    if (end == i) throw ParseError("layout has no grid rows");

    layout.height = static_cast<int>(end - i);
    layout.width = static_cast<int>(lines[i].size());
    if (layout.width == 0) throw ParseError("layout has an empty first row");
    layout.tiles.reserve(static_cast<std::size_t>(layout.width * layout.height));

    std::array<int, kAgentCount> start_count{0, 0};
    for (int y = 0; y < layout.height; ++y) {
        const std::string_view row = lines[i + static_cast<std::size_t>(y)];
        if (static_cast<int>(row.size()) != layout.width)
            throw ParseError("ragged rows: row " + std::to_string(y) + " has " + std::to_string(row.size()) +
                             " glyphs, expected " + std::to_string(layout.width));
        for (int x = 0; x < layout.width; ++x) {
            const char c = row[static_cast<std::size_t>(x)];
            if (c == '1' || c == '2') {
                const int who = c - '1';
                layout.starts[static_cast<std::size_t>(who)] = {x, y};
                ++start_count[static_cast<std::size_t>(who)];
                layout.tiles.push_back(TileKind::Floor);
                continue;
            }
            const auto kind = tile_from_glyph(c);
            if (!kind)
                throw ParseError(std::string("unknown glyph '") + c + "' at " + to_string(GridPos{x, y}));
            layout.tiles.push_back(*kind);
        }
    }
    if (start_count[0] > 1 || start_count[1] > 1) throw ValidationError("duplicate agent start glyph");
    if (start_count[0] == 0) layout.starts[0] = {-1, -1};
    if (start_count[1] == 0) layout.starts[1] = {-1, -1};

    if (order_ids.empty()) order_ids.emplace_back("onion_soup");
    for (const std::string& id : order_ids) layout.orders.push_back(book.at(id));

    validate_layout(layout);
    return layout;
}

Layout load_layout_file(const std::filesystem::path& path, const RecipeBook& book) {
    return load_layout(read_file(path), book);
}

void validate_layout(const Layout& layout) {
    if (layout.width <= 0 || layout.height <= 0 ||
        layout.tiles.size() != static_cast<std::size_t>(layout.width * layout.height))
        throw ValidationError("layout grid is not rectangular");

    auto count = [&](TileKind k) { return layout.cells_of(k).size(); };
    if (count(TileKind::Pot) == 0) throw ValidationError("layout has no pot");
    if (count(TileKind::ServeWindow) == 0) throw ValidationError("layout has no serve window");
    if (count(TileKind::OnionDispenser) + count(TileKind::TomatoDispenser) == 0)
        throw ValidationError("layout has no ingredient dispenser");
    if (count(TileKind::DishDispenser) == 0) throw ValidationError("layout has no dish dispenser");

    for (int i = 0; i < kAgentCount; ++i) {
        const GridPos s = layout.starts[static_cast<std::size_t>(i)];
        if (!layout.is_floor(s))
            throw ValidationError(std::string("missing or invalid ") + std::string(to_string(static_cast<AgentRole>(i))) +
                                  " start");
    }
    if (layout.starts[0] == layout.starts[1]) throw ValidationError("agents share a start cell");
    if (layout.pot_capacity <= 0) throw ValidationError("pot capacity must be positive");

    for (const Recipe& r : layout.orders) {
        if (r.required.count(Ingredient::Onion) > 0 && count(TileKind::OnionDispenser) == 0)
            throw ValidationError("recipe '" + r.id + "' needs onions but the layout has no onion dispenser");
        if (r.required.count(Ingredient::Tomato) > 0 && count(TileKind::TomatoDispenser) == 0)
            throw ValidationError("recipe '" + r.id + "' needs tomatoes but the layout has no tomato dispenser");
        if (r.required.size() > layout.pot_capacity)
            throw ValidationError("recipe '" + r.id + "' does not fit in a pot");
    }

    // Floor must be a single 4-connected region.
    const auto floor = layout.floor_cells();
    std::vector<char> seen(layout.tiles.size(), 0);
    std::queue<GridPos> frontier;
    const GridPos origin = layout.starts[0];
    frontier.push(origin);
    seen[static_cast<std::size_t>(origin.y * layout.width + origin.x)] = 1;
    std::size_t reached = 0;
    while (!frontier.empty()) {
        const GridPos p = frontier.front();
        frontier.pop();
        ++reached;
        for (Direction d : kDirections) {
            const GridPos n = neighbor(p, d);
            if (!layout.is_floor(n)) continue;
            char& mark = seen[static_cast<std::size_t>(n.y * layout.width + n.x)];
            if (mark) continue;
            mark = 1;
            frontier.push(n);
        }
    }
    if (reached != floor.size()) throw ValidationError("floor is not one connected region");
}

} // namespace hrt
